#pragma once

#include <stdexcept>
#include <string>

namespace usfda {

// Base for every error raised by the library. The CLI maps each subclass to
// its own exit code, see tools/usfda.cpp.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

#define USFDA_DEFINE_ERROR(Name, tag)                     \
  class Name : public Error {                             \
   public:                                                \
    using Error::Error;                                   \
    const char* kind() const noexcept override { return tag; } \
  };

USFDA_DEFINE_ERROR(InvalidInputError, "invalid-input")
USFDA_DEFINE_ERROR(ParameterError, "parameter")
USFDA_DEFINE_ERROR(ShapeError, "shape")
USFDA_DEFINE_ERROR(SpectralInconsistencyError, "spectral-inconsistency")
USFDA_DEFINE_ERROR(ConfigurationError, "configuration")
USFDA_DEFINE_ERROR(IngestionError, "ingestion")
USFDA_DEFINE_ERROR(ManifestError, "manifest")
USFDA_DEFINE_ERROR(IntegrityError, "integrity")
USFDA_DEFINE_ERROR(PairingError, "pairing")

#undef USFDA_DEFINE_ERROR

}  // namespace usfda
