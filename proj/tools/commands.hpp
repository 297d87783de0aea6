#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace usfda::cli {

namespace fs = std::filesystem;

struct SimulateOptions {
  fs::path masks;
  fs::path out;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::optional<fs::path> psf_config;
  std::size_t size = 256;
  std::size_t n_scatterers = 100000;
  double width_mm = 50.0;
  double depth_mm = 50.0;
  std::string format = "png";
};

struct AdaptOptions {
  fs::path source;
  fs::path target;
  fs::path out;
  double alpha = 0.014;
  std::uint64_t seed = 0;
  std::string pairing = "random";
  std::uint64_t iteration = 0;
  std::optional<fs::path> manifest;
  std::string range = "clip";
};

struct SplitOptions {
  fs::path corpus;
  fs::path out;
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
  std::uint64_t seed = 0;
};

struct EvaluateOptions {
  fs::path pred;
  fs::path gt;
  std::optional<fs::path> out;
  double epsilon = 1e-6;
  bool table = false;
};

struct MaskOptions {
  std::size_t width = 256;
  std::size_t height = 256;
  double alpha = 0.014;
  fs::path out;
};

struct SpectrumOptions {
  fs::path input;
  fs::path out;
};

// Every command returns a JSON summary of what it wrote.
nlohmann::json run_simulate(const SimulateOptions& opt, unsigned jobs);
nlohmann::json run_adapt(const AdaptOptions& opt, unsigned jobs);
nlohmann::json run_split(const SplitOptions& opt);
nlohmann::json run_evaluate(const EvaluateOptions& opt, unsigned jobs);
nlohmann::json run_mask(const MaskOptions& opt);
nlohmann::json run_spectrum(const SpectrumOptions& opt);

}  // namespace usfda::cli
