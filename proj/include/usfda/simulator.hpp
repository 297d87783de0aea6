#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "usfda/image.hpp"

namespace usfda::simulator {

// Scatterer phantom. The anechoic mask is stretched over the full
// lateral x axial extent; scatterers landing on a mask pixel > 0.5 are
// silenced.
struct PhantomSpec {
  double width_mm = 50.0;
  double depth_mm = 50.0;
  std::size_t n_scatterers = 100000;
  Image2D anechoic_mask;
  std::uint64_t seed = 0;
  std::string mask_name;  // provenance only

  void validate() const;
};

// Pulse and aperture parameters of the convolution speckle model.
struct PsfParams {
  double center_frequency_hz = 3.5e6;
  double fractional_bandwidth = 0.6;  // -6 dB, relative to the center frequency
  double speed_of_sound_mps = 1540.0;
  double f_number = 2.0;
  double sampling_frequency_hz = 40e6;

  void validate() const;
  double wavelength_mm() const { return speed_of_sound_mps / center_frequency_hz * 1e3; }
  double axial_step_mm() const { return speed_of_sound_mps / (2.0 * sampling_frequency_hz) * 1e3; }

  bool operator==(const PsfParams&) const = default;
};

inline constexpr double kDynamicRangeDb = 60.0;
inline constexpr std::size_t kDefaultOutputSize = 256;

struct Scatterer {
  double x_mm;  // lateral
  double z_mm;  // axial (depth)
  double amplitude;

  bool operator==(const Scatterer&) const = default;
};

struct SimulatedSample {
  Image2D bmode;         // log-compressed, [0,1]
  Image2D envelope;      // pre-log, normalized by its maximum
  Image2D ground_truth;  // binary
  PhantomSpec phantom;
  PsfParams psf;
};

// Uniform positions over the phantom, standard-normal amplitudes, zero
// amplitude for positions inside the anechoic mask (nearest-pixel lookup).
std::vector<Scatterer> scatter_field(const PhantomSpec& spec);

// The anechoic mask resampled (nearest neighbour) to out_size x out_size.
Image2D resample_mask(const Image2D& mask, std::size_t out_size);

// Bins scatterers onto an RF grid (axial step c/(2 fs), lateral pitch one
// wavelength), convolves with a separable PSF (Gaussian-windowed cosine
// axially, Gaussian of FWHM wavelength * f_number laterally), detects the
// axial analytic-signal envelope, log-compresses over 60 dB and resamples
// bilinearly to out_size x out_size.
SimulatedSample render_bmode(const PhantomSpec& spec, std::span<const Scatterer> scatterers,
                             const PsfParams& psf, std::size_t out_size = kDefaultOutputSize);

// scatter_field followed by render_bmode.
SimulatedSample simulate(const PhantomSpec& spec, const PsfParams& psf,
                         std::size_t out_size = kDefaultOutputSize);

// Magnitude of the analytic signal of a real sequence (FFT Hilbert method).
std::vector<double> analytic_envelope(std::span<const double> signal);

// Bilinear resampling on pixel centers; edges are clamped.
Image2D resample_bilinear(const Image2D& img, std::size_t out_width, std::size_t out_height);

struct DatasetParams {
  PsfParams psf;
  double width_mm = 50.0;
  double depth_mm = 50.0;
  std::size_t n_scatterers = 100000;
  std::size_t out_size = kDefaultOutputSize;
};

// Mask files (.png/.pgm) in `mask_dir`, sorted by name.
std::vector<std::filesystem::path> list_mask_files(const std::filesystem::path& mask_dir);

// Seeded choice of `count` distinct masks from mask_dir, one sample each.
// Sample i uses phantom seed (seed XOR i), so results do not depend on `jobs`.
std::vector<SimulatedSample> generate_dataset(const std::filesystem::path& mask_dir,
                                              std::size_t count, std::uint64_t seed,
                                              const DatasetParams& params, unsigned jobs = 1);

nlohmann::json to_json(const PsfParams& psf);
PsfParams psf_from_json(const nlohmann::json& j);
nlohmann::json provenance_json(const SimulatedSample& sample);

}  // namespace usfda::simulator
