#include "usfda/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "usfda/error.hpp"
#include "usfda/fft.hpp"
#include "usfda/image_io.hpp"
#include "usfda/parallel.hpp"
#include "usfda/rng.hpp"

namespace usfda::simulator {
namespace fs = std::filesystem;
namespace {

constexpr std::uint64_t kScatterStream = 0x5ca7;
constexpr std::uint64_t kMaskChoiceStream = 0x3a5c;
const double kFwhmToSigma = 1.0 / (2.0 * std::sqrt(2.0 * std::numbers::ln2));

// Pixel of an (extent-stretched) mask containing a physical coordinate.
std::size_t cell_of(double pos, double extent, std::size_t cells) {
  const double u = pos / extent * static_cast<double>(cells);
  return std::min(static_cast<std::size_t>(std::max(u, 0.0)), cells - 1);
}

std::vector<double> axial_pulse(const PsfParams& psf) {
  // Gaussian spectrum whose -6 dB width is fractional_bandwidth * f0.
  const double sigma_f = psf.fractional_bandwidth * psf.center_frequency_hz * kFwhmToSigma;
  const double sigma_samples = psf.sampling_frequency_hz / (2.0 * std::numbers::pi * sigma_f);
  const auto half = static_cast<std::ptrdiff_t>(std::floor(3.0 * sigma_samples));
  if (2 * half + 1 < 3)
    throw ParameterError("PSF window spans fewer than 3 axial samples; raise the sampling frequency or "
                         "lower the bandwidth");
  std::vector<double> pulse(static_cast<std::size_t>(2 * half + 1));
  const double omega = 2.0 * std::numbers::pi * psf.center_frequency_hz / psf.sampling_frequency_hz;
  for (std::ptrdiff_t i = -half; i <= half; ++i) {
    const double t = static_cast<double>(i);
    pulse[static_cast<std::size_t>(i + half)] =
        std::exp(-t * t / (2.0 * sigma_samples * sigma_samples)) * std::cos(omega * t);
  }
  return pulse;
}

std::vector<double> lateral_profile(const PsfParams& psf, double pitch_mm) {
  const double sigma_cols = psf.wavelength_mm() * psf.f_number * kFwhmToSigma / pitch_mm;
  const auto half = std::max<std::ptrdiff_t>(1, static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma_cols)));
  std::vector<double> profile(static_cast<std::size_t>(2 * half + 1));
  for (std::ptrdiff_t i = -half; i <= half; ++i) {
    const double d = static_cast<double>(i);
    profile[static_cast<std::size_t>(i + half)] = std::exp(-d * d / (2.0 * sigma_cols * sigma_cols));
  }
  return profile;
}

// Zero-padded "same" convolution of a strided sequence.
void convolve_same(std::span<const double> in, std::span<double> out, std::span<const double> kernel) {
  const auto n = static_cast<std::ptrdiff_t>(in.size());
  const auto half = static_cast<std::ptrdiff_t>(kernel.size() / 2);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double v = in[static_cast<std::size_t>(i)];
    if (v == 0.0) continue;
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + half);
    for (std::ptrdiff_t j = lo; j <= hi; ++j)
      out[static_cast<std::size_t>(j)] += v * kernel[static_cast<std::size_t>(j - i + half)];
  }
}

}  // namespace

void PhantomSpec::validate() const {
  if (n_scatterers < 1) throw ParameterError("phantom needs at least one scatterer");
  if (!(width_mm > 0.0) || !(depth_mm > 0.0)) throw ParameterError("phantom extents must be positive");
  if (anechoic_mask.size() == 0) throw ParameterError("phantom has no anechoic mask");
  for (double v : anechoic_mask.data())
    if (v != 0.0 && v != 1.0) throw ParameterError("anechoic mask must be binary (0/1)");
}

void PsfParams::validate() const {
  if (!(center_frequency_hz > 0.0) || !(speed_of_sound_mps > 0.0) || !(f_number > 0.0) ||
      !(sampling_frequency_hz > 0.0))
    throw ParameterError("PSF parameters must be positive");
  if (!(fractional_bandwidth > 0.0 && fractional_bandwidth < 2.0))
    throw ParameterError("fractional bandwidth must lie in (0,2)");
}

std::vector<Scatterer> scatter_field(const PhantomSpec& spec) {
  spec.validate();
  auto gen = rng::engine(rng::derive(spec.seed, kScatterStream));
  std::uniform_real_distribution<double> lateral(0.0, spec.width_mm);
  std::uniform_real_distribution<double> axial(0.0, spec.depth_mm);
  std::normal_distribution<double> amplitude(0.0, 1.0);

  const Image2D& mask = spec.anechoic_mask;
  std::vector<Scatterer> out(spec.n_scatterers);
  for (auto& s : out) {
    s.x_mm = lateral(gen);
    s.z_mm = axial(gen);
    s.amplitude = amplitude(gen);
    const std::size_t mx = cell_of(s.x_mm, spec.width_mm, mask.width());
    const std::size_t my = cell_of(s.z_mm, spec.depth_mm, mask.height());
    if (mask(mx, my) > 0.5) s.amplitude = 0.0;
  }
  return out;
}

Image2D resample_mask(const Image2D& mask, std::size_t out_size) {
  Image2D out(out_size, out_size);
  for (std::size_t y = 0; y < out_size; ++y) {
    const std::size_t my = cell_of((y + 0.5) / out_size, 1.0, mask.height());
    for (std::size_t x = 0; x < out_size; ++x) {
      const std::size_t mx = cell_of((x + 0.5) / out_size, 1.0, mask.width());
      out(x, y) = mask(mx, my) > 0.5 ? 1.0 : 0.0;
    }
  }
  return out;
}

std::vector<double> analytic_envelope(std::span<const double> signal) {
  const std::size_t n = signal.size();
  std::vector<double> env(n);
  if (n == 0) return env;
  std::vector<Complex> spec(signal.begin(), signal.end());
  const FftPlan plan(n);
  plan.execute(spec, FftDirection::forward);
  // One-sided spectrum: keep DC (and Nyquist), double positive frequencies.
  const std::size_t positive_end = (n + 1) / 2;
  for (std::size_t k = 1; k < positive_end; ++k) spec[k] *= 2.0;
  for (std::size_t k = n / 2 + 1; k < n; ++k) spec[k] = 0.0;
  plan.execute(spec, FftDirection::inverse);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) env[i] = std::abs(spec[i]) * scale;
  return env;
}

Image2D resample_bilinear(const Image2D& img, std::size_t out_width, std::size_t out_height) {
  Image2D out(out_width, out_height);
  auto coord = [](std::size_t i, std::size_t out_n, std::size_t in_n) {
    const double u = (static_cast<double>(i) + 0.5) * static_cast<double>(in_n) / static_cast<double>(out_n) - 0.5;
    const double clamped = std::clamp(u, 0.0, static_cast<double>(in_n - 1));
    const auto i0 = static_cast<std::size_t>(std::floor(clamped));
    const std::size_t i1 = std::min(i0 + 1, in_n - 1);
    return std::tuple{i0, i1, clamped - static_cast<double>(i0)};
  };
  for (std::size_t y = 0; y < out_height; ++y) {
    const auto [y0, y1, fy] = coord(y, out_height, img.height());
    for (std::size_t x = 0; x < out_width; ++x) {
      const auto [x0, x1, fx] = coord(x, out_width, img.width());
      const double top = img(x0, y0) * (1.0 - fx) + img(x1, y0) * fx;
      const double bottom = img(x0, y1) * (1.0 - fx) + img(x1, y1) * fx;
      out(x, y) = top * (1.0 - fy) + bottom * fy;
    }
  }
  return out;
}

SimulatedSample render_bmode(const PhantomSpec& spec, std::span<const Scatterer> scatterers,
                             const PsfParams& psf, std::size_t out_size) {
  spec.validate();
  psf.validate();
  if (scatterers.empty()) throw ParameterError("scatterer list is empty");
  if (out_size < 16) throw ParameterError("output size must be at least 16 pixels");

  const auto pulse = axial_pulse(psf);
  const auto n_lines = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(spec.width_mm / psf.wavelength_mm())));
  const auto n_samples = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(spec.depth_mm / psf.axial_step_mm())));
  const double pitch_mm = spec.width_mm / static_cast<double>(n_lines);
  const auto profile = lateral_profile(psf, pitch_mm);

  // lines[x * n_samples + z]: one contiguous RF line per lateral position.
  std::vector<double> grid(n_lines * n_samples, 0.0);
  for (const Scatterer& s : scatterers) {
    if (s.amplitude == 0.0) continue;
    const std::size_t x = cell_of(s.x_mm, spec.width_mm, n_lines);
    const std::size_t z = cell_of(s.z_mm, spec.depth_mm, n_samples);
    grid[x * n_samples + z] += s.amplitude;
  }

  std::vector<double> rf(grid.size());
  for (std::size_t x = 0; x < n_lines; ++x) {
    convolve_same(std::span(grid).subspan(x * n_samples, n_samples),
                  std::span(rf).subspan(x * n_samples, n_samples), pulse);
  }
  std::vector<double> row_in(n_lines), row_out(n_lines);
  for (std::size_t z = 0; z < n_samples; ++z) {
    for (std::size_t x = 0; x < n_lines; ++x) row_in[x] = rf[x * n_samples + z];
    convolve_same(row_in, row_out, profile);
    for (std::size_t x = 0; x < n_lines; ++x) rf[x * n_samples + z] = row_out[x];
  }

  Image2D envelope(n_lines, n_samples);
  for (std::size_t x = 0; x < n_lines; ++x) {
    const auto env = analytic_envelope(std::span(rf).subspan(x * n_samples, n_samples));
    for (std::size_t z = 0; z < n_samples; ++z) envelope(x, z) = env[z];
  }

  const double peak = *std::max_element(envelope.data().begin(), envelope.data().end());
  Image2D bmode(n_lines, n_samples);
  if (peak > 0.0) {
    for (double& v : envelope.data()) v /= peak;
    auto env = envelope.data();
    auto out = bmode.data();
    for (std::size_t i = 0; i < env.size(); ++i) {
      const double db = env[i] > 0.0 ? 20.0 * std::log10(env[i]) : -kDynamicRangeDb;
      out[i] = (std::clamp(db, -kDynamicRangeDb, 0.0) + kDynamicRangeDb) / kDynamicRangeDb;
    }
    const auto [lo, hi] = std::minmax_element(out.begin(), out.end());
    const double min = *lo;
    const double range = *hi - *lo;
    for (double& v : out) v = range > 0.0 ? (v - min) / range : 0.0;
  }

  SimulatedSample sample;
  sample.bmode = resample_bilinear(bmode, out_size, out_size);
  sample.envelope = resample_bilinear(envelope, out_size, out_size);
  sample.ground_truth = resample_mask(spec.anechoic_mask, out_size);
  sample.phantom = spec;
  sample.psf = psf;
  return sample;
}

SimulatedSample simulate(const PhantomSpec& spec, const PsfParams& psf, std::size_t out_size) {
  const auto scatterers = scatter_field(spec);
  return render_bmode(spec, scatterers, psf, out_size);
}

std::vector<fs::path> list_mask_files(const fs::path& mask_dir) {
  auto files = io::list_image_files(mask_dir);
  std::erase_if(files, [](const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext != ".png" && ext != ".pgm";
  });
  return files;
}

std::vector<SimulatedSample> generate_dataset(const fs::path& mask_dir, std::size_t count,
                                              std::uint64_t seed, const DatasetParams& params,
                                              unsigned jobs) {
  params.psf.validate();
  const auto files = list_mask_files(mask_dir);
  if (count > files.size())
    throw ConfigurationError("requested " + std::to_string(count) + " samples but " + mask_dir.string() +
                             " holds only " + std::to_string(files.size()) + " masks");

  std::vector<std::size_t> order(files.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto gen = rng::engine(rng::derive(seed, kMaskChoiceStream));
  std::shuffle(order.begin(), order.end(), gen);

  std::vector<PhantomSpec> specs(count);
  for (std::size_t i = 0; i < count; ++i) {
    const fs::path& file = files[order[i]];
    PhantomSpec& spec = specs[i];
    spec.anechoic_mask = io::read_mask(file);
    spec.mask_name = file.filename().string();
    spec.width_mm = params.width_mm;
    spec.depth_mm = params.depth_mm;
    spec.n_scatterers = params.n_scatterers;
    spec.seed = seed ^ static_cast<std::uint64_t>(i);
  }

  std::vector<SimulatedSample> samples(count);
  parallel_for(count, jobs, [&](std::size_t i) { samples[i] = simulate(specs[i], params.psf, params.out_size); });
  return samples;
}

nlohmann::json to_json(const PsfParams& psf) {
  return {{"center_frequency_hz", psf.center_frequency_hz},
          {"fractional_bandwidth", psf.fractional_bandwidth},
          {"speed_of_sound_mps", psf.speed_of_sound_mps},
          {"f_number", psf.f_number},
          {"sampling_frequency_hz", psf.sampling_frequency_hz}};
}

PsfParams psf_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigurationError("PSF config must be a JSON object");
  PsfParams psf;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw ConfigurationError("PSF field '" + key + "' must be a number");
    const double v = value.get<double>();
    if (key == "center_frequency_hz")
      psf.center_frequency_hz = v;
    else if (key == "fractional_bandwidth")
      psf.fractional_bandwidth = v;
    else if (key == "speed_of_sound_mps")
      psf.speed_of_sound_mps = v;
    else if (key == "f_number")
      psf.f_number = v;
    else if (key == "sampling_frequency_hz")
      psf.sampling_frequency_hz = v;
    else
      throw ConfigurationError("unknown PSF field '" + key + "'");
  }
  psf.validate();
  return psf;
}

nlohmann::json provenance_json(const SimulatedSample& sample) {
  const PhantomSpec& p = sample.phantom;
  return {{"phantom",
           {{"width_mm", p.width_mm},
            {"depth_mm", p.depth_mm},
            {"n_scatterers", p.n_scatterers},
            {"seed", p.seed},
            {"mask", p.mask_name},
            {"mask_width", p.anechoic_mask.width()},
            {"mask_height", p.anechoic_mask.height()}}},
          {"psf", to_json(sample.psf)},
          {"model",
           {{"dynamic_range_db", kDynamicRangeDb},
            {"out_size", sample.bmode.width()},
            {"resampling", "bilinear"}}}};
}

}  // namespace usfda::simulator
