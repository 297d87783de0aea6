#include "usfda/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "usfda/error.hpp"
#include "usfda/fft.hpp"

namespace usfda::spectral {
namespace {

// Separable 2D transform: every row, then every column.
void transform_2d(std::span<Complex> data, std::size_t width, std::size_t height,
                  FftDirection dir) {
  const FftPlan row_plan(width);
  for (std::size_t y = 0; y < height; ++y) row_plan.execute(data.subspan(y * width, width), dir);

  const FftPlan col_plan(height);
  std::vector<Complex> column(height);
  for (std::size_t x = 0; x < width; ++x) {
    for (std::size_t y = 0; y < height; ++y) column[y] = data[y * width + x];
    col_plan.execute(column, dir);
    for (std::size_t y = 0; y < height; ++y) data[y * width + x] = column[y];
  }
}

std::vector<Complex> unnormalized_inverse(const Spectrum2D& spec) {
  std::vector<Complex> data(spec.data().begin(), spec.data().end());
  transform_2d(data, spec.width(), spec.height(), FftDirection::inverse);
  return data;
}

double residue_of(std::span<const Complex> data, double scale) {
  double max_real = 0.0;
  double max_imag = 0.0;
  for (const Complex& c : data) {
    max_real = std::max(max_real, std::abs(c.real() * scale));
    max_imag = std::max(max_imag, std::abs(c.imag() * scale));
  }
  return max_imag / (max_real + 1.0);
}

Spectrum2D rotate(const Spectrum2D& spec, std::size_t dx, std::size_t dy, DcPosition dc) {
  const std::size_t w = spec.width();
  const std::size_t h = spec.height();
  Spectrum2D out(w, h, dc);
  for (std::size_t n = 0; n < h; ++n) {
    const std::size_t tn = (n + dy) % h;
    for (std::size_t m = 0; m < w; ++m) out((m + dx) % w, tn) = spec(m, n);
  }
  return out;
}

}  // namespace

Spectrum2D forward_dft(const Image2D& img) {
  img.validate_finite();
  std::vector<Complex> data(img.data().begin(), img.data().end());
  transform_2d(data, img.width(), img.height(), FftDirection::forward);
  return Spectrum2D(img.width(), img.height(), std::move(data), DcPosition::corner);
}

double imaginary_residue(const Spectrum2D& spec) {
  const auto data = unnormalized_inverse(spec);
  return residue_of(data, 1.0 / static_cast<double>(spec.size()));
}

Image2D inverse_dft(const Spectrum2D& spec) {
  if (spec.dc_position() != DcPosition::corner)
    throw InvalidInputError("inverse_dft requires a corner-DC spectrum; unshift it first");
  spec.validate_finite();

  const auto data = unnormalized_inverse(spec);
  const double scale = 1.0 / static_cast<double>(spec.size());
  const double residue = residue_of(data, scale);
  if (!(residue < kImagResidueTolerance)) {
    throw SpectralInconsistencyError(
        "inverse transform left an imaginary residue of " + std::to_string(residue) +
        " (relative); the spectrum is not conjugate-symmetric");
  }

  std::vector<double> real(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) real[i] = data[i].real() * scale;
  return Image2D(spec.width(), spec.height(), std::move(real));
}

MagPhase split_mag_phase(const Spectrum2D& spec) {
  spec.validate_finite();
  MagPhase mp;
  mp.shape = spec.shape();
  mp.dc_position = spec.dc_position();
  mp.magnitude.resize(spec.size());
  mp.phase.resize(spec.size());
  const auto data = spec.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double mag = std::abs(data[i]);
    mp.magnitude[i] = mag;
    if (mag == 0.0) {
      mp.phase[i] = 0.0;
    } else {
      double phase = std::atan2(data[i].imag(), data[i].real());
      // atan2 returns -pi for a negative real with a -0.0 imaginary part.
      if (phase <= -std::numbers::pi) phase = std::numbers::pi;
      mp.phase[i] = phase;
    }
  }
  return mp;
}

Spectrum2D recombine(const MagPhase& mp) {
  const std::size_t n = mp.shape.size();
  if (mp.magnitude.size() != n || mp.phase.size() != n)
    throw InvalidInputError("magnitude/phase arrays do not match shape " + mp.shape.str());
  std::vector<Complex> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = mp.magnitude[i];
    const double phase = mp.phase[i];
    if (!(mag >= 0.0) || !std::isfinite(mag))
      throw InvalidInputError("magnitude at bin " + std::to_string(i) + " is negative or non-finite");
    if (!std::isfinite(phase))
      throw InvalidInputError("phase at bin " + std::to_string(i) + " is non-finite");
    data[i] = {mag * std::cos(phase), mag * std::sin(phase)};
  }
  return Spectrum2D(mp.shape.width, mp.shape.height, std::move(data), mp.dc_position);
}

Spectrum2D shift_dc(const Spectrum2D& spec) {
  if (spec.dc_position() != DcPosition::corner)
    throw InvalidInputError("shift_dc expects a corner-DC spectrum");
  return rotate(spec, spec.width() / 2, spec.height() / 2, DcPosition::centered);
}

Spectrum2D unshift_dc(const Spectrum2D& spec) {
  if (spec.dc_position() != DcPosition::centered)
    throw InvalidInputError("unshift_dc expects a centered-DC spectrum");
  const std::size_t w = spec.width();
  const std::size_t h = spec.height();
  return rotate(spec, w - w / 2, h - h / 2, DcPosition::corner);
}

Image2D log_magnitude_image(const Spectrum2D& spec) {
  const Spectrum2D centered =
      spec.dc_position() == DcPosition::centered ? spec : shift_dc(spec);
  std::vector<double> values(centered.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = std::log1p(std::abs(centered.data()[i]));
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double range = *hi - *lo;
  for (double& v : values) v = range > 0.0 ? (v - min) / range : 0.0;
  return Image2D(spec.width(), spec.height(), std::move(values));
}

}  // namespace usfda::spectral
