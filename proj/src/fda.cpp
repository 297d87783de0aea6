#include "usfda/fda.hpp"

#include <algorithm>
#include <string>

#include "usfda/error.hpp"
#include "usfda/parallel.hpp"
#include "usfda/spectral.hpp"

namespace usfda::fda {
namespace {

bool inside_band(std::size_t index, std::size_t extent, double alpha) {
  const double coord = 2.0 * static_cast<double>(index) / static_cast<double>(extent) - 1.0;
  return -alpha < coord && coord < alpha;
}

// Index of the point reflection of `i` about the centered DC bin.
std::size_t reflect(std::size_t i, std::size_t extent) {
  const std::size_t center = extent / 2;
  return (2 * center + extent - i) % extent;
}

void check_same_shape(const Image2D& a, const Image2D& b) {
  if (a.shape() != b.shape())
    throw ShapeError("source is " + a.shape().str() + " but target is " + b.shape().str());
}

}  // namespace

RangePolicy parse_range_policy(std::string_view name) {
  if (name == "clip") return RangePolicy::clip;
  if (name == "rescale") return RangePolicy::rescale;
  throw ParameterError("unknown range policy '" + std::string(name) + "' (expected clip|rescale)");
}

std::string_view to_string(RangePolicy policy) {
  return policy == RangePolicy::clip ? "clip" : "rescale";
}

LowFreqMask::LowFreqMask(std::size_t width, std::size_t height, double alpha)
    : width_(width), height_(height), alpha_(alpha), data_(width * height, 0) {
  if (width == 0 || height == 0)
    throw ParameterError("mask dimensions must be at least 1x1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ParameterError("alpha must lie in (0,1), got " + std::to_string(alpha));
  std::vector<unsigned char> rows(height);
  for (std::size_t y = 0; y < height; ++y) rows[y] = inside_band(y, height, alpha);
  for (std::size_t x = 0; x < width; ++x) {
    if (!inside_band(x, width, alpha)) continue;
    for (std::size_t y = 0; y < height; ++y) data_[y * width + x] = rows[y];
  }
}

LowFreqMask LowFreqMask::from_bits(std::size_t width, std::size_t height, std::vector<unsigned char> bits) {
  if (width == 0 || height == 0) throw ParameterError("mask dimensions must be at least 1x1");
  if (bits.size() != width * height) throw ShapeError("mask bits do not cover " + Shape{width, height}.str());
  LowFreqMask mask;
  mask.width_ = width;
  mask.height_ = height;
  mask.data_ = std::move(bits);
  for (auto& b : mask.data_) b = b != 0;
  return mask;
}

std::size_t LowFreqMask::count() const {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), 1));
}

bool LowFreqMask::symmetric_about_dc() const {
  for (std::size_t y = 0; y < height_; ++y)
    for (std::size_t x = 0; x < width_; ++x)
      if ((*this)(x, y) != (*this)(reflect(x, width_), reflect(y, height_))) return false;
  return true;
}

Image2D LowFreqMask::to_image() const {
  std::vector<double> values(data_.begin(), data_.end());
  return Image2D(width_, height_, std::move(values));
}

LowFreqMask build_mask(std::size_t width, std::size_t height, double alpha) {
  return LowFreqMask(width, height, alpha);
}

Image2D adapt_unclamped(const Image2D& source, const Image2D& target, double alpha) {
  check_same_shape(source, target);
  return adapt_unclamped(source, target, build_mask(source.width(), source.height(), alpha));
}

Image2D adapt_unclamped(const Image2D& source, const Image2D& target, const LowFreqMask& mask) {
  check_same_shape(source, target);
  const std::size_t w = source.width();
  const std::size_t h = source.height();
  if (mask.width() != w || mask.height() != h)
    throw ShapeError("mask is " + Shape{mask.width(), mask.height()}.str() + " but images are " +
                     source.shape().str());

  const auto src = spectral::split_mag_phase(spectral::shift_dc(spectral::forward_dft(source)));
  const auto tgt = spectral::split_mag_phase(spectral::shift_dc(spectral::forward_dft(target)));

  spectral::MagPhase swapped = src;
  const auto bits = mask.data();
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) swapped.magnitude[i] = tgt.magnitude[i];

  Spectrum2D spectrum = spectral::unshift_dc(spectral::recombine(swapped));
  if (spectral::imaginary_residue(spectrum) >= spectral::kImagResidueTolerance) {
    // Symmetrization fallback for masks that are not symmetric about DC.
    spectral::MagPhase sym = swapped;
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const std::size_t i = y * w + x;
        const std::size_t r = reflect(y, h) * w + reflect(x, w);
        sym.magnitude[i] = 0.5 * (swapped.magnitude[i] + swapped.magnitude[r]);
      }
    }
    spectrum = spectral::unshift_dc(spectral::recombine(sym));
  }
  return spectral::inverse_dft(spectrum);
}

Image2D apply_range_policy(Image2D img, RangePolicy policy) {
  auto data = img.data();
  if (data.empty()) return img;
  if (policy == RangePolicy::rescale) {
    const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
    const double min = *lo;
    const double range = *hi - *lo;
    if (range > 0.0) {
      for (double& v : data) v = (v - min) / range;
      return img;
    }
    // A constant image has no range to stretch; fall through to clipping.
  }
  for (double& v : data) v = std::clamp(v, 0.0, 1.0);
  return img;
}

Image2D adapt(const Image2D& source, const Image2D& target, const FdaParams& params) {
  return apply_range_policy(adapt_unclamped(source, target, params.alpha), params.range_policy);
}

std::vector<Image2D> adapt_batch(std::span<const Image2D> sources,
                                 std::span<const Image2D> targets,
                                 std::span<const std::size_t> pairing, const FdaParams& params,
                                 unsigned jobs) {
  if (pairing.size() != sources.size())
    throw ManifestError("pairing has " + std::to_string(pairing.size()) + " entries for " +
                        std::to_string(sources.size()) + " sources");
  for (std::size_t i = 0; i < pairing.size(); ++i) {
    if (pairing[i] >= targets.size())
      throw ManifestError("pairing entry " + std::to_string(i) + " references target " +
                          std::to_string(pairing[i]) + " but only " +
                          std::to_string(targets.size()) + " targets exist");
  }
  if (!(params.alpha > 0.0 && params.alpha < 1.0))
    throw ParameterError("alpha must lie in (0,1), got " + std::to_string(params.alpha));

  std::vector<Image2D> out(sources.size());
  parallel_for(sources.size(), jobs,
               [&](std::size_t i) { out[i] = adapt(sources[i], targets[pairing[i]], params); });
  return out;
}

}  // namespace usfda::fda
