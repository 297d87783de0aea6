#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "usfda/image.hpp"

namespace usfda::fda {

inline constexpr double kDefaultAlpha = 0.014;

enum class RangePolicy { clip, rescale };

RangePolicy parse_range_policy(std::string_view name);
std::string_view to_string(RangePolicy policy);

struct FdaParams {
  double alpha = kDefaultAlpha;
  RangePolicy range_policy = RangePolicy::clip;

  bool operator==(const FdaParams&) const = default;
};

// Binary low-frequency mask in centered coordinates (DC at the center):
//   mask(x, y) = 1  iff  -alpha < 2x/W - 1 < alpha  and  -alpha < 2y/H - 1 < alpha
// with strict inequalities over 0-based indices.
class LowFreqMask {
 public:
  LowFreqMask(std::size_t width, std::size_t height, double alpha);

  // Arbitrary mask in centered coordinates (row-major, nonzero = swap).
  // alpha() is 0 for such masks. Note that no alpha produces an empty mask
  // when either dimension is even: the DC index W/2 gives 2w/W - 1 == 0.
  static LowFreqMask from_bits(std::size_t width, std::size_t height, std::vector<unsigned char> bits);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  double alpha() const { return alpha_; }

  bool operator()(std::size_t x, std::size_t y) const { return data_[y * width_ + x] != 0; }
  std::span<const unsigned char> data() const { return data_; }
  std::size_t count() const;

  // The mask is invariant under the point reflection about the DC bin used
  // by shift_dc, i.e. (x, y) -> (2*floor(W/2) - x mod W, ...). Only then can
  // a magnitude swap keep a real image's spectrum conjugate-symmetric.
  bool symmetric_about_dc() const;

  Image2D to_image() const;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  double alpha_ = 0.0;
  std::vector<unsigned char> data_;

  LowFreqMask() = default;
};

// Throws ParameterError unless 0 < alpha < 1 and width, height >= 1.
LowFreqMask build_mask(std::size_t width, std::size_t height, double alpha);

// The swap itself: source phase everywhere, target magnitude inside the mask
// and source magnitude outside, inverted back to the image domain with no
// range policy applied. If the swapped spectrum leaves an imaginary residue
// (an asymmetric mask on odd sizes), the swapped magnitude is averaged with
// its point reflection about DC and the inverse retried.
Image2D adapt_unclamped(const Image2D& source, const Image2D& target, double alpha);
Image2D adapt_unclamped(const Image2D& source, const Image2D& target, const LowFreqMask& mask);

// adapt_unclamped followed by params.range_policy, returning values in [0,1].
Image2D adapt(const Image2D& source, const Image2D& target, const FdaParams& params);

Image2D apply_range_policy(Image2D img, RangePolicy policy);

// output[i] = adapt(sources[i], targets[pairing[i]], params). Work is spread
// over `jobs` threads; output order and content do not depend on it.
std::vector<Image2D> adapt_batch(std::span<const Image2D> sources,
                                 std::span<const Image2D> targets,
                                 std::span<const std::size_t> pairing, const FdaParams& params,
                                 unsigned jobs = 1);

}  // namespace usfda::fda
