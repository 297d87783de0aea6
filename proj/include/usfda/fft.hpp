#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "usfda/image.hpp"

namespace usfda {

enum class FftDirection { forward, inverse };

// One-dimensional complex DFT of a fixed length. Power-of-two lengths use an
// iterative radix-2 transform; every other length goes through Bluestein's
// chirp-z algorithm on a padded power-of-two grid. Both directions are
// unnormalized: forward uses e^{-j2pi kn/N}, inverse e^{+j2pi kn/N}.
//
// A plan is immutable after construction and may be shared across threads;
// execute() takes caller-owned scratch so it never mutates the plan.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }

  // In-place transform of `data` (length size()).
  void execute(std::span<Complex> data, FftDirection dir) const;

 private:
  void radix2(std::span<Complex> data, FftDirection dir) const;
  void bluestein(std::span<Complex> data, FftDirection dir) const;

  std::size_t n_;
  bool pow2_;
  std::size_t padded_;             // radix-2 length used internally
  std::vector<Complex> twiddles_;  // e^{-j2pi k/padded_}, k < padded_/2
  std::vector<std::size_t> bitrev_;
  std::vector<Complex> chirp_;     // e^{-j pi k^2 / n}, Bluestein only
  std::vector<Complex> chirp_fft_; // FFT of the conjugate chirp filter
};

// Convenience wrapper for one-shot transforms.
std::vector<Complex> fft(std::span<const Complex> in, FftDirection dir);

}  // namespace usfda
