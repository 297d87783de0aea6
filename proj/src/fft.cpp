#include "usfda/fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace usfda {
namespace {

// e^{-j 2pi num/den} with the angle reduced exactly in integers first.
Complex unit_root(std::size_t num, std::size_t den) {
  num %= den;
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n), pow2_(n > 0 && std::has_single_bit(n)) {
  if (n == 0) {
    padded_ = 0;
    return;
  }
  padded_ = pow2_ ? n : std::bit_ceil(2 * n - 1);

  twiddles_.resize(padded_ / 2);
  for (std::size_t k = 0; k < twiddles_.size(); ++k) twiddles_[k] = unit_root(k, padded_);

  bitrev_.resize(padded_);
  const int bits = std::countr_zero(padded_);
  for (std::size_t i = 0; i < padded_; ++i) {
    std::size_t r = 0;
    for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
    bitrev_[i] = r;
  }

  if (!pow2_) {
    // k^2 mod 2n keeps the chirp argument small and exact.
    chirp_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t k2 = (k * k) % (2 * n_);
      chirp_[k] = unit_root(k2, 2 * n_);
    }
    chirp_fft_.assign(padded_, Complex{});
    chirp_fft_[0] = std::conj(chirp_[0]);
    for (std::size_t k = 1; k < n_; ++k) {
      chirp_fft_[k] = std::conj(chirp_[k]);
      chirp_fft_[padded_ - k] = std::conj(chirp_[k]);
    }
    radix2(chirp_fft_, FftDirection::forward);
  }
}

void FftPlan::execute(std::span<Complex> data, FftDirection dir) const {
  if (n_ <= 1) return;
  if (pow2_)
    radix2(data, dir);
  else
    bluestein(data, dir);
}

void FftPlan::radix2(std::span<Complex> data, FftDirection dir) const {
  const std::size_t n = data.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = bitrev_[i];
    if (i < j) std::swap(data[i], data[j]);
  }
  const bool inverse = dir == FftDirection::inverse;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        Complex w = twiddles_[k * stride];
        if (inverse) w = std::conj(w);
        const Complex u = data[start + k];
        const Complex v = data[start + k + half] * w;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

void FftPlan::bluestein(std::span<Complex> data, FftDirection dir) const {
  // The inverse transform is the conjugate of the forward transform of the
  // conjugated input.
  const bool inverse = dir == FftDirection::inverse;
  std::vector<Complex> work(padded_, Complex{});
  for (std::size_t k = 0; k < n_; ++k) {
    const Complex x = inverse ? std::conj(data[k]) : data[k];
    work[k] = x * chirp_[k];
  }
  radix2(work, FftDirection::forward);
  for (std::size_t k = 0; k < padded_; ++k) work[k] *= chirp_fft_[k];
  radix2(work, FftDirection::inverse);
  const double scale = 1.0 / static_cast<double>(padded_);
  for (std::size_t k = 0; k < n_; ++k) {
    const Complex y = work[k] * scale * chirp_[k];
    data[k] = inverse ? std::conj(y) : y;
  }
}

std::vector<Complex> fft(std::span<const Complex> in, FftDirection dir) {
  std::vector<Complex> out(in.begin(), in.end());
  FftPlan(out.size()).execute(out, dir);
  return out;
}

}  // namespace usfda
