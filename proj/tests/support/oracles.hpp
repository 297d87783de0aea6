#pragma once

// Independent reference implementations used only by tests. They evaluate
// the defining sums directly and share no code with the library's FFT,
// shift or mask paths.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "usfda/image.hpp"

namespace usfda::oracle {

using C = std::complex<double>;

// F(m,n) = sum_x sum_y I(x,y) exp(-j2pi(y n / H + x m / W)), row-major (n*W + m).
inline std::vector<C> naive_forward(const std::vector<double>& img, std::size_t W, std::size_t H) {
  std::vector<C> out(W * H);
  for (std::size_t n = 0; n < H; ++n)
    for (std::size_t m = 0; m < W; ++m) {
      C acc{};
      for (std::size_t y = 0; y < H; ++y)
        for (std::size_t x = 0; x < W; ++x) {
          const double angle = -2.0 * std::numbers::pi *
                               (static_cast<double>(y * n) / H + static_cast<double>(x * m) / W);
          acc += img[y * W + x] * C(std::cos(angle), std::sin(angle));
        }
      out[n * W + m] = acc;
    }
  return out;
}

// I(x,y) = 1/(WH) sum_m sum_n F(m,n) exp(+j2pi(...)), complex result.
inline std::vector<C> naive_inverse(const std::vector<C>& spec, std::size_t W, std::size_t H) {
  std::vector<C> out(W * H);
  for (std::size_t y = 0; y < H; ++y)
    for (std::size_t x = 0; x < W; ++x) {
      C acc{};
      for (std::size_t n = 0; n < H; ++n)
        for (std::size_t m = 0; m < W; ++m) {
          const double angle = 2.0 * std::numbers::pi *
                               (static_cast<double>(y * n) / H + static_cast<double>(x * m) / W);
          acc += spec[n * W + m] * C(std::cos(angle), std::sin(angle));
        }
      out[y * W + x] = acc / static_cast<double>(W * H);
    }
  return out;
}

inline bool in_low_band(std::size_t i, std::size_t extent, double alpha) {
  const double c = 2.0 * static_cast<double>(i) / static_cast<double>(extent) - 1.0;
  return -alpha < c && c < alpha;
}

// Straight-line magnitude swap: target magnitude where the centered mask is
// set, source magnitude elsewhere, source phase everywhere. The corner bin
// (m,n) sits at centered position ((m + W/2) mod W, (n + H/2) mod H).
inline std::vector<double> naive_fda(const std::vector<double>& src, const std::vector<double>& tgt,
                                     std::size_t W, std::size_t H, double alpha) {
  const auto fs = naive_forward(src, W, H);
  const auto ft = naive_forward(tgt, W, H);
  std::vector<C> mixed(W * H);
  for (std::size_t n = 0; n < H; ++n)
    for (std::size_t m = 0; m < W; ++m) {
      const std::size_t i = n * W + m;
      const bool inside = in_low_band((m + W / 2) % W, W, alpha) && in_low_band((n + H / 2) % H, H, alpha);
      const double mag = inside ? std::abs(ft[i]) : std::abs(fs[i]);
      mixed[i] = std::polar(mag, std::arg(fs[i]));
    }
  const auto back = naive_inverse(mixed, W, H);
  std::vector<double> out(W * H);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = back[i].real();
  return out;
}

inline std::vector<double> random_pixels(std::size_t n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(gen);
  return v;
}

inline Image2D random_image(std::size_t W, std::size_t H, std::mt19937_64& gen) {
  return Image2D(W, H, random_pixels(W * H, gen));
}

// Random spectrum of a real signal, i.e. conjugate-symmetric by construction.
inline Spectrum2D random_symmetric_spectrum(std::size_t W, std::size_t H, std::mt19937_64& gen) {
  const auto pixels = random_pixels(W * H, gen);
  const auto f = naive_forward(pixels, W, H);
  return Spectrum2D(W, H, std::vector<C>(f.begin(), f.end()));
}

inline Spectrum2D random_spectrum(std::size_t W, std::size_t H, std::mt19937_64& gen) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<C> v(W * H);
  for (auto& c : v) c = C(g(gen), g(gen));
  return Spectrum2D(W, H, std::move(v));
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace usfda::oracle
