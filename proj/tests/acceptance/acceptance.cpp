// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes. Usage: usfda_acceptance <path-to-usfda-cli>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "../support/cli_runner.hpp"
#include "../support/oracles.hpp"
#include "../support/phenomenology.hpp"
#include "../support/shapes.hpp"
#include "../support/temp_dir.hpp"
#include "usfda/fda.hpp"
#include "usfda/image_io.hpp"
#include "usfda/metrics.hpp"
#include "usfda/parallel.hpp"
#include "usfda/simulator.hpp"
#include "usfda/spectral.hpp"

using namespace usfda;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double max_abs_diff(std::span<const Complex> a, const std::vector<oracle::C>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

Outcome spectral_parity() {
  std::mt19937_64 gen(20240601);
  double fwd = 0.0, inv = 0.0;
  for (std::size_t w = 1; w <= 16; ++w)
    for (std::size_t h = 1; h <= 16; ++h) {
      const auto pixels = oracle::random_pixels(w * h, gen);
      const auto spec = spectral::forward_dft(Image2D(w, h, pixels));
      fwd = std::max(fwd, max_abs_diff(spec.data(), oracle::naive_forward(pixels, w, h)));

      const auto sym = oracle::random_symmetric_spectrum(w, h, gen);
      const auto img = spectral::inverse_dft(sym);
      const auto ref = oracle::naive_inverse({sym.data().begin(), sym.data().end()}, w, h);
      for (std::size_t i = 0; i < img.size(); ++i) inv = std::max(inv, std::abs(img.data()[i] - ref[i].real()));
    }
  const auto big = oracle::random_image(256, 256, gen);
  const auto back = spectral::inverse_dft(spectral::forward_dft(big));
  const double rt = oracle::max_abs_diff(back.data(), big.data());
  return {fwd < 1e-6 && inv < 1e-6 && rt < 1e-9,
          "forward " + fmt("%.2e", fwd) + ", inverse " + fmt("%.2e", inv) + " over 256 sizes; 256x256 round trip " +
              fmt("%.2e", rt)};
}

Outcome fda_oracle() {
  std::mt19937_64 gen(77);
  double unclamped = 0.0, clipped = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto src = oracle::random_pixels(64, gen);
    const auto tgt = oracle::random_pixels(64, gen);
    const auto ref = oracle::naive_fda(src, tgt, 8, 8, 0.5);
    const Image2D s(8, 8, src), t(8, 8, tgt);
    const auto raw = fda::adapt_unclamped(s, t, 0.5);
    const auto out = fda::adapt(s, t, {0.5, fda::RangePolicy::clip});
    for (std::size_t i = 0; i < ref.size(); ++i) {
      unclamped = std::max(unclamped, std::abs(raw.data()[i] - ref[i]));
      clipped = std::max(clipped, std::abs(out.data()[i] - std::clamp(ref[i], 0.0, 1.0)));
    }
  }
  return {unclamped < 1e-6 && clipped < 1e-6,
          "100 pairs at 8x8, max error " + fmt("%.2e", unclamped) + " raw, " + fmt("%.2e", clipped) + " clipped"};
}

Outcome mask_cardinality() {
  const auto mask = fda::build_mask(256, 256, 0.014);
  std::size_t expected = 0, agree = 0, in_block = 0;
  for (std::size_t y = 0; y < 256; ++y)
    for (std::size_t x = 0; x < 256; ++x) {
      const bool ref = oracle::in_low_band(x, 256, 0.014) && oracle::in_low_band(y, 256, 0.014);
      expected += ref;
      agree += (ref == mask(x, y));
      in_block += mask(x, y) && x >= 127 && x <= 129 && y >= 127 && y <= 129;
    }
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
  std::size_t violations = 0;
  for (int trial = 0; trial < 50; ++trial) {
    double a = u(gen), b = u(gen);
    if (a > b) std::swap(a, b);
    const auto small = fda::build_mask(256, 256, a);
    const auto large = fda::build_mask(256, 256, b);
    for (std::size_t i = 0; i < small.data().size(); ++i) violations += small.data()[i] && !large.data()[i];
  }
  const bool pass = mask.count() == 9 && expected == 9 && agree == 256 * 256 && in_block == 9 && violations == 0;
  return {pass, std::to_string(mask.count()) + " ones, " + std::to_string(in_block) + " in {127,128,129}^2, " +
                    std::to_string(violations) + " monotonicity violations over 50 pairs"};
}

Outcome noop_identities() {
  std::mt19937_64 gen(31);
  // An even extent always keeps the DC bin, so the empty mask is built explicitly.
  const auto empty = fda::LowFreqMask::from_bits(256, 256, std::vector<unsigned char>(256 * 256, 0));
  double self = 0.0, zero = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto src = oracle::random_image(256, 256, gen);
    const auto other = oracle::random_image(256, 256, gen);
    const auto onto_self = fda::adapt_unclamped(src, src, fda::kDefaultAlpha);
    const auto masked_out = fda::adapt_unclamped(src, other, empty);
    self = std::max(self, oracle::max_abs_diff(onto_self.data(), src.data()));
    zero = std::max(zero, oracle::max_abs_diff(masked_out.data(), src.data()));
  }
  return {self < 1e-9 && zero < 1e-9,
          "20 images at 256x256: target==source " + fmt("%.2e", self) + ", empty mask " + fmt("%.2e", zero)};
}

Outcome simulator_phenomenology() {
  constexpr std::size_t n = 20;
  std::vector<simulator::PhantomSpec> specs(n);
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> centre(40.0, 88.0), radius(12.0, 24.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double cx = centre(gen), cy = centre(gen), rx = radius(gen), ry = radius(gen);
    specs[i].anechoic_mask = testing::ellipse_mask(128, 128, cx, cy, rx, ry);
    specs[i].seed = 1000 + i;
  }
  std::vector<testing::RegionMeans> means(n);
  std::vector<testing::SpeckleStat> speckle(n);
  std::vector<double> drift(n);
  parallel_for(n, std::max(1u, std::thread::hardware_concurrency()), [&](std::size_t i) {
    const auto s = simulator::simulate(specs[i], simulator::PsfParams{});
    means[i] = testing::region_means(s);
    speckle[i] = testing::speckle_ratio(s);
    drift[i] = testing::centroid_drift(s);
  });
  std::size_t contrast_ok = 0, ratio_ok = 0, drift_ok = 0;
  double rmin = 1e9, rmax = 0.0, dmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    contrast_ok += means[i].interior < means[i].exterior;
    ratio_ok += speckle[i].ratio >= 1.7 && speckle[i].ratio <= 2.1 && speckle[i].pixels > 1000;
    drift_ok += drift[i] <= 3.0;
    rmin = std::min(rmin, speckle[i].ratio);
    rmax = std::max(rmax, speckle[i].ratio);
    dmax = std::max(dmax, drift[i]);
  }
  const bool pass = contrast_ok == n && ratio_ok == n && drift_ok == n;
  return {pass, std::to_string(n) + " samples: contrast " + std::to_string(contrast_ok) + "/20, mean/std in [" +
                    fmt("%.3f", rmin) + ", " + fmt("%.3f", rmax) + "], max centroid drift " + fmt("%.2f", dmax) +
                    " px"};
}

metrics::BinaryMask from_code(unsigned code) {
  std::vector<std::uint8_t> v(4);
  for (unsigned p = 0; p < 4; ++p) v[p] = (code >> p) & 1u;
  return metrics::BinaryMask(2, 2, v);
}

Outcome dice_exhaustive() {
  const double eps = metrics::kDefaultEpsilon;
  std::size_t bad = 0;
  for (unsigned a = 0; a < 16; ++a)
    for (unsigned b = 0; b < 16; ++b) {
      const double inter = __builtin_popcount(a & b);
      const double ref = (2.0 * inter + eps) / (__builtin_popcount(a) + __builtin_popcount(b) + eps);
      const double d = metrics::dice(from_code(a), from_code(b), eps);
      const double r = metrics::dice(from_code(b), from_code(a), eps);
      bad += std::abs(d - ref) > 1e-15 || d != r || d <= 0.0 || d > 1.0;
    }
  const double empty = metrics::dice(from_code(0), from_code(0), eps);
  bad += empty != 1.0;
  return {bad == 0, "256 pairs on a 2x2 grid, " + std::to_string(bad) + " disagreements; empty/empty = " +
                        fmt("%.6f", empty)};
}

Outcome cli_determinism(const fs::path& exe) {
  testing::TempDir dir;
  fs::create_directories(dir / "masks");
  for (int i = 0; i < 3; ++i)
    io::write_image(dir / "masks" / ("m" + std::to_string(i) + ".png"),
                    testing::disk_mask(64, 64, 24.0 + 8.0 * i, 32.0, 10.0));

  const std::vector<std::pair<std::string, std::vector<std::string>>> runs = {
      {"sim", {"simulate", "--masks", "masks", "--out", "sim", "--count", "3", "--seed", "8", "--size", "128"}},
      {"adapt", {"adapt", "--source", "sim/bmode", "--target", "sim/bmode", "--out", "adapt", "--seed", "3",
                 "--pairing", "random", "--iteration", "4"}},
      {"split", {"split", "--corpus", "sim/bmode", "--out", "split", "--train", "1", "--val", "1", "--test", "1",
                 "--seed", "6"}},
  };
  std::vector<std::map<std::string, std::string>> first;
  for (const auto& [out, args] : runs) {
    const auto r = testing::run_cli(exe, args, dir.path());
    if (r.exit_code != 0) return {false, out + " exited with " + std::to_string(r.exit_code) + ": " + r.err};
    first.push_back(testing::hash_tree(dir / out));
  }
  // Second pass from a clean slate with identical arguments.
  std::size_t files = 0, same = 0;
  for (const auto& [out, args] : runs) fs::rename(dir / out, dir / (out + ".first"));
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& [out, args] = runs[k];
    const auto r = testing::run_cli(exe, args, dir.path());
    if (r.exit_code != 0) return {false, out + " rerun exited with " + std::to_string(r.exit_code)};
    const auto again = testing::hash_tree(dir / out);
    files += first[k].size();
    for (const auto& [path, hash] : first[k]) same += again.count(path) && again.at(path) == hash;
    if (again.size() != first[k].size()) return {false, out + " produced a different file set"};
  }
  return {same == files && files > 0,
          "simulate, adapt, split: " + std::to_string(same) + "/" + std::to_string(files) + " files hash-identical"};
}

bool run(const std::string& name, double budget_s, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = budget_s <= 0.0 || secs < budget_s;
  if (!in_time) o.detail += "; over the " + fmt("%.0f", budget_s) + " s budget";
  const bool pass = o.pass && in_time;
  std::cout << (pass ? "PASS  " : "FAIL  ") << name << "  (" << o.detail << "; " << fmt("%.2f", secs) << " s)"
            << std::endl;
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: usfda_acceptance <path-to-usfda-cli>\n";
    return 2;
  }
  const fs::path cli = fs::absolute(argv[1]);
  bool ok = true;
  ok &= run("spectral oracle parity", 30.0, spectral_parity);
  ok &= run("adaptation oracle", 10.0, fda_oracle);
  ok &= run("mask cardinality", 0.0, mask_cardinality);
  ok &= run("no-op identities", 0.0, noop_identities);
  ok &= run("simulator phenomenology", 120.0, simulator_phenomenology);
  ok &= run("dice correctness", 0.0, dice_exhaustive);
  ok &= run("cli determinism", 0.0, [&] { return cli_determinism(cli); });
  std::cout << "NOTE  the mean-DSC gain from adapted training on clinical data needs that dataset and GPU "
               "training; it is not reproduced here and the property checks above stand in for it"
            << std::endl;
  std::cout << (ok ? "all criteria passed" : "some criteria failed") << std::endl;
  return ok ? 0 : 1;
}
