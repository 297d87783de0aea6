#include "usfda/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "usfda/error.hpp"
#include "usfda/image_io.hpp"
#include "usfda/parallel.hpp"

namespace usfda::metrics {
namespace fs = std::filesystem;

BinaryMask::BinaryMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> data)
    : shape_{width, height}, data_(std::move(data)) {
  if (data_.size() != shape_.size())
    throw InvalidInputError("mask data length does not match " + shape_.str());
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (data_[i] > 1) throw InvalidInputError("mask value at index " + std::to_string(i) + " is not 0/1");
}

BinaryMask BinaryMask::from_binary_image(const Image2D& img) {
  std::vector<std::uint8_t> bits(img.size());
  const auto data = img.data();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (data[i] != 0.0 && data[i] != 1.0)
      throw InvalidInputError("image value at index " + std::to_string(i) + " is not 0/1");
    bits[i] = data[i] == 1.0;
  }
  return BinaryMask(img.width(), img.height(), std::move(bits));
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

double dice(const BinaryMask& s, const BinaryMask& s_hat, double epsilon) {
  if (s.shape() != s_hat.shape())
    throw ShapeError("mask shapes differ: " + s.shape().str() + " vs " + s_hat.shape().str());
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ParameterError("epsilon must be a positive number");
  std::size_t both = 0, a = 0, b = 0;
  const auto& x = s.data();
  const auto& y = s_hat.data();
  for (std::size_t i = 0; i < x.size(); ++i) {
    a += x[i];
    b += y[i];
    both += x[i] & y[i];
  }
  return (2.0 * static_cast<double>(both) + epsilon) / (static_cast<double>(a + b) + epsilon);
}

BinaryMask threshold(const Image2D& img, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw ParameterError("threshold must lie in [0,1]");
  std::vector<std::uint8_t> bits(img.size());
  const auto data = img.data();
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = data[i] > t;
  return BinaryMask(img.width(), img.height(), std::move(bits));
}

EvalReport summarize(std::vector<std::string> ids, std::vector<double> dsc, double epsilon) {
  EvalReport r;
  r.ids = std::move(ids);
  r.dsc = std::move(dsc);
  r.epsilon = epsilon;
  const std::size_t n = r.dsc.size();
  if (n == 0) return r;
  r.mean = std::accumulate(r.dsc.begin(), r.dsc.end(), 0.0) / static_cast<double>(n);
  std::vector<double> sorted = r.dsc;
  std::sort(sorted.begin(), sorted.end());
  r.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  double ss = 0.0;
  for (double v : r.dsc) ss += (v - r.mean) * (v - r.mean);
  r.std = std::sqrt(ss / static_cast<double>(n));
  return r;
}

EvalReport evaluate_batch(const fs::path& pred_dir, const fs::path& gt_dir, double epsilon, unsigned jobs) {
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  std::map<std::string, fs::path> preds, gts;
  for (const auto& p : io::list_image_files(pred_dir)) preds.emplace(p.filename().string(), p);
  for (const auto& p : io::list_image_files(gt_dir)) gts.emplace(p.filename().string(), p);

  std::vector<std::string> orphans;
  for (const auto& [name, _] : preds)
    if (!gts.contains(name)) orphans.push_back(name + " (prediction only)");
  for (const auto& [name, _] : gts)
    if (!preds.contains(name)) orphans.push_back(name + " (ground truth only)");
  if (!orphans.empty()) {
    std::string msg = "unmatched mask files:";
    for (const auto& o : orphans) msg += "\n  " + o;
    throw PairingError(msg);
  }

  std::vector<std::string> ids;
  for (const auto& [name, _] : preds) ids.push_back(name);
  std::vector<double> scores(ids.size());
  parallel_for(ids.size(), jobs, [&](std::size_t i) {
    const auto pred = BinaryMask::from_binary_image(io::read_mask(preds.at(ids[i])));
    const auto gt = BinaryMask::from_binary_image(io::read_mask(gts.at(ids[i])));
    if (pred.shape() != gt.shape())
      throw ShapeError(ids[i] + ": prediction is " + pred.shape().str() + " but ground truth is " + gt.shape().str());
    scores[i] = dice(gt, pred, epsilon);
  });
  return summarize(std::move(ids), std::move(scores), epsilon);
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json samples = nlohmann::json::array();
  for (std::size_t i = 0; i < report.ids.size(); ++i) samples.push_back({{"id", report.ids[i]}, {"dsc", report.dsc[i]}});
  return {{"samples", samples},
          {"count", report.ids.size()},
          {"mean", report.mean},
          {"median", report.median},
          {"std", report.std},
          {"epsilon", report.epsilon}};
}

EvalReport report_from_json(const nlohmann::json& j) {
  try {
    std::vector<std::string> ids;
    std::vector<double> dsc;
    for (const auto& s : j.at("samples")) {
      ids.push_back(s.at("id").get<std::string>());
      dsc.push_back(s.at("dsc").get<double>());
    }
    return summarize(std::move(ids), std::move(dsc), j.at("epsilon").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(std::string("malformed evaluation report: ") + e.what());
  }
}

std::string format_table(const EvalReport& report) {
  std::size_t width = 2;
  for (const auto& id : report.ids) width = std::max(width, id.size());
  std::ostringstream out;
  char buf[64];
  auto row = [&](const std::string& label, double v) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    out << label << std::string(width - std::min(width, label.size()) + 2, ' ') << buf << '\n';
  };
  out << "id" << std::string(width, ' ') << "dsc\n";
  for (std::size_t i = 0; i < report.ids.size(); ++i) row(report.ids[i], report.dsc[i]);
  out << std::string(width + 10, '-') << '\n';
  row("mean", report.mean);
  row("median", report.median);
  row("std", report.std);
  return out.str();
}

}  // namespace usfda::metrics
