#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "usfda/image.hpp"

namespace usfda::metrics {

inline constexpr double kDefaultEpsilon = 1e-6;

class BinaryMask {
 public:
  BinaryMask() = default;
  // Throws InvalidInputError unless every value is 0 or 1.
  BinaryMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> data);

  // Binarizes an Image2D holding only 0.0 / 1.0 values.
  static BinaryMask from_binary_image(const Image2D& img);

  std::size_t width() const { return shape_.width; }
  std::size_t height() const { return shape_.height; }
  Shape shape() const { return shape_; }
  const std::vector<std::uint8_t>& data() const { return data_; }
  std::size_t count() const;

  bool operator==(const BinaryMask&) const = default;

 private:
  Shape shape_;
  std::vector<std::uint8_t> data_;
};

// (2|S n S'| + eps) / (|S| + |S'| + eps). ShapeError on mismatched sizes,
// ParameterError unless eps > 0.
double dice(const BinaryMask& s, const BinaryMask& s_hat, double epsilon = kDefaultEpsilon);

// pixel > t -> 1. ParameterError unless t in [0,1].
BinaryMask threshold(const Image2D& img, double t = 0.5);

struct EvalReport {
  std::vector<std::string> ids;
  std::vector<double> dsc;
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;  // population standard deviation
  double epsilon = kDefaultEpsilon;
};

// Aggregates per-sample scores (ids and scores aligned).
EvalReport summarize(std::vector<std::string> ids, std::vector<double> dsc, double epsilon);

// Pairs files by name across the two directories (masks binarized at >127)
// and scores each pair. Throws PairingError listing every unmatched name.
EvalReport evaluate_batch(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir,
                          double epsilon = kDefaultEpsilon, unsigned jobs = 1);

nlohmann::json to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);
std::string format_table(const EvalReport& report);

}  // namespace usfda::metrics
