#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace usfda {

// Index convention used throughout the library: a pixel is addressed as
// (x, y) with x in [0, width) running laterally along a row and y in
// [0, height) running axially down the columns. Storage is row-major, so
// pixel (x, y) lives at data[y * width + x]. In the transform formulas the
// first spatial index (w, range W) is x and the second (h, range H) is y.

struct Shape {
  std::size_t width = 0;
  std::size_t height = 0;

  std::size_t size() const { return width * height; }
  bool operator==(const Shape&) const = default;
  std::string str() const;
};

// Real-valued raster. Values are nominally in [0,1] but only finiteness is
// enforced, since intermediate results (e.g. adaptation before the range
// policy) may leave that interval.
class Image2D {
 public:
  Image2D() = default;
  Image2D(std::size_t width, std::size_t height, double fill = 0.0);
  Image2D(std::size_t width, std::size_t height, std::vector<double> data);

  std::size_t width() const { return shape_.width; }
  std::size_t height() const { return shape_.height; }
  Shape shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t x, std::size_t y) { return data_[y * shape_.width + x]; }
  double operator()(std::size_t x, std::size_t y) const { return data_[y * shape_.width + x]; }

  std::span<double> data() & { return data_; }
  std::span<const double> data() const& { return data_; }
  std::span<const double> data() const&& = delete;  // would dangle
  std::vector<double> release() && { return std::move(data_); }

  // Throws InvalidInputError naming the first non-finite pixel.
  void validate_finite() const;

  bool operator==(const Image2D&) const = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

enum class DcPosition { corner, centered };

using Complex = std::complex<double>;

class Spectrum2D {
 public:
  Spectrum2D() = default;
  Spectrum2D(std::size_t width, std::size_t height, DcPosition dc = DcPosition::corner);
  Spectrum2D(std::size_t width, std::size_t height, std::vector<Complex> data,
             DcPosition dc = DcPosition::corner);

  std::size_t width() const { return shape_.width; }
  std::size_t height() const { return shape_.height; }
  Shape shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  DcPosition dc_position() const { return dc_; }

  Complex& operator()(std::size_t m, std::size_t n) { return data_[n * shape_.width + m]; }
  const Complex& operator()(std::size_t m, std::size_t n) const {
    return data_[n * shape_.width + m];
  }

  std::span<Complex> data() & { return data_; }
  std::span<const Complex> data() const& { return data_; }
  std::span<const Complex> data() const&& = delete;  // would dangle

  void validate_finite() const;

  bool operator==(const Spectrum2D&) const = default;

 private:
  Shape shape_;
  std::vector<Complex> data_;
  DcPosition dc_ = DcPosition::corner;
};

}  // namespace usfda
