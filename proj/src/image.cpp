#include "usfda/image.hpp"

#include <cmath>

#include "usfda/error.hpp"

namespace usfda {

std::string Shape::str() const {
  return std::to_string(width) + "x" + std::to_string(height);
}

Image2D::Image2D(std::size_t width, std::size_t height, double fill)
    : Image2D(width, height, std::vector<double>(width * height, fill)) {}

Image2D::Image2D(std::size_t width, std::size_t height, std::vector<double> data)
    : shape_{width, height}, data_(std::move(data)) {
  if (width == 0 || height == 0)
    throw InvalidInputError("image dimensions must be at least 1x1, got " + shape_.str());
  if (data_.size() != shape_.size())
    throw InvalidInputError("image data length " + std::to_string(data_.size()) +
                            " does not match " + shape_.str());
}

void Image2D::validate_finite() const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw InvalidInputError("non-finite pixel at (x=" + std::to_string(i % shape_.width) +
                              ", y=" + std::to_string(i / shape_.width) + ")");
    }
  }
}

Spectrum2D::Spectrum2D(std::size_t width, std::size_t height, DcPosition dc)
    : Spectrum2D(width, height, std::vector<Complex>(width * height), dc) {}

Spectrum2D::Spectrum2D(std::size_t width, std::size_t height, std::vector<Complex> data,
                       DcPosition dc)
    : shape_{width, height}, data_(std::move(data)), dc_(dc) {
  if (width == 0 || height == 0)
    throw InvalidInputError("spectrum dimensions must be at least 1x1, got " + shape_.str());
  if (data_.size() != shape_.size())
    throw InvalidInputError("spectrum data length " + std::to_string(data_.size()) +
                            " does not match " + shape_.str());
}

void Spectrum2D::validate_finite() const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i].real()) || !std::isfinite(data_[i].imag())) {
      throw InvalidInputError("non-finite spectrum bin at (m=" + std::to_string(i % shape_.width) +
                              ", n=" + std::to_string(i / shape_.width) + ")");
    }
  }
}

}  // namespace usfda
