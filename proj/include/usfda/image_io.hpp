#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "usfda/image.hpp"

namespace usfda::io {

// 8-bit grayscale PNG/PGM is the interchange format. A `.f32` file holds
// raw little-endian float32 pixels (row-major) next to a `.json` sidecar
// {"width", "height", "dtype": "f32le"} for lossless round trips.

struct Gray8 {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;
};

bool is_image_file(const std::filesystem::path& path);

// Regular image files directly inside `dir`, sorted by filename.
std::vector<std::filesystem::path> list_image_files(const std::filesystem::path& dir);

// Raw 8-bit read. PNG color/alpha/16-bit inputs are reduced to 8-bit gray.
// Throws IngestionError naming the file on any failure.
Gray8 read_gray8(const std::filesystem::path& path);
void write_gray8(const std::filesystem::path& path, const Gray8& img);

// Any supported image as values in [0,1] (8-bit / 255, or float32 as stored).
Image2D read_image(const std::filesystem::path& path);

// Binary mask: strictly 8-bit single-channel gray; pixel > 127 maps to 1.
Image2D read_mask(const std::filesystem::path& path);

// Chooses the encoding by extension (.png, .pgm, .f32). 8-bit outputs are
// clamped to [0,1] and rounded to the nearest of 256 levels.
void write_image(const std::filesystem::path& path, const Image2D& img);

Gray8 quantize(const Image2D& img);

void write_float32(const std::filesystem::path& path, const Image2D& img);
Image2D read_float32(const std::filesystem::path& path);
std::filesystem::path sidecar_path(const std::filesystem::path& f32_path);

}  // namespace usfda::io
