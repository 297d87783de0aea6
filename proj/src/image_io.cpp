#include "usfda/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "usfda/error.hpp"

namespace usfda::io {
namespace fs = std::filesystem;
namespace {

std::string lower_ext(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

[[noreturn]] void fail(const fs::path& path, const std::string& what) {
  throw IngestionError(path.string() + ": " + what);
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// PGM header token, skipping whitespace and '#' comments.
bool next_token(std::istream& in, std::string& token) {
  token.clear();
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      token.push_back(c);
      break;
    }
  }
  while (in.get(c)) {
    if (std::isspace(static_cast<unsigned char>(c))) break;
    token.push_back(c);
  }
  return !token.empty();
}

Gray8 read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  std::string magic, tw, th, tmax;
  if (!next_token(in, magic) || (magic != "P5" && magic != "P2")) fail(path, "not a PGM (P2/P5) file");
  if (!next_token(in, tw) || !next_token(in, th) || !next_token(in, tmax)) fail(path, "truncated PGM header");
  Gray8 img;
  int maxval = 0;
  try {
    img.width = std::stoul(tw);
    img.height = std::stoul(th);
    maxval = std::stoi(tmax);
  } catch (const std::exception&) {
    fail(path, "malformed PGM header");
  }
  if (img.width == 0 || img.height == 0) fail(path, "zero-sized image");
  if (maxval <= 0 || maxval > 255) fail(path, "only 8-bit PGM (maxval <= 255) is supported");
  img.pixels.resize(img.width * img.height);
  if (magic == "P5") {
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) fail(path, "truncated pixel data");
  } else {
    for (auto& p : img.pixels) {
      int v;
      if (!(in >> v) || v < 0 || v > maxval) fail(path, "bad ASCII pixel value");
      p = static_cast<std::uint8_t>(v);
    }
  }
  if (maxval != 255) {
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(std::lround(p * 255.0 / maxval));
  }
  return img;
}

void write_pgm(const fs::path& path, const Gray8& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestionError(path.string() + ": cannot open for writing");
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw IngestionError(path.string() + ": write failed");
}

struct PngInfo {
  int color_type = 0;
  int bit_depth = 0;
};

Gray8 read_png(const fs::path& path, PngInfo* info_out) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) fail(path, "cannot open file");
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) fail(path, "not a PNG file");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "libpng initialization failed");
  }
  Gray8 img;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "corrupt PNG data");
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  if (info_out) *info_out = {color_type, bit_depth};

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (color_type == PNG_COLOR_TYPE_RGB || color_type == PNG_COLOR_TYPE_RGB_ALPHA ||
      color_type == PNG_COLOR_TYPE_PALETTE)
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  png_read_update_info(png, info);

  img.width = png_get_image_width(png, info);
  img.height = png_get_image_height(png, info);
  if (png_get_rowbytes(png, info) != img.width) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "unsupported PNG layout");
  }
  img.pixels.resize(img.width * img.height);
  rows.resize(img.height);
  for (std::size_t y = 0; y < img.height; ++y) rows[y] = img.pixels.data() + y * img.width;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

void write_png(const fs::path& path, const Gray8& img) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IngestionError(path.string() + ": cannot open for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IngestionError(path.string() + ": libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IngestionError(path.string() + ": PNG encoding failed");
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t y = 0; y < img.height; ++y)
    png_write_row(png, const_cast<png_bytep>(img.pixels.data() + y * img.width));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

Image2D to_unit(const Gray8& g) {
  std::vector<double> values(g.pixels.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = g.pixels[i] / 255.0;
  return Image2D(g.width, g.height, std::move(values));
}

}  // namespace

bool is_image_file(const fs::path& path) {
  const std::string ext = lower_ext(path);
  return ext == ".png" || ext == ".pgm" || ext == ".f32";
}

std::vector<fs::path> list_image_files(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IngestionError(dir.string() + ": not a readable directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return files;
}

Gray8 read_gray8(const fs::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".png") return read_png(path, nullptr);
  if (ext == ".pgm") return read_pgm(path);
  fail(path, "unsupported 8-bit image extension '" + ext + "'");
}

void write_gray8(const fs::path& path, const Gray8& img) {
  const std::string ext = lower_ext(path);
  if (ext == ".png")
    write_png(path, img);
  else if (ext == ".pgm")
    write_pgm(path, img);
  else
    throw IngestionError(path.string() + ": unsupported 8-bit image extension '" + ext + "'");
}

Image2D read_image(const fs::path& path) {
  if (lower_ext(path) == ".f32") return read_float32(path);
  return to_unit(read_gray8(path));
}

Image2D read_mask(const fs::path& path) {
  const std::string ext = lower_ext(path);
  Gray8 g;
  if (ext == ".png") {
    PngInfo info;
    g = read_png(path, &info);
    if (info.color_type != PNG_COLOR_TYPE_GRAY || info.bit_depth > 8)
      fail(path, "mask must be single-channel 8-bit grayscale");
  } else if (ext == ".pgm") {
    g = read_pgm(path);
  } else {
    fail(path, "unsupported mask extension '" + ext + "'");
  }
  std::vector<double> values(g.pixels.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = g.pixels[i] > 127 ? 1.0 : 0.0;
  return Image2D(g.width, g.height, std::move(values));
}

Gray8 quantize(const Image2D& img) {
  Gray8 g{img.width(), img.height(), std::vector<std::uint8_t>(img.size())};
  const auto data = img.data();
  for (std::size_t i = 0; i < data.size(); ++i)
    g.pixels[i] = static_cast<std::uint8_t>(std::lround(std::clamp(data[i], 0.0, 1.0) * 255.0));
  return g;
}

void write_image(const fs::path& path, const Image2D& img) {
  if (lower_ext(path) == ".f32")
    write_float32(path, img);
  else
    write_gray8(path, quantize(img));
}

fs::path sidecar_path(const fs::path& f32_path) {
  fs::path p = f32_path;
  return p.replace_extension(".json");
}

void write_float32(const fs::path& path, const Image2D& img) {
  static_assert(std::endian::native == std::endian::little, "float32 sidecar writer assumes little-endian host");
  std::vector<float> values(img.data().begin(), img.data().end());
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestionError(path.string() + ": cannot open for writing");
    out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(float)));
  }
  const nlohmann::json meta = {{"width", img.width()}, {"height", img.height()}, {"dtype", "f32le"}};
  std::ofstream side(sidecar_path(path));
  if (!side) throw IngestionError(sidecar_path(path).string() + ": cannot open for writing");
  side << meta.dump(2) << '\n';
}

Image2D read_float32(const fs::path& path) {
  const fs::path side = sidecar_path(path);
  std::ifstream meta_in(side);
  if (!meta_in) fail(path, "missing sidecar " + side.filename().string());
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_in);
  } catch (const nlohmann::json::exception& e) {
    fail(side, std::string("bad sidecar JSON: ") + e.what());
  }
  if (meta.value("dtype", "") != "f32le") fail(side, "sidecar dtype must be \"f32le\"");
  const std::size_t width = meta.value("width", std::size_t{0});
  const std::size_t height = meta.value("height", std::size_t{0});
  if (width == 0 || height == 0) fail(side, "sidecar width/height missing or zero");

  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  std::vector<float> values(width * height);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(float)));
  if (in.gcount() != static_cast<std::streamsize>(values.size() * sizeof(float)) || in.peek() != EOF)
    fail(path, "size does not match sidecar dimensions " + std::to_string(width) + "x" + std::to_string(height));
  Image2D img(width, height, std::vector<double>(values.begin(), values.end()));
  try {
    img.validate_finite();
  } catch (const InvalidInputError& e) {
    fail(path, e.what());
  }
  return img;
}

}  // namespace usfda::io
