#pragma once

#include <algorithm>
#include <cmath>

#include "usfda/image.hpp"

namespace usfda::testing {

inline Image2D disk_mask(std::size_t w, std::size_t h, double cx, double cy, double r) {
  Image2D m(w, h, 0.0);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
      if (dx * dx + dy * dy < r * r) m(x, y) = 1.0;
    }
  return m;
}

inline Image2D ellipse_mask(std::size_t w, std::size_t h, double cx, double cy, double rx, double ry) {
  Image2D m(w, h, 0.0);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      const double dx = (x + 0.5 - cx) / rx, dy = (y + 0.5 - cy) / ry;
      if (dx * dx + dy * dy < 1.0) m(x, y) = 1.0;
    }
  return m;
}

// Binary erosion with a (2r+1)^2 square structuring element; pixels within r
// of the border are cleared.
inline Image2D erode(const Image2D& m, std::size_t r) {
  Image2D out(m.width(), m.height(), 0.0);
  for (std::size_t y = r; y + r < m.height(); ++y)
    for (std::size_t x = r; x + r < m.width(); ++x) {
      bool all = true;
      for (std::size_t yy = y - r; yy <= y + r && all; ++yy)
        for (std::size_t xx = x - r; xx <= x + r && all; ++xx) all = m(xx, yy) > 0.5;
      out(x, y) = all ? 1.0 : 0.0;
    }
  return out;
}

inline Image2D dilate(const Image2D& m, std::size_t r) {
  Image2D out(m.width(), m.height(), 0.0);
  for (std::size_t y = 0; y < m.height(); ++y)
    for (std::size_t x = 0; x < m.width(); ++x) {
      bool any = false;
      for (std::size_t yy = (y >= r ? y - r : 0); yy <= std::min(y + r, m.height() - 1) && !any; ++yy)
        for (std::size_t xx = (x >= r ? x - r : 0); xx <= std::min(x + r, m.width() - 1) && !any; ++xx)
          any = m(xx, yy) > 0.5;
      out(x, y) = any ? 1.0 : 0.0;
    }
  return out;
}

}  // namespace usfda::testing
