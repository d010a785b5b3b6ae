#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>

#include "strokex/image.hpp"

namespace strokex {

// Stroke width of a foreground pixel: the minimum, over the four scan lines
// through it (horizontal, vertical, both diagonals), of the maximal run of
// consecutive foreground pixels containing it. Background pixels get 0.
// Each direction is a single pass over the image, so the whole transform is
// linear in the pixel count.
inline StrokeWidthMap stroke_width_transform(const BinaryImage& binary) {
  const int w = binary.width(), h = binary.height();
  StrokeWidthMap widths(w, h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (binary.at(x, y)) widths.at(x, y) = std::numeric_limits<std::int32_t>::max();

  // Walks one scan line, stamping each maximal run's length onto its pixels.
  auto scan_line = [&](int x0, int y0, int dx, int dy) {
    int run_start_x = x0, run_start_y = y0;
    int run_len = 0;
    int x = x0, y = y0;
    auto flush = [&]() {
      if (run_len == 0) return;
      int rx = run_start_x, ry = run_start_y;
      for (int i = 0; i < run_len; ++i, rx += dx, ry += dy)
        widths.at(rx, ry) = std::min(widths.at(rx, ry), run_len);
      run_len = 0;
    };
    while (binary.in_bounds(x, y)) {
      if (binary.at(x, y)) {
        if (run_len == 0) {
          run_start_x = x;
          run_start_y = y;
        }
        ++run_len;
      } else {
        flush();
      }
      x += dx;
      y += dy;
    }
    flush();
  };

  for (int y = 0; y < h; ++y) scan_line(0, y, 1, 0);
  for (int x = 0; x < w; ++x) scan_line(x, 0, 0, 1);
  // Down-right diagonals start on the top row and the left column.
  for (int x = 0; x < w; ++x) scan_line(x, 0, 1, 1);
  for (int y = 1; y < h; ++y) scan_line(0, y, 1, 1);
  // Up-right diagonals start on the bottom row and the left column.
  for (int x = 0; x < w; ++x) scan_line(x, h - 1, 1, -1);
  for (int y = 0; y + 1 < h; ++y) scan_line(0, y, 1, -1);

  return widths;
}

}  // namespace strokex
