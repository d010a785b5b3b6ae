#pragma once

#include <cstdint>
#include <vector>

#include "strokex/image.hpp"

namespace strokex {

// 8-connected components of pixels whose label equals `value`. Components are
// numbered in raster order of their first pixel; pixels within a component
// are listed in discovery order starting from that pixel.
template <typename T>
std::vector<std::vector<Point>> connected_components8(const Image<T>& labels, T value) {
  const int w = labels.width(), h = labels.height();
  std::vector<std::uint8_t> seen(static_cast<size_t>(w) * h, 0);
  std::vector<std::vector<Point>> components;
  std::vector<Point> stack;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (labels.at(x, y) != value || seen[static_cast<size_t>(y) * w + x]) continue;
      std::vector<Point> comp;
      stack.push_back({x, y});
      seen[static_cast<size_t>(y) * w + x] = 1;
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        comp.push_back(p);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int nx = p.x + dx, ny = p.y + dy;
            if (!labels.in_bounds(nx, ny)) continue;
            auto& mark = seen[static_cast<size_t>(ny) * w + nx];
            if (!mark && labels.at(nx, ny) == value) {
              mark = 1;
              stack.push_back({nx, ny});
            }
          }
        }
      }
      components.push_back(std::move(comp));
    }
  }
  return components;
}

inline size_t count_components8(const BinaryImage& mask) {
  BinaryImage norm = mask;
  for (auto& v : norm.pixels()) v = v ? 1 : 0;
  return connected_components8<std::uint8_t>(norm, 1).size();
}

}  // namespace strokex
