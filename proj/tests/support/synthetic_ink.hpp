#pragma once

// Deterministic multi-stroke ink documents for round-trip testing: lines,
// crosses, loops, tees, pluses, arcs, zigzags, and retraced tails, laid out
// on a jittered grid so symbols never collide.

#include <cmath>
#include <random>
#include <vector>

#include "strokex/ink_io.hpp"

namespace strokex::testing {

using StrokeListF = std::vector<std::vector<PointF>>;

namespace ink_detail {

inline std::vector<PointF> polyline(std::initializer_list<PointF> pts, int samples_per_edge = 8) {
  std::vector<PointF> out;
  const std::vector<PointF> v(pts);
  for (size_t i = 0; i + 1 < v.size(); ++i)
    for (int k = (i == 0 ? 0 : 1); k <= samples_per_edge; ++k) {
      const double t = static_cast<double>(k) / samples_per_edge;
      out.push_back({v[i].x + (v[i + 1].x - v[i].x) * t, v[i].y + (v[i + 1].y - v[i].y) * t});
    }
  return out;
}

inline std::vector<PointF> arc(PointF center, double radius, double from, double to,
                               int samples = 24) {
  std::vector<PointF> out;
  for (int i = 0; i <= samples; ++i) {
    const double a = from + (to - from) * i / samples;
    out.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
  }
  return out;
}

}  // namespace ink_detail

// Symbols live in [0,1]^2.
inline StrokeListF symbol_line(std::mt19937& rng) {
  std::uniform_real_distribution<double> a(0.0, 2.0 * M_PI);
  const double angle = a(rng);
  const PointF c{0.5, 0.5};
  const double r = 0.45;
  return {ink_detail::polyline(
      {{c.x - r * std::cos(angle), c.y - r * std::sin(angle)},
       {c.x + r * std::cos(angle), c.y + r * std::sin(angle)}})};
}

inline StrokeListF symbol_zigzag(std::mt19937&) {
  return {ink_detail::polyline({{0.05, 0.9}, {0.35, 0.1}, {0.6, 0.85}, {0.95, 0.15}})};
}

inline StrokeListF symbol_vee(std::mt19937&) {
  return {ink_detail::polyline({{0.1, 0.1}, {0.5, 0.9}, {0.9, 0.1}})};
}

inline StrokeListF symbol_arc(std::mt19937&) {
  return {ink_detail::arc({0.5, 0.5}, 0.4, 0.2 * M_PI, 1.3 * M_PI)};
}

inline StrokeListF symbol_circle(std::mt19937&) {
  return {ink_detail::arc({0.5, 0.5}, 0.4, 0.0, 2.0 * M_PI, 40)};
}

inline StrokeListF symbol_plus(std::mt19937&) {
  return {ink_detail::polyline({{0.1, 0.5}, {0.9, 0.5}}),
          ink_detail::polyline({{0.5, 0.1}, {0.5, 0.9}})};
}

inline StrokeListF symbol_cross(std::mt19937&) {
  return {ink_detail::polyline({{0.1, 0.1}, {0.9, 0.9}}),
          ink_detail::polyline({{0.9, 0.1}, {0.1, 0.9}})};
}

inline StrokeListF symbol_tee(std::mt19937&) {
  return {ink_detail::polyline({{0.1, 0.1}, {0.9, 0.1}}),
          ink_detail::polyline({{0.5, 0.1}, {0.5, 0.9}})};
}

// One stroke: down the tail, back up, then around the bowl.
inline StrokeListF symbol_retrace(std::mt19937&) {
  std::vector<PointF> stroke = ink_detail::polyline({{0.5, 0.95}, {0.5, 0.55}});
  auto back = ink_detail::polyline({{0.5, 0.55}, {0.5, 0.95}});
  auto bowl = ink_detail::arc({0.5, 0.3}, 0.25, M_PI / 2.0, M_PI / 2.0 + 2.0 * M_PI, 40);
  stroke.insert(stroke.end(), back.begin() + 1, back.end());
  stroke.insert(stroke.end(), bowl.begin() + 1, bowl.end());
  return {stroke};
}

inline StrokeListF make_symbol(int kind, std::mt19937& rng) {
  switch (kind % 9) {
    case 0: return symbol_line(rng);
    case 1: return symbol_zigzag(rng);
    case 2: return symbol_vee(rng);
    case 3: return symbol_arc(rng);
    case 4: return symbol_circle(rng);
    case 5: return symbol_plus(rng);
    case 6: return symbol_cross(rng);
    case 7: return symbol_tee(rng);
    default: return symbol_retrace(rng);
  }
}

// A document with 2..12 strokes: symbols dropped into cells of a 4x3 grid.
inline InkDocument synthetic_document(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> stroke_budget(2, 12);
  std::uniform_int_distribution<int> kind(0, 8);
  std::uniform_real_distribution<double> jitter(0.05, 0.15);

  const int budget = stroke_budget(rng);
  InkDocument doc;
  doc.source_unit = "synthetic";

  std::vector<int> cells(12);
  for (int i = 0; i < 12; ++i) cells[i] = i;
  std::shuffle(cells.begin(), cells.end(), rng);

  size_t cell_index = 0;
  while (static_cast<int>(doc.strokes.size()) < budget && cell_index < cells.size()) {
    StrokeListF symbol = make_symbol(kind(rng), rng);
    if (static_cast<int>(doc.strokes.size() + symbol.size()) > budget) {
      symbol = symbol_line(rng);
      if (static_cast<int>(doc.strokes.size() + symbol.size()) > budget) break;
    }
    const int cell = cells[cell_index++];
    const double cx = (cell % 4) * 25.0, cy = (cell / 4) * 33.0;
    const double pad = jitter(rng) * 20.0;
    const double sx = 25.0 - 2 * pad, sy = 33.0 - 2 * pad;
    for (auto& stroke : symbol) {
      for (auto& p : stroke) p = {cx + pad + p.x * sx, cy + pad + p.y * sy};
      doc.strokes.push_back(std::move(stroke));
    }
  }
  return doc;
}

}  // namespace strokex::testing
