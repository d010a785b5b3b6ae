#pragma once

// Hand-built skeletons, graphs, and stroke sets shared across test files.

#include <cmath>
#include <string>
#include <vector>

#include "strokex/image.hpp"
#include "strokex/skeleton_graph.hpp"

namespace strokex::testing {

// '#' is ink, anything else background.
inline BinaryImage image_from_ascii(const std::vector<std::string>& rows) {
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows.front().size());
  BinaryImage img(w, h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (rows[y][x] == '#') img.at(x, y) = 1;
  return img;
}

// Uniform stroke-width map so graph building has widths to look at.
inline StrokeWidthMap uniform_swt(const BinaryImage& img, int width = 1) {
  StrokeWidthMap swt(img.width(), img.height(), 0);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (img.at(x, y)) swt.at(x, y) = width;
  return swt;
}

// A 15x15 plus: 1-px horizontal and vertical lines crossing at (7,7).
inline SkeletonImage plus_skeleton() {
  BinaryImage img(15, 15, 0);
  for (int x = 1; x <= 13; ++x) img.at(x, 7) = 1;
  for (int y = 1; y <= 13; ++y) img.at(7, y) = 1;
  return img;
}

// A 15x15 T: horizontal bar at y=2 and a stem from its middle down.
inline SkeletonImage tee_skeleton() {
  BinaryImage img(15, 15, 0);
  for (int x = 1; x <= 13; ++x) img.at(x, 2) = 1;
  for (int y = 3; y <= 13; ++y) img.at(7, y) = 1;
  return img;
}

inline Segment make_segment(int id, std::vector<Point> pixels, int a, int b, int width = 1) {
  Segment s;
  s.id = id;
  s.pixels = std::move(pixels);
  s.endpoints[0] = a;
  s.endpoints[1] = b;
  s.width = width;
  return s;
}

inline Junction make_junction(int id, std::vector<Point> pixels, int width = 1,
                              bool imposed = false) {
  Junction j;
  j.id = id;
  j.pixels = std::move(pixels);
  j.width = width;
  j.imposed = imposed;
  return j;
}

inline std::vector<Point> pixel_line(Point from, Point to) {
  std::vector<Point> px;
  const int steps = std::max(std::abs(to.x - from.x), std::abs(to.y - from.y));
  for (int i = 0; i <= steps; ++i)
    px.push_back({from.x + (to.x - from.x) * i / std::max(1, steps),
                  from.y + (to.y - from.y) * i / std::max(1, steps)});
  return px;
}

inline void finish_graph(SkeletonGraph& g) {
  if (g.segments.empty()) return;
  double total = 0;
  for (const auto& s : g.segments) total += s.width;
  g.avg_stroke_width = total / g.segments.size();
}

// Plus as a graph: center vertex 0 at (10,10), leaves 1..4, four arms.
inline SkeletonGraph plus_graph() {
  SkeletonGraph g;
  g.junctions = {make_junction(0, {{10, 10}}), make_junction(1, {{0, 10}}),
                 make_junction(2, {{20, 10}}), make_junction(3, {{10, 0}}),
                 make_junction(4, {{10, 20}})};
  g.segments = {make_segment(0, pixel_line({1, 10}, {9, 10}), 1, 0),
                make_segment(1, pixel_line({11, 10}, {19, 10}), 0, 2),
                make_segment(2, pixel_line({10, 1}, {10, 9}), 3, 0),
                make_segment(3, pixel_line({10, 11}, {10, 19}), 0, 4)};
  finish_graph(g);
  return g;
}

// T as a graph: bar tips 1,2, stem tip 3, junction 0 at (10,0).
inline SkeletonGraph tee_graph() {
  SkeletonGraph g;
  g.junctions = {make_junction(0, {{10, 0}}), make_junction(1, {{0, 0}}),
                 make_junction(2, {{20, 0}}), make_junction(3, {{10, 15}})};
  g.segments = {make_segment(0, pixel_line({1, 0}, {9, 0}), 1, 0),
                make_segment(1, pixel_line({11, 0}, {19, 0}), 0, 2),
                make_segment(2, pixel_line({10, 1}, {10, 14}), 0, 3)};
  finish_graph(g);
  return g;
}

// Loop with a stem: self-loop at vertex 0 plus a stem 0 -> 1, the shape of a
// handwritten 'd' bowl with a retraced tail. The loop's free end meets the
// stem well away from a right angle, so the stem is doubled during repair.
inline SkeletonGraph loop_stem_graph() {
  SkeletonGraph g;
  // Rectangular loop attached next to (20,20): left along y=19, up, right,
  // and back down to (20,19).
  std::vector<Point> loop;
  for (int x = 19; x >= 12; --x) loop.push_back({x, 19});
  for (int y = 18; y >= 12; --y) loop.push_back({12, y});
  for (int x = 13; x <= 19; ++x) loop.push_back({x, 12});
  for (int y = 13; y <= 18; ++y) loop.push_back({19, y});
  loop.push_back({20, 19});
  g.junctions = {make_junction(0, {{20, 20}}), make_junction(1, {{30, 30}})};
  g.segments = {make_segment(0, loop, 0, 0),
                make_segment(1, pixel_line({21, 21}, {30, 30}), 0, 1)};
  finish_graph(g);
  return g;
}

}  // namespace strokex::testing
