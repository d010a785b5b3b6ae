#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "strokex/connected_components.hpp"
#include "strokex/image.hpp"
#include "strokex/swt.hpp"

namespace strokex {

enum PixelClass : std::uint8_t {
  kBackground = 0,
  kSegmentPixel = 1,
  kJunctionPixel = 2,
};

// A skeleton pixel is a segment pixel iff it has exactly two foreground
// 8-neighbors and those two are not 4-neighbors of each other. Every other
// foreground pixel is a junction pixel.
inline Image<std::uint8_t> classify_pixels(const SkeletonImage& skeleton) {
  const int w = skeleton.width(), h = skeleton.height();
  Image<std::uint8_t> labels(w, h, kBackground);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!skeleton.at(x, y)) continue;
      Point nbr[3];
      int count = 0;
      for (int dy = -1; dy <= 1 && count < 3; ++dy)
        for (int dx = -1; dx <= 1 && count < 3; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (skeleton.at_or(x + dx, y + dy, 0)) nbr[count++] = {x + dx, y + dy};
        }
      bool segment = false;
      if (count == 2) {
        const int ddx = std::abs(nbr[0].x - nbr[1].x);
        const int ddy = std::abs(nbr[0].y - nbr[1].y);
        segment = ddx + ddy != 1;  // the two neighbors are not 4-adjacent
      }
      labels.at(x, y) = segment ? kSegmentPixel : kJunctionPixel;
    }
  }
  return labels;
}

struct SkeletonComponents {
  std::vector<std::vector<Point>> segments;
  std::vector<std::vector<Point>> junctions;
};

inline SkeletonComponents extract_components(const Image<std::uint8_t>& labels) {
  return {connected_components8<std::uint8_t>(labels, kSegmentPixel),
          connected_components8<std::uint8_t>(labels, kJunctionPixel)};
}

namespace detail {

inline bool adjacent8(const Point& a, const Point& b) {
  return !(a == b) && std::abs(a.x - b.x) <= 1 && std::abs(a.y - b.y) <= 1;
}

}  // namespace detail

// Lists a segment component as a chain p1..pl with consecutive pixels
// 8-adjacent. Open chains start at the raster-smaller endpoint; loops start
// at the raster-smallest pixel and take the raster-smaller of its two cycle
// neighbors first.
inline std::vector<Point> order_segment_pixels(const std::vector<Point>& segment) {
  if (segment.empty()) throw std::invalid_argument("order_segment_pixels: empty component");
  if (segment.size() == 1) return segment;

  // Adjacency restricted to the component. Components are small, so the
  // quadratic scan is fine; a grid index would only pay off on degenerate
  // inputs.
  const size_t n = segment.size();
  std::vector<std::vector<int>> adj(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (detail::adjacent8(segment[i], segment[j])) {
        adj[i].push_back(static_cast<int>(j));
        adj[j].push_back(static_cast<int>(i));
      }

  int start = -1;
  bool loop = true;
  for (size_t i = 0; i < n; ++i) {
    if (adj[i].size() > 2)
      throw InternalConsistencyError("segment component is not a simple chain");
    if (adj[i].size() < 2) loop = false;
  }
  if (loop) {
    for (size_t i = 0; i < n; ++i)
      if (start < 0 || raster_less(segment[i], segment[start])) start = static_cast<int>(i);
  } else {
    for (size_t i = 0; i < n; ++i) {
      if (adj[i].size() >= 2) continue;
      if (start < 0 || raster_less(segment[i], segment[start])) start = static_cast<int>(i);
    }
  }

  std::vector<Point> ordered;
  ordered.reserve(n);
  std::vector<char> used(n, 0);
  int prev = -1, cur = start;
  while (cur >= 0) {
    used[cur] = 1;
    ordered.push_back(segment[cur]);
    int next = -1;
    for (int cand : adj[cur]) {
      if (cand == prev || used[cand]) continue;
      if (next < 0 || raster_less(segment[cand], segment[next])) next = cand;
    }
    prev = cur;
    cur = next;
  }
  if (ordered.size() != n)
    throw InternalConsistencyError("segment component is not traceable as one chain");
  return ordered;
}

struct Junction {
  int id = -1;
  std::vector<Point> pixels;
  int width = 0;
  bool imposed = false;  // synthesized on a looped segment

  PointF centroid() const {
    double sx = 0, sy = 0;
    for (const Point& p : pixels) {
      sx += p.x;
      sy += p.y;
    }
    const double n = static_cast<double>(pixels.size());
    return {sx / n, sy / n};
  }
};

struct Segment {
  int id = -1;
  std::vector<Point> pixels;  // ordered chain
  int endpoints[2] = {-1, -1};
  int width = 0;

  int length() const { return static_cast<int>(pixels.size()); }
  bool is_loop() const { return endpoints[0] == endpoints[1]; }
};

struct SkeletonGraph {
  std::vector<Junction> junctions;  // vertex id == index
  std::vector<Segment> segments;    // edge id == index
  double avg_stroke_width = 0.0;    // mean of segment widths

  // Incidences at a vertex; a loop contributes 2.
  int degree(int junction_id) const {
    int d = 0;
    for (const Segment& s : segments)
      d += (s.endpoints[0] == junction_id) + (s.endpoints[1] == junction_id);
    return d;
  }
};

namespace detail {

inline int max_width_over(const std::vector<Point>& pixels, const StrokeWidthMap& swt) {
  int w = 0;
  for (const Point& p : pixels) w = std::max(w, swt.at_or(p.x, p.y, 1));
  return std::max(w, 1);
}

}  // namespace detail

// Vertices from junction components, edges from segment components. A looped
// segment gets an imposed vertex at its raster-smallest pixel so that every
// edge has two (possibly equal) endpoints. Widths are the max stroke width
// over each component; the pen-size estimate is the mean of segment widths.
inline SkeletonGraph build_graph(const SkeletonComponents& components,
                                 const StrokeWidthMap& swt) {
  SkeletonGraph graph;
  Image<std::int32_t> junction_of(std::max(swt.width(), 1), std::max(swt.height(), 1), -1);

  for (const auto& pixels : components.junctions) {
    Junction j;
    j.id = static_cast<int>(graph.junctions.size());
    j.pixels = pixels;
    j.width = detail::max_width_over(pixels, swt);
    for (const Point& p : pixels) junction_of.at(p) = j.id;
    graph.junctions.push_back(std::move(j));
  }

  auto junctions_touching = [&](const Point& p) {
    std::vector<int> ids;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int id = junction_of.at_or(p.x + dx, p.y + dy, -1);
        if (id >= 0 && std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
      }
    return ids;
  };

  for (const auto& component : components.segments) {
    Segment s;
    s.id = static_cast<int>(graph.segments.size());
    s.pixels = order_segment_pixels(component);
    s.width = detail::max_width_over(s.pixels, swt);

    const bool loop = s.pixels.size() > 1 &&
                      detail::adjacent8(s.pixels.front(), s.pixels.back()) &&
                      junctions_touching(s.pixels.front()).empty();
    if (loop) {
      Junction imposed;
      imposed.id = static_cast<int>(graph.junctions.size());
      imposed.pixels = {s.pixels.front()};
      imposed.width = detail::max_width_over(imposed.pixels, swt);
      imposed.imposed = true;
      graph.junctions.push_back(imposed);
      s.endpoints[0] = s.endpoints[1] = imposed.id;
    } else {
      const auto at_front = junctions_touching(s.pixels.front());
      const auto at_back = junctions_touching(s.pixels.back());
      if (s.pixels.size() == 1) {
        // Both neighbors of a 1-pixel segment are junction pixels; they may
        // fall in one component or two.
        if (at_front.size() == 1)
          s.endpoints[0] = s.endpoints[1] = at_front[0];
        else if (at_front.size() == 2) {
          s.endpoints[0] = at_front[0];
          s.endpoints[1] = at_front[1];
        } else {
          throw InternalConsistencyError("single-pixel segment touches no junction");
        }
      } else {
        if (at_front.size() != 1 || at_back.size() != 1)
          throw InternalConsistencyError("segment endpoint must touch exactly one junction");
        s.endpoints[0] = at_front[0];
        s.endpoints[1] = at_back[0];
      }
    }
    graph.segments.push_back(std::move(s));
  }

  if (!graph.segments.empty()) {
    double total = 0.0;
    for (const Segment& s : graph.segments) total += s.width;
    graph.avg_stroke_width = total / static_cast<double>(graph.segments.size());
  }
  return graph;
}

struct SimplifyParams {
  double short_edge_multiplier = 1.0;
  double dot_width_multiplier = 0.5;

  void validate() const {
    if (!(short_edge_multiplier > 0.0) || !(dot_width_multiplier > 0.0))
      throw std::invalid_argument("simplify multipliers must be positive");
  }
};

// Noise reduction on the graph:
//   1. every edge shorter than short_edge_multiplier * avg width is removed,
//      shortest first, and its endpoints merged (a too-short loop is dropped
//      outright);
//   2. every degree-0 vertex narrower than dot_width_multiplier * avg width
//      is removed.
// The reference width is the input graph's average and is held fixed while
// the rules run. Ids are compacted afterwards.
inline SkeletonGraph simplify(const SkeletonGraph& graph, const SimplifyParams& params) {
  params.validate();
  const double avg = graph.avg_stroke_width;
  const double short_edge = params.short_edge_multiplier * avg;
  const double dot_width = params.dot_width_multiplier * avg;

  std::vector<Junction> junctions = graph.junctions;
  std::vector<Segment> segments = graph.segments;
  std::vector<char> junction_alive(junctions.size(), 1);
  std::vector<char> segment_alive(segments.size(), 1);

  std::vector<int> parent(junctions.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };

  while (true) {
    int pick = -1;
    for (size_t i = 0; i < segments.size(); ++i) {
      if (!segment_alive[i] || !(segments[i].length() < short_edge)) continue;
      if (pick < 0 || segments[i].length() < segments[pick].length()) pick = static_cast<int>(i);
    }
    if (pick < 0) break;
    Segment& edge = segments[pick];
    segment_alive[pick] = 0;
    const int a = find(edge.endpoints[0]);
    const int b = find(edge.endpoints[1]);
    if (a == b) continue;  // a short loop just disappears
    const int keep = std::min(a, b), drop = std::max(a, b);
    parent[drop] = keep;
    junction_alive[drop] = 0;
    auto& kj = junctions[keep];
    auto& dj = junctions[drop];
    kj.pixels.insert(kj.pixels.end(), dj.pixels.begin(), dj.pixels.end());
    kj.width = std::max(kj.width, dj.width);
    kj.imposed = kj.imposed && dj.imposed;
  }

  for (Segment& s : segments) {
    s.endpoints[0] = find(s.endpoints[0]);
    s.endpoints[1] = find(s.endpoints[1]);
  }

  std::vector<int> degree(junctions.size(), 0);
  for (size_t i = 0; i < segments.size(); ++i) {
    if (!segment_alive[i]) continue;
    degree[segments[i].endpoints[0]]++;
    degree[segments[i].endpoints[1]]++;
  }
  for (size_t i = 0; i < junctions.size(); ++i)
    if (junction_alive[i] && degree[i] == 0 && junctions[i].width < dot_width)
      junction_alive[i] = 0;

  SkeletonGraph out;
  std::vector<int> new_id(junctions.size(), -1);
  for (size_t i = 0; i < junctions.size(); ++i) {
    if (!junction_alive[i]) continue;
    new_id[i] = static_cast<int>(out.junctions.size());
    Junction j = junctions[i];
    j.id = new_id[i];
    out.junctions.push_back(std::move(j));
  }
  for (size_t i = 0; i < segments.size(); ++i) {
    if (!segment_alive[i]) continue;
    Segment s = segments[i];
    s.id = static_cast<int>(out.segments.size());
    s.endpoints[0] = new_id[s.endpoints[0]];
    s.endpoints[1] = new_id[s.endpoints[1]];
    out.segments.push_back(std::move(s));
  }

  if (!out.segments.empty()) {
    double total = 0.0;
    for (const Segment& s : out.segments) total += s.width;
    out.avg_stroke_width = total / static_cast<double>(out.segments.size());
  }
  return out;
}

// Connected components of the graph itself (vertices linked by edges).
inline size_t count_graph_components(const SkeletonGraph& graph) {
  std::vector<int> parent(graph.junctions.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const Segment& s : graph.segments) {
    const int a = find(s.endpoints[0]), b = find(s.endpoints[1]);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  size_t n = 0;
  for (size_t i = 0; i < parent.size(); ++i) n += find(static_cast<int>(i)) == static_cast<int>(i);
  return n;
}

}  // namespace strokex
