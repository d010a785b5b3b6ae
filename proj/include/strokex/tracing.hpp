#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "strokex/geometry.hpp"
#include "strokex/skeleton_graph.hpp"

namespace strokex {

struct TraceParams {
  int direction_window = 5;                        // pixels used to estimate end directions
  double double_trace_angle_margin = M_PI / 9.0;   // "close to pi/2" half-width
  bool eulerian_mode = false;                      // absorb circuits into paths

  void validate() const {
    if (direction_window < 2) throw std::invalid_argument("direction window must be >= 2");
    if (!(double_trace_angle_margin > 0.0 && double_trace_angle_margin < M_PI / 2.0))
      throw std::invalid_argument("double-trace angle margin must be in (0, pi/2)");
  }
};

// Direction of travel pointing into the chosen end of a segment, estimated
// as the chord over the last min(window, length) pixels. A single-pixel
// segment has no direction.
inline std::optional<Vec2> endpoint_direction(const Segment& segment, bool at_back,
                                              int window) {
  const auto& px = segment.pixels;
  if (px.empty()) throw std::invalid_argument("endpoint_direction: empty segment");
  const int n = static_cast<int>(px.size());
  const int span = std::min(window, n) - 1;
  if (span < 1) return std::nullopt;
  const Point& tip = at_back ? px[n - 1] : px[0];
  const Point& tail = at_back ? px[n - 1 - span] : px[span];
  const Vec2 chord{static_cast<double>(tip.x - tail.x), static_cast<double>(tip.y - tail.y)};
  if (chord.x == 0.0 && chord.y == 0.0) return std::nullopt;
  return chord.normalized();
}

struct PathStep {
  int segment = -1;
  bool forward = true;  // true: pixels traversed p1 -> pl
};

struct TracedPath {
  std::vector<PathStep> steps;
  int start_vertex = -1;
  int end_vertex = -1;

  bool closed() const { return start_vertex == end_vertex; }
};

struct MergeEvent {
  int vertex = -1;
  int segment_a = -1;  // terminal segments meeting at the vertex
  int segment_b = -1;
  double cost = 0.0;
};
using MergeLog = std::vector<MergeEvent>;

namespace detail {

inline int step_start_vertex(const PathStep& s, const SkeletonGraph& g) {
  return g.segments[s.segment].endpoints[s.forward ? 0 : 1];
}
inline int step_end_vertex(const PathStep& s, const SkeletonGraph& g) {
  return g.segments[s.segment].endpoints[s.forward ? 1 : 0];
}

inline void reverse_path(TracedPath& p) {
  std::reverse(p.steps.begin(), p.steps.end());
  for (PathStep& s : p.steps) s.forward = !s.forward;
  std::swap(p.start_vertex, p.end_vertex);
}

// Direction of travel into the path's chosen end, taken from its terminal
// segment there.
inline std::optional<Vec2> path_end_direction(const TracedPath& p, bool at_back,
                                              const SkeletonGraph& g, int window) {
  const PathStep& step = at_back ? p.steps.back() : p.steps.front();
  // Arriving at the back end means arriving at the step's travel end; the
  // front end is reached by traveling the first step backwards.
  const bool segment_back = at_back ? step.forward : !step.forward;
  return endpoint_direction(g.segments[step.segment], segment_back, window);
}

inline int path_terminal_segment(const TracedPath& p, bool at_back) {
  return (at_back ? p.steps.back() : p.steps.front()).segment;
}

// Turning cost of continuing from one path into another across their shared
// vertex: 0 when the directions line up, pi for a full reversal. Ends without
// a usable direction contribute a neutral pi/2.
inline double turning_cost(const std::optional<Vec2>& into_a, const std::optional<Vec2>& into_b) {
  if (!into_a || !into_b) return M_PI / 2.0;
  return M_PI - angle_between(*into_a, *into_b);
}

inline std::vector<int> path_vertex_sequence(const TracedPath& p, const SkeletonGraph& g) {
  std::vector<int> seq;
  seq.reserve(p.steps.size() + 1);
  seq.push_back(p.start_vertex);
  for (const PathStep& s : p.steps) seq.push_back(step_end_vertex(s, g));
  return seq;
}

}  // namespace detail

// Bottom-up clustering of edges into pen paths. Every edge starts as its own
// path; the pair of distinct paths sharing an end vertex with the smallest
// turning cost is merged, repeatedly, until no two paths share an end vertex.
// With eulerian_mode set, leftover closed paths are spliced into any path
// passing through one of their vertices, minimizing the stroke count.
inline std::vector<TracedPath> trace_strokes(const SkeletonGraph& graph,
                                             const TraceParams& params,
                                             MergeLog* log = nullptr) {
  params.validate();
  std::vector<TracedPath> paths;
  paths.reserve(graph.segments.size());
  for (const Segment& s : graph.segments)
    paths.push_back({{{s.id, true}}, s.endpoints[0], s.endpoints[1]});

  auto end_vertex = [&](const TracedPath& p, int end) {
    return end == 0 ? p.start_vertex : p.end_vertex;
  };

  while (true) {
    double best_cost = 0.0;
    std::tuple<int, int, int, int, int> best_key;  // seg_lo, seg_hi, i, j, end combo
    int best_i = -1, best_j = -1, best_ei = 0, best_ej = 0;

    for (size_t i = 0; i < paths.size(); ++i) {
      for (size_t j = i + 1; j < paths.size(); ++j) {
        for (int ei = 0; ei < 2; ++ei) {
          for (int ej = 0; ej < 2; ++ej) {
            const int v = end_vertex(paths[i], ei);
            if (v != end_vertex(paths[j], ej)) continue;
            const auto dir_i = detail::path_end_direction(paths[i], ei == 1, graph,
                                                          params.direction_window);
            const auto dir_j = detail::path_end_direction(paths[j], ej == 1, graph,
                                                          params.direction_window);
            const double cost = detail::turning_cost(dir_i, dir_j);
            const int sa = detail::path_terminal_segment(paths[i], ei == 1);
            const int sb = detail::path_terminal_segment(paths[j], ej == 1);
            const auto key = std::make_tuple(std::min(sa, sb), std::max(sa, sb),
                                             static_cast<int>(i), static_cast<int>(j),
                                             ei * 2 + ej);
            if (best_i < 0 || cost < best_cost - 1e-12 ||
                (std::abs(cost - best_cost) <= 1e-12 && key < best_key)) {
              best_cost = cost;
              best_key = key;
              best_i = static_cast<int>(i);
              best_j = static_cast<int>(j);
              best_ei = ei;
              best_ej = ej;
            }
          }
        }
      }
    }
    if (best_i < 0) break;

    TracedPath& a = paths[best_i];
    TracedPath b = paths[best_j];
    if (log)
      log->push_back({end_vertex(a, best_ei),
                      detail::path_terminal_segment(a, best_ei == 1),
                      detail::path_terminal_segment(b, best_ej == 1), best_cost});
    if (best_ei == 0) detail::reverse_path(a);   // a now ends at the shared vertex
    if (best_ej == 1) detail::reverse_path(b);   // b now starts at it
    a.steps.insert(a.steps.end(), b.steps.begin(), b.steps.end());
    a.end_vertex = b.end_vertex;
    paths.erase(paths.begin() + best_j);
  }

  if (params.eulerian_mode) {
    bool absorbed = true;
    while (absorbed) {
      absorbed = false;
      for (size_t c = 0; c < paths.size() && !absorbed; ++c) {
        if (!paths[c].closed()) continue;
        const auto circuit_vertices = detail::path_vertex_sequence(paths[c], graph);
        for (size_t p = 0; p < paths.size() && !absorbed; ++p) {
          if (p == c) continue;
          auto host_vertices = detail::path_vertex_sequence(paths[p], graph);
          for (size_t pos = 0; pos < host_vertices.size(); ++pos) {
            const int v = host_vertices[pos];
            auto hit = std::find(circuit_vertices.begin(), circuit_vertices.end(), v);
            if (hit == circuit_vertices.end()) continue;
            // Rotate the circuit to start at v and splice it in.
            TracedPath circuit = paths[c];
            const size_t offset = static_cast<size_t>(hit - circuit_vertices.begin());
            std::rotate(circuit.steps.begin(), circuit.steps.begin() + offset,
                        circuit.steps.end());
            paths[p].steps.insert(paths[p].steps.begin() + pos, circuit.steps.begin(),
                                  circuit.steps.end());
            paths.erase(paths.begin() + c);
            absorbed = true;
            break;
          }
        }
      }
    }
  }
  return paths;
}

// One single-point stroke per isolated vertex, at its pixel centroid.
inline std::vector<Stroke> extract_dots(const SkeletonGraph& graph) {
  std::vector<Stroke> dots;
  for (const Junction& j : graph.junctions) {
    if (graph.degree(j.id) != 0) continue;
    dots.push_back(Stroke{{round_point(j.centroid())}});
  }
  return dots;
}

// Repairs strokes whose pen path covered a segment twice. A segment with two
// distinct odd-degree endpoints is doubled when at each endpoint some path
// terminates there (a path anchored through the segment itself passes
// trivially) with a continuation angle not close to pi/2, and exactly one of
// the two anchors runs through the segment itself. Doubling joins the two
// anchor paths through the segment out-and-back; candidates are applied in
// ascending order of their worst endpoint angle, with parities updated as
// segments are doubled.
inline std::vector<TracedPath> fix_double_traced(std::vector<TracedPath> paths,
                                                 const SkeletonGraph& graph,
                                                 const TraceParams& params) {
  params.validate();
  std::vector<int> parity(graph.junctions.size(), 0);
  for (const Junction& j : graph.junctions) parity[j.id] = graph.degree(j.id) & 1;

  struct Anchor {
    int path = -1;
    bool at_back = false;
    bool via_candidate = false;
    double deviation = 0.0;
  };

  auto find_anchor = [&](int vertex, const Segment& s, bool segment_back)
      -> std::optional<Anchor> {
    // Direction leaving the vertex along s.
    const auto into_s = endpoint_direction(s, segment_back, params.direction_window);
    const std::optional<Vec2> away = into_s ? std::optional<Vec2>(-*into_s) : std::nullopt;
    std::optional<Anchor> best;
    for (size_t pi = 0; pi < paths.size(); ++pi) {
      for (int end = 0; end < 2; ++end) {
        const int v = end == 0 ? paths[pi].start_vertex : paths[pi].end_vertex;
        if (v != vertex) continue;
        const bool at_back = end == 1;
        const bool via = detail::path_terminal_segment(paths[pi], at_back) == s.id;
        double deviation = 0.0;
        if (!via) {
          const auto into_path =
              detail::path_end_direction(paths[pi], at_back, graph, params.direction_window);
          if (into_path && away) deviation = angle_between(*into_path, *away);
          if (std::abs(deviation - M_PI / 2.0) <= params.double_trace_angle_margin)
            continue;  // close to a right angle: not a retrace continuation
        }
        if (!best || deviation < best->deviation ||
            (deviation == best->deviation &&
             std::make_pair(pi, at_back) <
                 std::make_pair(static_cast<size_t>(best->path), best->at_back))) {
          best = Anchor{static_cast<int>(pi), at_back, via, deviation};
        }
      }
    }
    return best;
  };

  while (true) {
    int best_segment = -1;
    double best_key = 0.0;
    Anchor best_front, best_back;
    for (const Segment& s : graph.segments) {
      const int u = s.endpoints[0], w = s.endpoints[1];
      if (u == w || !parity[u] || !parity[w]) continue;
      const auto front = find_anchor(u, s, false);  // s leaves u from its p1 end
      const auto back = find_anchor(w, s, true);
      if (!front || !back) continue;
      if (front->via_candidate == back->via_candidate) continue;
      const double key = std::max(front->deviation, back->deviation);
      if (best_segment < 0 || key < best_key) {
        best_segment = s.id;
        best_key = key;
        best_front = *front;
        best_back = *back;
      }
    }
    if (best_segment < 0) break;

    const Segment& s = graph.segments[best_segment];
    const int u = s.endpoints[0], w = s.endpoints[1];
    if (best_front.path == best_back.path) {
      // The path's two ends sit on the segment's endpoints; close it through
      // the segment.
      TracedPath& p = paths[best_front.path];
      if (p.start_vertex == u) detail::reverse_path(p);  // end at u
      p.steps.push_back({s.id, true});                   // u -> w
      p.end_vertex = w;
    } else {
      TracedPath& pu = paths[best_front.path];
      TracedPath pw = paths[best_back.path];
      if (!best_front.at_back) detail::reverse_path(pu);  // pu ends at u
      if (best_back.at_back) detail::reverse_path(pw);    // pw starts at w
      pu.steps.push_back({s.id, true});
      pu.steps.insert(pu.steps.end(), pw.steps.begin(), pw.steps.end());
      pu.end_vertex = pw.end_vertex;
      paths.erase(paths.begin() + best_back.path);
    }
    parity[u] ^= 1;
    parity[w] ^= 1;
  }
  return paths;
}

// Concatenates each path's oriented segment pixels, inserting the shared
// vertex centroid between consecutive steps so the polyline stays continuous
// through wide junctions.
inline std::vector<Stroke> paths_to_strokes(const std::vector<TracedPath>& paths,
                                            const SkeletonGraph& graph) {
  std::vector<Stroke> strokes;
  strokes.reserve(paths.size());
  for (const TracedPath& path : paths) {
    Stroke stroke;
    auto push = [&](const Point& p) {
      if (stroke.points.empty() || !(stroke.points.back() == p)) stroke.points.push_back(p);
    };
    for (size_t i = 0; i < path.steps.size(); ++i) {
      const PathStep& step = path.steps[i];
      if (i > 0) {
        const int shared = detail::step_start_vertex(step, graph);
        push(round_point(graph.junctions[shared].centroid()));
      }
      const auto& px = graph.segments[step.segment].pixels;
      if (step.forward)
        for (const Point& p : px) push(p);
      else
        for (auto it = px.rbegin(); it != px.rend(); ++it) push(*it);
    }
    if (!stroke.points.empty()) strokes.push_back(std::move(stroke));
  }
  return strokes;
}

}  // namespace strokex
