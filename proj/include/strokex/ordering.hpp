#pragma once

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

#include "strokex/geometry.hpp"

namespace strokex {

struct OrderParams {
  double gap_multiplier = 1.0;  // projection-gap threshold, in average stroke widths

  void validate() const {
    if (!(gap_multiplier > 0.0)) throw std::invalid_argument("gap multiplier must be positive");
  }
};

// People write left to right and top to bottom; a stroke is reversed when its
// endpoint scores say it runs the other way:
//   reverse iff 2*x_end + 3*y_end < 2*x_start + 3*y_start.
inline Stroke normalize_direction(Stroke stroke) {
  if (stroke.points.size() < 2) return stroke;
  const Point& a = stroke.points.front();
  const Point& b = stroke.points.back();
  if (2 * b.x + 3 * b.y < 2 * a.x + 3 * a.y)
    std::reverse(stroke.points.begin(), stroke.points.end());
  return stroke;
}

namespace detail {

struct Interval {
  int lo = 0, hi = 0;
};

inline Interval project(const BBox& b, int axis) {
  return axis == 0 ? Interval{b.min_x, b.max_x} : Interval{b.min_y, b.max_y};
}

// Splits indices into clusters along one axis wherever the merged projection
// has a gap wider than the threshold. Clusters come back in axis order.
inline std::vector<std::vector<int>> split_axis(const std::vector<int>& indices,
                                                const std::vector<BBox>& boxes, int axis,
                                                double gap_threshold) {
  std::vector<int> sorted = indices;
  std::stable_sort(sorted.begin(), sorted.end(), [&](int a, int b) {
    const Interval ia = project(boxes[a], axis), ib = project(boxes[b], axis);
    return ia.lo != ib.lo ? ia.lo < ib.lo : ia.hi < ib.hi;
  });

  std::vector<std::vector<int>> clusters;
  int reach = 0;
  for (int idx : sorted) {
    const Interval iv = project(boxes[idx], axis);
    if (clusters.empty() || static_cast<double>(iv.lo - reach) > gap_threshold) {
      clusters.emplace_back();
      reach = iv.hi;
    } else {
      reach = std::max(reach, iv.hi);
    }
    clusters.back().push_back(idx);
  }
  return clusters;
}

inline void xy_cut(const std::vector<int>& indices, const std::vector<BBox>& boxes,
                   int preferred_axis, double gap_threshold,
                   std::vector<std::vector<int>>& leaves) {
  if (indices.size() > 1) {
    for (int attempt = 0; attempt < 2; ++attempt) {
      const int axis = attempt == 0 ? preferred_axis : 1 - preferred_axis;
      auto clusters = split_axis(indices, boxes, axis, gap_threshold);
      if (clusters.size() > 1) {
        for (const auto& cluster : clusters)
          xy_cut(cluster, boxes, 1 - axis, gap_threshold, leaves);
        return;
      }
    }
  }
  leaves.push_back(indices);
}

}  // namespace detail

// Recursive projection grouping: alternate x/y cuts at projection gaps wider
// than gap_multiplier * avg_width; leaves come out left-to-right for x cuts
// and top-to-bottom for y cuts.
inline std::vector<std::vector<Stroke>> group_strokes(const std::vector<Stroke>& strokes,
                                                      double avg_width,
                                                      const OrderParams& params) {
  params.validate();
  if (strokes.empty()) return {};
  std::vector<BBox> boxes;
  boxes.reserve(strokes.size());
  for (const Stroke& s : strokes) boxes.push_back(s.bbox());

  std::vector<int> all(strokes.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::vector<int>> leaves;
  detail::xy_cut(all, boxes, 0, params.gap_multiplier * avg_width, leaves);

  std::vector<std::vector<Stroke>> groups;
  groups.reserve(leaves.size());
  for (const auto& leaf : leaves) {
    std::vector<Stroke> g;
    g.reserve(leaf.size());
    for (int idx : leaf) g.push_back(strokes[idx]);
    groups.push_back(std::move(g));
  }
  return groups;
}

// Topological sort under two precedence rules:
//   i before j when their y-projections intersect, x-projections do not, and
//   i lies entirely left of j; or symmetrically when i lies entirely above j.
// Remaining ambiguity (including cycles through three or more strokes) is
// broken by the top-left bounding-box corner, ascending (y, then x).
inline std::vector<Stroke> sort_group(const std::vector<Stroke>& group) {
  const int n = static_cast<int>(group.size());
  if (n <= 1) return group;

  std::vector<BBox> boxes;
  boxes.reserve(n);
  for (const Stroke& s : group) boxes.push_back(s.bbox());

  auto precedes = [&](int i, int j) {
    const BBox& a = boxes[i];
    const BBox& b = boxes[j];
    const bool xi = intervals_intersect(a.min_x, a.max_x, b.min_x, b.max_x);
    const bool yi = intervals_intersect(a.min_y, a.max_y, b.min_y, b.max_y);
    if (yi && !xi && a.max_x < b.min_x) return true;  // left of
    if (xi && !yi && a.max_y < b.min_y) return true;  // on top of
    return false;
  };

  std::vector<std::vector<int>> succ(n);
  std::vector<int> indegree(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && precedes(i, j)) {
        succ[i].push_back(j);
        ++indegree[j];
      }

  auto corner_key = [&](int i) { return std::make_tuple(boxes[i].min_y, boxes[i].min_x, i); };
  auto later = [&](int a, int b) { return corner_key(a) > corner_key(b); };
  std::priority_queue<int, std::vector<int>, decltype(later)> ready(later);

  std::vector<char> emitted(n, 0);
  for (int i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push(i);

  std::vector<Stroke> out;
  out.reserve(n);
  while (static_cast<int>(out.size()) < n) {
    int pick;
    if (!ready.empty()) {
      pick = ready.top();
      ready.pop();
      if (emitted[pick]) continue;
    } else {
      // A precedence cycle: fall back to the corner order among the rest.
      pick = -1;
      for (int i = 0; i < n; ++i)
        if (!emitted[i] && (pick < 0 || corner_key(i) < corner_key(pick))) pick = i;
    }
    if (emitted[pick]) continue;
    emitted[pick] = 1;
    out.push_back(group[pick]);
    for (int j : succ[pick])
      if (--indegree[j] == 0 && !emitted[j]) ready.push(j);
  }
  return out;
}

// Full ordering pass: normalize every stroke's direction, group by recursive
// projection, sort within each group, concatenate groups in group order.
inline std::vector<Stroke> order_strokes(const std::vector<Stroke>& strokes, double avg_width,
                                         const OrderParams& params) {
  std::vector<Stroke> normalized;
  normalized.reserve(strokes.size());
  for (const Stroke& s : strokes) normalized.push_back(normalize_direction(s));

  std::vector<Stroke> out;
  out.reserve(strokes.size());
  for (const auto& group : group_strokes(normalized, avg_width, params))
    for (Stroke& s : sort_group(group)) out.push_back(std::move(s));
  return out;
}

}  // namespace strokex
