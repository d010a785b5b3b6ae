#pragma once

#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "strokex/binarize.hpp"
#include "strokex/image.hpp"
#include "strokex/ink_io.hpp"
#include "strokex/ordering.hpp"
#include "strokex/skeleton_graph.hpp"
#include "strokex/swt.hpp"
#include "strokex/thinning.hpp"
#include "strokex/tracing.hpp"

namespace strokex {

struct PipelineConfig {
  BinarizationParams binarization{.window = 0};  // 0: scale with the image
  bool invert_input = false;
  ThinningVariant thinning = ThinningVariant::kModified;
  SimplifyParams simplify;
  TraceParams trace;
  OrderParams order;
  int render_size = 1000;
  double pen_width = 3.0;
  double margin_frac = 0.05;
  double match_threshold = 10.0;
};

inline nlohmann::json config_to_json(const PipelineConfig& c) {
  return {
      {"window", c.binarization.window},
      {"k", c.binarization.k},
      {"dynamic_range", c.binarization.dynamic_range},
      {"invert", c.invert_input},
      {"thinning", c.thinning == ThinningVariant::kModified ? "modified" : "zhang-suen"},
      {"short_edge_multiplier", c.simplify.short_edge_multiplier},
      {"dot_width_multiplier", c.simplify.dot_width_multiplier},
      {"direction_window", c.trace.direction_window},
      {"double_trace_angle_margin", c.trace.double_trace_angle_margin},
      {"eulerian", c.trace.eulerian_mode},
      {"gap_multiplier", c.order.gap_multiplier},
      {"size", c.render_size},
      {"pen_width", c.pen_width},
      {"margin", c.margin_frac},
      {"threshold", c.match_threshold},
  };
}

inline PipelineConfig config_from_json(const nlohmann::json& j) {
  PipelineConfig c;
  c.binarization.window = j.value("window", c.binarization.window);
  c.binarization.k = j.value("k", c.binarization.k);
  c.binarization.dynamic_range = j.value("dynamic_range", c.binarization.dynamic_range);
  c.invert_input = j.value("invert", c.invert_input);
  const std::string thinning = j.value("thinning", "modified");
  if (thinning == "modified")
    c.thinning = ThinningVariant::kModified;
  else if (thinning == "zhang-suen")
    c.thinning = ThinningVariant::kZhangSuen;
  else
    throw std::invalid_argument("unknown thinning variant '" + thinning + "'");
  c.simplify.short_edge_multiplier = j.value("short_edge_multiplier", c.simplify.short_edge_multiplier);
  c.simplify.dot_width_multiplier = j.value("dot_width_multiplier", c.simplify.dot_width_multiplier);
  c.trace.direction_window = j.value("direction_window", c.trace.direction_window);
  c.trace.double_trace_angle_margin =
      j.value("double_trace_angle_margin", c.trace.double_trace_angle_margin);
  c.trace.eulerian_mode = j.value("eulerian", c.trace.eulerian_mode);
  c.order.gap_multiplier = j.value("gap_multiplier", c.order.gap_multiplier);
  c.render_size = j.value("size", c.render_size);
  c.pen_width = j.value("pen_width", c.pen_width);
  c.margin_frac = j.value("margin", c.margin_frac);
  c.match_threshold = j.value("threshold", c.match_threshold);
  return c;
}

// Intermediate artifacts collected when a debug directory is requested.
struct DebugArtifacts {
  BinaryImage binary;
  SkeletonImage skeleton;
  StrokeWidthMap swt;
  SkeletonGraph raw_graph;
  nlohmann::json graph;
  nlohmann::json simplified_graph;
  MergeLog merge_log;
  nlohmann::json group_tree;
};

struct ExtractionResult {
  std::vector<Stroke> strokes;
  int width = 0;
  int height = 0;
  double avg_stroke_width = 0.0;

  InkDocument to_ink() const { return ink_from_strokes(strokes, width, height); }
};

inline nlohmann::json graph_to_json(const SkeletonGraph& graph) {
  nlohmann::json j;
  j["avg_stroke_width"] = graph.avg_stroke_width;
  auto& vertices = j["vertices"] = nlohmann::json::array();
  for (const Junction& v : graph.junctions) {
    nlohmann::json pixels = nlohmann::json::array();
    for (const Point& p : v.pixels) pixels.push_back({p.x, p.y});
    vertices.push_back({{"id", v.id},
                        {"pixels", std::move(pixels)},
                        {"width", v.width},
                        {"degree", graph.degree(v.id)},
                        {"imposed", v.imposed}});
  }
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const Segment& s : graph.segments)
    edges.push_back({{"id", s.id},
                     {"endpoints", {s.endpoints[0], s.endpoints[1]}},
                     {"length", s.length()},
                     {"width", s.width}});
  return j;
}

// Segments solid black, junction pixels hollow red rings on white.
inline ColorImage graph_overlay(const SkeletonGraph& graph, int width, int height) {
  ColorImage img;
  img.width = width;
  img.height = height;
  img.channels = 3;
  img.samples.assign(static_cast<size_t>(width) * height * 3, 255);
  auto put = [&](const Point& p, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height) return;
    const size_t i = (static_cast<size_t>(p.y) * width + p.x) * 3;
    img.samples[i] = r;
    img.samples[i + 1] = g;
    img.samples[i + 2] = b;
  };
  for (const Segment& s : graph.segments)
    for (const Point& p : s.pixels) put(p, 0, 0, 0);
  for (const Junction& v : graph.junctions)
    if (!v.imposed)
      for (const Point& p : v.pixels) put(p, 220, 30, 30);
  return img;
}

inline nlohmann::json group_tree_json(const std::vector<Stroke>& strokes, double avg_width,
                                      const OrderParams& params) {
  std::vector<BBox> boxes;
  for (const Stroke& s : strokes) boxes.push_back(s.bbox());
  const double threshold = params.gap_multiplier * avg_width;

  std::function<nlohmann::json(const std::vector<int>&, int)> visit =
      [&](const std::vector<int>& indices, int preferred_axis) -> nlohmann::json {
    if (indices.size() > 1) {
      for (int attempt = 0; attempt < 2; ++attempt) {
        const int axis = attempt == 0 ? preferred_axis : 1 - preferred_axis;
        auto clusters = detail::split_axis(indices, boxes, axis, threshold);
        if (clusters.size() > 1) {
          nlohmann::json node;
          node["axis"] = axis == 0 ? "x" : "y";
          auto& children = node["children"] = nlohmann::json::array();
          for (const auto& cluster : clusters) children.push_back(visit(cluster, 1 - axis));
          return node;
        }
      }
    }
    nlohmann::json leaf;
    leaf["strokes"] = indices;
    return leaf;
  };

  std::vector<int> all(strokes.size());
  std::iota(all.begin(), all.end(), 0);
  return strokes.empty() ? nlohmann::json{{"strokes", nlohmann::json::array()}} : visit(all, 0);
}

// Runs the whole extraction: binarize, measure stroke widths, thin, decompose
// into a graph, simplify, trace, emit dots, repair double-traced strokes, and
// normalize direction and order.
inline ExtractionResult extract_strokes(const GrayImage& input, const PipelineConfig& config,
                                        DebugArtifacts* debug = nullptr) {
  const GrayImage& gray = config.invert_input ? invert(input) : input;

  const BinaryImage binary = sauvola_binarize(gray, config.binarization);
  const StrokeWidthMap swt = stroke_width_transform(binary);
  const SkeletonImage skeleton = thin(binary, config.thinning);

  const auto labels = classify_pixels(skeleton);
  const auto components = extract_components(labels);
  const SkeletonGraph graph = build_graph(components, swt);
  const SkeletonGraph simplified = simplify(graph, config.simplify);

  MergeLog merge_log;
  auto paths = trace_strokes(simplified, config.trace, debug ? &merge_log : nullptr);
  paths = fix_double_traced(std::move(paths), simplified, config.trace);

  std::vector<Stroke> strokes = paths_to_strokes(paths, simplified);
  for (Stroke& dot : extract_dots(simplified)) strokes.push_back(std::move(dot));
  strokes = order_strokes(strokes, simplified.avg_stroke_width, config.order);

  if (debug) {
    debug->binary = binary;
    debug->skeleton = skeleton;
    debug->swt = swt;
    debug->raw_graph = graph;
    debug->graph = graph_to_json(graph);
    debug->simplified_graph = graph_to_json(simplified);
    debug->merge_log = std::move(merge_log);
    debug->group_tree = group_tree_json(strokes, simplified.avg_stroke_width, config.order);
  }

  ExtractionResult result;
  result.strokes = std::move(strokes);
  result.width = input.width();
  result.height = input.height();
  result.avg_stroke_width = simplified.avg_stroke_width;
  return result;
}

inline ExtractionResult extract_strokes(const ColorImage& input, const PipelineConfig& config,
                                        DebugArtifacts* debug = nullptr) {
  return extract_strokes(to_grayscale(input), config, debug);
}

}  // namespace strokex
