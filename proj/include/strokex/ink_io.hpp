#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <tuple>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "strokex/geometry.hpp"
#include "strokex/image.hpp"

namespace strokex {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ordered strokes plus the canvas they live on. Coordinates are in the
// source unit until a render/fit pins them to pixels.
struct InkDocument {
  std::vector<std::vector<PointF>> strokes;
  int width = 0;
  int height = 0;
  std::string source_unit = "px";
};

inline InkDocument ink_from_strokes(const std::vector<Stroke>& strokes, int width, int height) {
  InkDocument doc;
  doc.width = width;
  doc.height = height;
  for (const Stroke& s : strokes) {
    std::vector<PointF> pts;
    pts.reserve(s.points.size());
    for (const Point& p : s.points) pts.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
    doc.strokes.push_back(std::move(pts));
  }
  return doc;
}

namespace detail {

inline bool is_trace_tag_at(const std::string& text, size_t pos) {
  // "<trace" must not be "<traceFormat>", "<traceGroup>", "<traceView>"...
  const size_t after = pos + 6;
  if (after >= text.size()) return false;
  const char c = text[after];
  return c == '>' || c == '/' || std::isspace(static_cast<unsigned char>(c));
}

inline std::vector<PointF> parse_trace_points(const std::string& body, int trace_index) {
  std::vector<PointF> points;
  size_t pos = 0;
  while (pos <= body.size()) {
    size_t comma = body.find(',', pos);
    if (comma == std::string::npos) comma = body.size();
    const std::string token = body.substr(pos, comma - pos);
    // Each comma-separated entry is "x y" with optional extra channels.
    std::vector<double> values;
    const char* s = token.c_str();
    char* end = nullptr;
    while (*s) {
      while (*s && std::isspace(static_cast<unsigned char>(*s))) ++s;
      if (!*s) break;
      const double v = std::strtod(s, &end);
      if (end == s)
        throw ParseError("trace " + std::to_string(trace_index) +
                         ": non-numeric coordinate '" + token + "'");
      values.push_back(v);
      s = end;
    }
    if (!values.empty()) {
      if (values.size() < 2)
        throw ParseError("trace " + std::to_string(trace_index) +
                         ": point needs two coordinates in '" + token + "'");
      points.push_back({values[0], values[1]});
    }
    pos = comma + 1;
    if (comma == body.size()) break;
  }
  if (points.empty())
    throw ParseError("trace " + std::to_string(trace_index) + ": empty trace");
  return points;
}

inline std::string format_coord(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
    return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace detail

// Reads the trace elements of an InkML document: one stroke per <trace>, each
// a comma-separated list of "x y" points. Everything else (annotations,
// trace groups, ground truth) is ignored.
inline InkDocument parse_ink(const std::string& text) {
  InkDocument doc;
  doc.source_unit = "ink";
  size_t pos = 0;
  int trace_index = 0;
  while ((pos = text.find("<trace", pos)) != std::string::npos) {
    if (!detail::is_trace_tag_at(text, pos)) {
      pos += 6;
      continue;
    }
    const size_t open_end = text.find('>', pos);
    if (open_end == std::string::npos)
      throw ParseError("trace " + std::to_string(trace_index) + ": unterminated start tag");
    if (text[open_end - 1] == '/')
      throw ParseError("trace " + std::to_string(trace_index) + ": empty trace");
    const size_t close = text.find("</trace>", open_end);
    if (close == std::string::npos)
      throw ParseError("trace " + std::to_string(trace_index) + ": missing </trace>");
    doc.strokes.push_back(
        detail::parse_trace_points(text.substr(open_end + 1, close - open_end - 1), trace_index));
    ++trace_index;
    pos = close + 8;
  }
  if (doc.strokes.empty()) throw ParseError("no trace elements found");
  return doc;
}

enum class InkFormat { kJson, kInkml };

inline std::string serialize_strokes(const InkDocument& doc, InkFormat format) {
  if (format == InkFormat::kJson) {
    nlohmann::json j;
    j["width"] = doc.width;
    j["height"] = doc.height;
    auto& strokes = j["strokes"] = nlohmann::json::array();
    for (const auto& stroke : doc.strokes) {
      nlohmann::json s = nlohmann::json::array();
      for (const PointF& p : stroke) {
        if (p.x == std::floor(p.x) && p.y == std::floor(p.y))
          s.push_back({static_cast<long long>(p.x), static_cast<long long>(p.y)});
        else
          s.push_back({p.x, p.y});
      }
      strokes.push_back(std::move(s));
    }
    return j.dump(2) + "\n";
  }

  std::string out = "<ink xmlns=\"http://www.w3.org/2003/InkML\">\n";
  out += "  <traceFormat>\n    <channel name=\"X\" type=\"decimal\"/>\n"
         "    <channel name=\"Y\" type=\"decimal\"/>\n  </traceFormat>\n";
  for (size_t i = 0; i < doc.strokes.size(); ++i) {
    out += "  <trace id=\"" + std::to_string(i) + "\">";
    for (size_t k = 0; k < doc.strokes[i].size(); ++k) {
      if (k) out += ", ";
      out += detail::format_coord(doc.strokes[i][k].x) + " " +
             detail::format_coord(doc.strokes[i][k].y);
    }
    out += "</trace>\n";
  }
  out += "</ink>\n";
  return out;
}

inline InkDocument parse_stroke_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid stroke JSON: ") + e.what());
  }
  InkDocument doc;
  doc.width = j.value("width", 0);
  doc.height = j.value("height", 0);
  if (!j.contains("strokes") || !j["strokes"].is_array())
    throw ParseError("stroke JSON missing 'strokes' array");
  for (const auto& s : j["strokes"]) {
    std::vector<PointF> pts;
    for (const auto& p : s) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    doc.strokes.push_back(std::move(pts));
  }
  return doc;
}

// Uniform scale + translation that centers the ink on a square canvas with a
// fixed margin, aspect ratio preserved.
struct FitTransform {
  double scale = 1.0;
  double dx = 0.0;
  double dy = 0.0;

  PointF apply(const PointF& p) const { return {p.x * scale + dx, p.y * scale + dy}; }
};

inline FitTransform fit_to_canvas(const InkDocument& doc, int size, double margin_frac = 0.05) {
  double min_x = std::numeric_limits<double>::max(), min_y = min_x;
  double max_x = std::numeric_limits<double>::lowest(), max_y = max_x;
  for (const auto& stroke : doc.strokes)
    for (const PointF& p : stroke) {
      min_x = std::min(min_x, p.x);
      min_y = std::min(min_y, p.y);
      max_x = std::max(max_x, p.x);
      max_y = std::max(max_y, p.y);
    }
  FitTransform t;
  if (min_x > max_x) {  // no points at all
    t.dx = t.dy = size / 2.0;
    return t;
  }
  const double margin = margin_frac * size;
  const double avail = size - 2.0 * margin;
  const double span = std::max(max_x - min_x, max_y - min_y);
  t.scale = span > 0.0 ? avail / span : 1.0;
  t.dx = margin + (avail - (max_x - min_x) * t.scale) / 2.0 - min_x * t.scale;
  t.dy = margin + (avail - (max_y - min_y) * t.scale) / 2.0 - min_y * t.scale;
  return t;
}

namespace detail {

inline void stamp_disc(GrayImage& img, double cx, double cy, double radius) {
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - radius)));
  const int x1 = std::min(img.width() - 1, static_cast<int>(std::ceil(cx + radius)));
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - radius)));
  const int y1 = std::min(img.height() - 1, static_cast<int>(std::ceil(cy + radius)));
  const double r2 = radius * radius;
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - cx, dy = y - cy;
      if (dx * dx + dy * dy <= r2) img.at(x, y) = 0;
    }
}

inline void draw_thick_segment(GrayImage& img, const PointF& a, const PointF& b, double radius) {
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  const int steps = std::max(1, static_cast<int>(std::ceil(len * 2.0)));
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    stamp_disc(img, a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t, radius);
  }
}

}  // namespace detail

// Black-on-white raster of the document on a size x size canvas. Strokes
// become connected round-capped line segments of the given pen width;
// single-point strokes become discs.
inline GrayImage render(const InkDocument& doc, int size, double pen_width,
                        double margin_frac = 0.05) {
  if (size < 16) throw std::invalid_argument("render: canvas must be at least 16 px");
  if (!(pen_width > 0.0)) throw std::invalid_argument("render: pen width must be positive");

  GrayImage img(size, size, 255);
  const FitTransform t = fit_to_canvas(doc, size, margin_frac);
  const double radius = pen_width / 2.0;
  for (const auto& stroke : doc.strokes) {
    if (stroke.empty()) continue;
    if (stroke.size() == 1) {
      const PointF p = t.apply(stroke[0]);
      detail::stamp_disc(img, p.x, p.y, radius);
      continue;
    }
    for (size_t i = 0; i + 1 < stroke.size(); ++i)
      detail::draw_thick_segment(img, t.apply(stroke[i]), t.apply(stroke[i + 1]), radius);
  }
  return img;
}

struct MatchReport {
  int n_truth = 0;
  int n_extracted = 0;
  struct Pair {
    int truth = -1;
    int extracted = -1;
    double distance = 0.0;
  };
  std::vector<Pair> matched_pairs;
  double mean_match_distance = 0.0;
  int unmatched_truth = 0;
  int unmatched_extracted = 0;

  double recall() const { return n_truth == 0 ? 1.0 : static_cast<double>(matched_pairs.size()) / n_truth; }
  double precision() const {
    return n_extracted == 0 ? 1.0 : static_cast<double>(matched_pairs.size()) / n_extracted;
  }
};

namespace detail {

// Polyline resampled to at most unit spacing, so point-set distances track
// the curves rather than the vertex placement.
inline std::vector<PointF> resample(const std::vector<PointF>& stroke, double spacing = 1.0) {
  std::vector<PointF> out;
  if (stroke.empty()) return out;
  out.push_back(stroke[0]);
  for (size_t i = 0; i + 1 < stroke.size(); ++i) {
    const PointF& a = stroke[i];
    const PointF& b = stroke[i + 1];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const int steps = std::max(1, static_cast<int>(std::ceil(len / spacing)));
    for (int k = 1; k <= steps; ++k) {
      const double t = static_cast<double>(k) / steps;
      out.push_back({a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t});
    }
  }
  return out;
}

class PointGrid {
 public:
  PointGrid(const std::vector<PointF>& points, double cell) : cell_(std::max(cell, 1.0)) {
    for (const PointF& p : points) cells_[key(p.x, p.y)].push_back(p);
  }

  // Exact nearest distance when it is <= cell size; infinity otherwise.
  double nearest_within_cell(const PointF& p) const {
    const long long cx = coord(p.x), cy = coord(p.y);
    double best = std::numeric_limits<double>::infinity();
    for (long long dy = -1; dy <= 1; ++dy)
      for (long long dx = -1; dx <= 1; ++dx) {
        const auto it = cells_.find(pack(cx + dx, cy + dy));
        if (it == cells_.end()) continue;
        for (const PointF& q : it->second)
          best = std::min(best, std::hypot(p.x - q.x, p.y - q.y));
      }
    return best <= cell_ ? best : std::numeric_limits<double>::infinity();
  }

 private:
  long long coord(double v) const { return static_cast<long long>(std::floor(v / cell_)); }
  static long long pack(long long x, long long y) { return (x << 28) ^ (y & ((1LL << 28) - 1)); }
  long long key(double x, double y) const { return pack(coord(x), coord(y)); }

  double cell_;
  std::unordered_map<long long, std::vector<PointF>> cells_;
};

// Symmetric Hausdorff distance between resampled polylines, exact up to
// `threshold`; infinity past it.
inline double hausdorff_within(const std::vector<PointF>& a, const std::vector<PointF>& b,
                               double threshold) {
  const PointGrid grid_b(b, threshold);
  const PointGrid grid_a(a, threshold);
  double h = 0.0;
  for (const PointF& p : a) {
    const double d = grid_b.nearest_within_cell(p);
    if (d > threshold) return std::numeric_limits<double>::infinity();
    h = std::max(h, d);
  }
  for (const PointF& p : b) {
    const double d = grid_a.nearest_within_cell(p);
    if (d > threshold) return std::numeric_limits<double>::infinity();
    h = std::max(h, d);
  }
  return h;
}

inline BBox bbox_of(const std::vector<PointF>& pts) {
  BBox b;
  for (const PointF& p : pts) b.expand({round_half_down(p.x), round_half_down(p.y)});
  return b;
}

}  // namespace detail

// Greedy one-to-one matching of extracted strokes to ground truth by
// symmetric Hausdorff distance; pairs beyond `threshold` never match.
inline MatchReport match_strokes(const InkDocument& truth, const InkDocument& extracted,
                                 double threshold) {
  MatchReport report;
  report.n_truth = static_cast<int>(truth.strokes.size());
  report.n_extracted = static_cast<int>(extracted.strokes.size());

  std::vector<std::vector<PointF>> rt, re;
  std::vector<BBox> bt, be;
  for (const auto& s : truth.strokes) {
    rt.push_back(detail::resample(s));
    bt.push_back(detail::bbox_of(s));
  }
  for (const auto& s : extracted.strokes) {
    re.push_back(detail::resample(s));
    be.push_back(detail::bbox_of(s));
  }

  struct Candidate {
    double distance;
    int truth, extracted;
    bool operator<(const Candidate& o) const {
      return std::tie(distance, truth, extracted) < std::tie(o.distance, o.truth, o.extracted);
    }
  };
  std::vector<Candidate> candidates;
  for (int ti = 0; ti < report.n_truth; ++ti) {
    for (int ei = 0; ei < report.n_extracted; ++ei) {
      // Boxes farther apart than the threshold cannot match.
      const BBox& a = bt[ti];
      const BBox& b = be[ei];
      if (a.min_x - b.max_x > threshold || b.min_x - a.max_x > threshold ||
          a.min_y - b.max_y > threshold || b.min_y - a.max_y > threshold)
        continue;
      const double d = detail::hausdorff_within(rt[ti], re[ei], threshold);
      if (d <= threshold) candidates.push_back({d, ti, ei});
    }
  }
  std::sort(candidates.begin(), candidates.end());

  std::vector<char> truth_used(report.n_truth, 0), extracted_used(report.n_extracted, 0);
  double total = 0.0;
  for (const Candidate& c : candidates) {
    if (truth_used[c.truth] || extracted_used[c.extracted]) continue;
    truth_used[c.truth] = extracted_used[c.extracted] = 1;
    report.matched_pairs.push_back({c.truth, c.extracted, c.distance});
    total += c.distance;
  }
  if (!report.matched_pairs.empty())
    report.mean_match_distance = total / static_cast<double>(report.matched_pairs.size());
  report.unmatched_truth = report.n_truth - static_cast<int>(report.matched_pairs.size());
  report.unmatched_extracted = report.n_extracted - static_cast<int>(report.matched_pairs.size());
  return report;
}

}  // namespace strokex
