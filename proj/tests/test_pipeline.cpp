#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "strokex/pipeline.hpp"
#include "support/synthetic_ink.hpp"

using namespace strokex;

namespace {

// Render an ink document and pull the strokes back out.
ExtractionResult round_trip(const InkDocument& doc, int size = 400) {
  PipelineConfig config;
  const GrayImage img = render(doc, size, config.pen_width, config.margin_frac);
  return extract_strokes(img, config);
}

}  // namespace

TEST_CASE("a blank page yields no strokes") {
  const auto result = extract_strokes(GrayImage(128, 128, 255), PipelineConfig{});
  CHECK(result.strokes.empty());
  CHECK(result.width == 128);
}

TEST_CASE("a rendered plus sign extracts as two strokes") {
  InkDocument doc;
  doc.strokes = {{{0, 50}, {100, 50}}, {{50, 0}, {50, 100}}};
  const auto result = round_trip(doc);
  REQUIRE(result.strokes.size() == 2);
}

TEST_CASE("a rendered T extracts as two strokes") {
  InkDocument doc;
  doc.strokes = {{{0, 0}, {100, 0}}, {{50, 0}, {50, 100}}};
  const auto result = round_trip(doc);
  REQUIRE(result.strokes.size() == 2);
}

TEST_CASE("a rendered retraced tail comes back as one stroke") {
  std::mt19937 rng(1);
  InkDocument doc;
  doc.strokes = testing::symbol_retrace(rng);
  const auto result = round_trip(doc);
  REQUIRE(result.strokes.size() == 1);
}

TEST_CASE("extraction matches its own ink on a synthetic document") {
  const InkDocument doc = testing::synthetic_document(12);
  PipelineConfig config;
  const GrayImage img = render(doc, 1000, config.pen_width, config.margin_frac);
  const auto result = extract_strokes(img, config);

  const auto fit = fit_to_canvas(doc, 1000, config.margin_frac);
  InkDocument truth_px = doc;
  for (auto& s : truth_px.strokes)
    for (auto& p : s) p = fit.apply(p);

  const auto report = match_strokes(truth_px, result.to_ink(), config.match_threshold);
  CHECK(report.recall() >= 0.8);
  CHECK(report.precision() >= 0.8);
}

TEST_CASE("extraction is deterministic") {
  const InkDocument doc = testing::synthetic_document(3);
  PipelineConfig config;
  const GrayImage img = render(doc, 500, config.pen_width, config.margin_frac);
  const auto a = extract_strokes(img, config);
  const auto b = extract_strokes(img, config);
  REQUIRE(a.strokes == b.strokes);
  CHECK(serialize_strokes(a.to_ink(), InkFormat::kJson) ==
        serialize_strokes(b.to_ink(), InkFormat::kJson));
}

TEST_CASE("config survives a JSON round trip") {
  PipelineConfig c;
  c.binarization.window = 31;
  c.binarization.k = 0.3;
  c.invert_input = true;
  c.thinning = ThinningVariant::kZhangSuen;
  c.simplify.short_edge_multiplier = 1.5;
  c.trace.eulerian_mode = true;
  c.order.gap_multiplier = 2.0;
  c.render_size = 512;
  c.match_threshold = 7.5;

  const PipelineConfig back = config_from_json(config_to_json(c));
  CHECK(back.binarization.window == c.binarization.window);
  CHECK(back.binarization.k == c.binarization.k);
  CHECK(back.invert_input == c.invert_input);
  CHECK(back.thinning == c.thinning);
  CHECK(back.simplify.short_edge_multiplier == c.simplify.short_edge_multiplier);
  CHECK(back.trace.eulerian_mode == c.trace.eulerian_mode);
  CHECK(back.order.gap_multiplier == c.order.gap_multiplier);
  CHECK(back.render_size == c.render_size);
  CHECK(back.match_threshold == c.match_threshold);
}

TEST_CASE("debug artifacts are collected on demand") {
  InkDocument doc;
  doc.strokes = {{{0, 50}, {100, 50}}, {{50, 0}, {50, 100}}};
  PipelineConfig config;
  const GrayImage img = render(doc, 300, config.pen_width, config.margin_frac);
  DebugArtifacts debug;
  extract_strokes(img, config, &debug);
  CHECK(count_foreground(debug.binary) > 0);
  CHECK(count_foreground(debug.skeleton) > 0);
  CHECK(count_foreground(debug.skeleton) <= count_foreground(debug.binary));
  CHECK(debug.graph.contains("vertices"));
  CHECK(debug.simplified_graph.contains("edges"));
  CHECK_FALSE(debug.merge_log.empty());
  CHECK(debug.group_tree.is_object());
}

TEST_CASE("inverted input is handled behind the flag") {
  InkDocument doc;
  doc.strokes = {{{0, 0}, {100, 100}}};
  PipelineConfig config;
  GrayImage img = render(doc, 200, config.pen_width, config.margin_frac);
  const auto normal = extract_strokes(img, config);
  config.invert_input = true;
  const auto flipped = extract_strokes(invert(img), config);
  REQUIRE(normal.strokes.size() == flipped.strokes.size());
}
