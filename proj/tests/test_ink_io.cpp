#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "strokex/ink_io.hpp"
#include "support/synthetic_ink.hpp"

using namespace strokex;

namespace {

InkDocument random_int_document(std::mt19937& rng, int max_strokes = 8) {
  std::uniform_int_distribution<int> count(1, max_strokes);
  std::uniform_int_distribution<int> len(1, 12);
  std::uniform_int_distribution<int> coord(0, 999);
  InkDocument doc;
  doc.width = doc.height = 1000;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    std::vector<PointF> stroke;
    const int m = len(rng);
    for (int k = 0; k < m; ++k)
      stroke.push_back({static_cast<double>(coord(rng)), static_cast<double>(coord(rng))});
    doc.strokes.push_back(std::move(stroke));
  }
  return doc;
}

}  // namespace

TEST_CASE("parse_ink reads a single trace") {
  const auto doc = parse_ink("<ink><trace>0 0, 10 0</trace></ink>");
  REQUIRE(doc.strokes.size() == 1);
  REQUIRE(doc.strokes[0].size() == 2);
  CHECK(doc.strokes[0][0] == PointF{0, 0});
  CHECK(doc.strokes[0][1] == PointF{10, 0});
}

TEST_CASE("parse_ink rejects a document without traces") {
  CHECK_THROWS_AS(parse_ink("<ink><annotation>x</annotation></ink>"), ParseError);
}

TEST_CASE("parse_ink reads a CROHME-style file") {
  const std::string text = R"(<ink xmlns="http://www.w3.org/2003/InkML">
  <annotation type="UI">2013_IVC_CROHME_F001</annotation>
  <traceFormat>
    <channel name="X" type="decimal"/>
    <channel name="Y" type="decimal"/>
  </traceFormat>
  <trace id="1">985 3317, 985 3316, 987 3312, 990 3307</trace>
  <trace id="2">1127.5 3241.25, 1125 3243</trace>
  <trace id="3">1241 3260, 1243 3260, 1249 3261, 1254 3262, 1260 3264</trace>
  <traceGroup xml:id="A"><annotationXML href="x"/></traceGroup>
</ink>)";
  const auto doc = parse_ink(text);
  REQUIRE(doc.strokes.size() == 3);
  CHECK(doc.strokes[0].size() == 4);
  CHECK(doc.strokes[1].size() == 2);
  CHECK(doc.strokes[2].size() == 5);
  CHECK(doc.strokes[1][0].x == Catch::Approx(1127.5));
}

TEST_CASE("parse_ink names the offending trace") {
  try {
    parse_ink("<ink><trace>1 2</trace><trace>3 oops</trace></ink>");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("trace 1") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_ink("<ink><trace>  </trace></ink>"), ParseError);
  CHECK_THROWS_AS(parse_ink("<ink><trace>5</trace></ink>"), ParseError);
}

TEST_CASE("serialize_strokes emits the JSON schema") {
  InkDocument doc;
  doc.width = 640;
  doc.height = 480;
  const auto parsed = nlohmann::json::parse(serialize_strokes(doc, InkFormat::kJson));
  CHECK(parsed["width"] == 640);
  CHECK(parsed["height"] == 480);
  CHECK(parsed["strokes"].is_array());
  CHECK(parsed["strokes"].empty());

  doc.strokes = {{{0, 0}, {1, 2}}};
  const auto with_stroke = nlohmann::json::parse(serialize_strokes(doc, InkFormat::kJson));
  CHECK(with_stroke["strokes"] == nlohmann::json::parse("[[[0,0],[1,2]]]"));
}

TEST_CASE("inkml serialization round-trips integer strokes") {
  InkDocument doc;
  doc.width = doc.height = 100;
  doc.strokes = {{{0, 0}, {10, 0}, {10, 10}}, {{5, 5}}, {{99, 1}, {1, 99}}};
  const auto back = parse_ink(serialize_strokes(doc, InkFormat::kInkml));
  REQUIRE(back.strokes == doc.strokes);
}

TEST_CASE("serialize/parse identity on random integer documents") {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 25; ++trial) {
    const InkDocument doc = random_int_document(rng);
    const auto via_inkml = parse_ink(serialize_strokes(doc, InkFormat::kInkml));
    REQUIRE(via_inkml.strokes == doc.strokes);
    const auto via_json = parse_stroke_json(serialize_strokes(doc, InkFormat::kJson));
    REQUIRE(via_json.strokes == doc.strokes);
    REQUIRE(via_json.width == doc.width);
    REQUIRE(via_json.height == doc.height);
  }
}

TEST_CASE("render centers a bar with the configured margin") {
  InkDocument doc;
  doc.strokes = {{{0, 0}, {100, 0}}};
  const int size = 200;
  const GrayImage img = render(doc, size, 3.0, 0.05);
  int min_x = size, max_x = -1, min_y = size, max_y = -1;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      if (img.at(x, y) == 0) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
      }
  // Usable span is 200 * 0.9 = 180 starting at 10, pen radius 1.5 on top.
  CHECK(min_x >= 7);
  CHECK(min_x <= 12);
  CHECK(max_x >= 188);
  CHECK(max_x <= 193);
  CHECK((min_y + max_y) / 2 == Catch::Approx(99.5).margin(2.0));
}

TEST_CASE("render rejects tiny canvases and accepts degenerate ink") {
  InkDocument doc;
  doc.strokes = {{{5, 5}, {5, 5}}};
  CHECK_THROWS_AS(render(doc, 8, 3.0), std::invalid_argument);
  const GrayImage img = render(doc, 64, 3.0);
  size_t ink = 0;
  for (auto v : img.pixels()) ink += v == 0;
  CHECK(ink > 0);
  CHECK(ink < 40);
  CHECK(img.at(32, 32) == 0);  // disc lands at the center
}

TEST_CASE("render is invariant under uniform input scaling") {
  InkDocument doc;
  doc.strokes = {{{0, 0}, {50, 20}, {70, 60}}, {{10, 50}, {40, 55}}};
  InkDocument scaled = doc;
  for (auto& s : scaled.strokes)
    for (auto& p : s) p = {p.x * 3.0, p.y * 3.0};
  CHECK(render(doc, 128, 3.0) == render(scaled, 128, 3.0));
}

TEST_CASE("match_strokes on identical documents") {
  InkDocument doc;
  doc.strokes = {{{0, 0}, {50, 0}}, {{10, 20}, {10, 80}}};
  const auto report = match_strokes(doc, doc, 5.0);
  CHECK(report.matched_pairs.size() == 2);
  CHECK(report.mean_match_distance == 0.0);
  CHECK(report.recall() == 1.0);
  CHECK(report.precision() == 1.0);
}

TEST_CASE("match_strokes with nothing extracted") {
  InkDocument truth;
  truth.strokes = {{{0, 0}, {50, 0}}, {{10, 20}, {10, 80}}};
  const auto report = match_strokes(truth, InkDocument{}, 5.0);
  CHECK(report.matched_pairs.empty());
  CHECK(report.unmatched_truth == 2);
  CHECK(report.recall() == 0.0);
}

TEST_CASE("match_strokes sees a 2 px shift as distance 2") {
  InkDocument truth, extracted;
  truth.strokes = {{{10, 10}, {90, 10}}};
  extracted.strokes = {{{10, 12}, {90, 12}}};
  const auto report = match_strokes(truth, extracted, 5.0);
  REQUIRE(report.matched_pairs.size() == 1);
  CHECK(report.matched_pairs[0].distance == Catch::Approx(2.0));
}

TEST_CASE("match count is symmetric for generic documents") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 15; ++trial) {
    const InkDocument a = random_int_document(rng, 5);
    const InkDocument b = random_int_document(rng, 5);
    const auto ab = match_strokes(a, b, 25.0);
    const auto ba = match_strokes(b, a, 25.0);
    REQUIRE(ab.matched_pairs.size() == ba.matched_pairs.size());
  }
}

TEST_CASE("synthetic documents honor the stroke budget") {
  for (unsigned seed = 1; seed <= 30; ++seed) {
    const InkDocument doc = strokex::testing::synthetic_document(seed);
    REQUIRE(doc.strokes.size() >= 2);
    REQUIRE(doc.strokes.size() <= 12);
    for (const auto& s : doc.strokes) REQUIRE_FALSE(s.empty());
  }
}
