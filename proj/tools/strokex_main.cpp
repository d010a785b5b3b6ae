#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "strokex/ink_io.hpp"
#include "strokex/pipeline.hpp"
#include "strokex/png_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitInternal = 3;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw strokex::IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw strokex::IoError("cannot write '" + path.string() + "'");
  out << text;
}

struct ConfigCli {
  std::string config_path;
  strokex::PipelineConfig config;

  void attach(CLI::App* app) {
    const char* env = std::getenv("STROKEX_CONFIG");
    if (env && *env) config_path = env;
    app->add_option("--config", config_path, "pipeline config JSON (env: STROKEX_CONFIG)");
    app->add_option("--window", config.binarization.window,
                    "binarization window (odd, >=3; 0 scales with image)");
    app->add_option("--k", config.binarization.k, "binarization sensitivity");
    app->add_option("--dynamic-range", config.binarization.dynamic_range,
                    "binarization dynamic range R");
    app->add_flag("--invert", config.invert_input, "treat bright pixels as ink");
    app->add_option("--thinning", thinning_name, "thinning variant: modified | zhang-suen");
    app->add_option("--short-edge-multiplier", config.simplify.short_edge_multiplier,
                    "edge removal threshold, in average stroke widths");
    app->add_option("--dot-width-multiplier", config.simplify.dot_width_multiplier,
                    "isolated vertex removal threshold, in average stroke widths");
    app->add_option("--direction-window", config.trace.direction_window,
                    "pixels used to estimate end directions");
    app->add_option("--double-trace-angle-margin", config.trace.double_trace_angle_margin,
                    "radians around pi/2 that block a double-trace join");
    app->add_flag("--eulerian", config.trace.eulerian_mode,
                  "absorb circuits to minimize stroke count");
    app->add_option("--gap-multiplier", config.order.gap_multiplier,
                    "projection-gap threshold, in average stroke widths");
    app->add_option("--size", config.render_size, "render canvas size in pixels");
    app->add_option("--pen-width", config.pen_width, "render pen width in pixels");
    app->add_option("--margin", config.margin_frac, "render margin fraction per side");
    app->add_option("--threshold", config.match_threshold, "match distance threshold in pixels");
  }

  // Config file first, explicit flags on top.
  void resolve(CLI::App* app) {
    if (config_path.empty()) return;
    strokex::PipelineConfig from_file = strokex::config_from_json(json::parse(read_file(config_path)));
    auto keep = [&](const std::string& flag) { return app->count(flag) > 0; };
    strokex::PipelineConfig merged = from_file;
    if (keep("--window")) merged.binarization.window = config.binarization.window;
    if (keep("--k")) merged.binarization.k = config.binarization.k;
    if (keep("--dynamic-range")) merged.binarization.dynamic_range = config.binarization.dynamic_range;
    if (keep("--invert")) merged.invert_input = config.invert_input;
    if (keep("--short-edge-multiplier"))
      merged.simplify.short_edge_multiplier = config.simplify.short_edge_multiplier;
    if (keep("--dot-width-multiplier"))
      merged.simplify.dot_width_multiplier = config.simplify.dot_width_multiplier;
    if (keep("--direction-window")) merged.trace.direction_window = config.trace.direction_window;
    if (keep("--double-trace-angle-margin"))
      merged.trace.double_trace_angle_margin = config.trace.double_trace_angle_margin;
    if (keep("--eulerian")) merged.trace.eulerian_mode = config.trace.eulerian_mode;
    if (keep("--gap-multiplier")) merged.order.gap_multiplier = config.order.gap_multiplier;
    if (keep("--size")) merged.render_size = config.render_size;
    if (keep("--pen-width")) merged.pen_width = config.pen_width;
    if (keep("--margin")) merged.margin_frac = config.margin_frac;
    if (keep("--threshold")) merged.match_threshold = config.match_threshold;
    if (keep("--thinning")) merged.thinning = config.thinning;
    config = merged;
  }

  void finish(CLI::App* app) {
    if (app->count("--thinning")) {
      if (thinning_name == "modified")
        config.thinning = strokex::ThinningVariant::kModified;
      else if (thinning_name == "zhang-suen")
        config.thinning = strokex::ThinningVariant::kZhangSuen;
      else
        throw CLI::ValidationError("--thinning", "expected 'modified' or 'zhang-suen'");
    }
    resolve(app);
  }

 private:
  std::string thinning_name = "modified";
};

void write_debug_artifacts(const fs::path& dir, const strokex::DebugArtifacts& debug) {
  fs::create_directories(dir);
  auto to_gray = [](const strokex::BinaryImage& b) {
    strokex::GrayImage g(b.width(), b.height(), 255);
    for (int y = 0; y < b.height(); ++y)
      for (int x = 0; x < b.width(); ++x)
        if (b.at(x, y)) g.at(x, y) = 0;
    return g;
  };
  strokex::write_png((dir / "binary.png").string(), to_gray(debug.binary));
  strokex::write_png((dir / "skeleton.png").string(), to_gray(debug.skeleton));

  int max_w = 1;
  for (auto v : debug.swt.pixels()) max_w = std::max(max_w, v);
  strokex::GrayImage heat(debug.swt.width(), debug.swt.height(), 255);
  for (int y = 0; y < heat.height(); ++y)
    for (int x = 0; x < heat.width(); ++x)
      if (debug.swt.at(x, y) > 0)
        heat.at(x, y) = static_cast<std::uint8_t>(200 - 200 * debug.swt.at(x, y) / max_w);
  strokex::write_png((dir / "swt.png").string(), heat);

  write_file(dir / "graph.json", debug.graph.dump(2) + "\n");
  write_file(dir / "graph_simplified.json", debug.simplified_graph.dump(2) + "\n");
  write_file(dir / "group_tree.json", debug.group_tree.dump(2) + "\n");

  strokex::write_png((dir / "graph_overlay.png").string(),
                     strokex::graph_overlay(debug.raw_graph, debug.binary.width(),
                                            debug.binary.height()));

  std::string log;
  for (const auto& e : debug.merge_log) {
    json line = {{"vertex", e.vertex}, {"segment_a", e.segment_a}, {"segment_b", e.segment_b},
                 {"cost", e.cost}};
    log += line.dump() + "\n";
  }
  write_file(dir / "merge_log.jsonl", log);
}

int extract_one(const fs::path& input, const fs::path& output, const strokex::PipelineConfig& config,
                const fs::path& debug_dir) {
  const strokex::ColorImage raster = strokex::read_png(input.string());
  strokex::DebugArtifacts debug;
  const auto result =
      strokex::extract_strokes(raster, config, debug_dir.empty() ? nullptr : &debug);
  if (result.strokes.empty())
    std::cerr << "warning: no ink found in '" << input.string() << "'\n";
  if (!debug_dir.empty()) write_debug_artifacts(debug_dir, debug);
  write_file(output, strokex::serialize_strokes(result.to_ink(), strokex::InkFormat::kJson));
  return kExitOk;
}

std::vector<fs::path> list_inputs(const fs::path& dir, const std::string& extension) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == extension)
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

// Runs `work(i)` over [0, n) on `jobs` threads; failures are collected, not
// fatal.
int run_batch(size_t n, int jobs, const std::function<std::string(size_t)>& work) {
  std::atomic<size_t> next{0};
  std::mutex mu;
  std::vector<std::string> failures;
  auto worker = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= n) break;
      std::string err = work(i);
      if (!err.empty()) {
        std::lock_guard<std::mutex> lock(mu);
        failures.push_back(std::move(err));
      }
    }
  };
  jobs = std::max(1, jobs);
  std::vector<std::thread> threads;
  for (int t = 1; t < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (!failures.empty()) {
    std::cerr << failures.size() << " of " << n << " files failed:\n";
    for (const auto& f : failures) std::cerr << "  " << f << "\n";
    return kExitIo;
  }
  return kExitOk;
}

int cmd_extract(const std::string& input, const std::string& output, const std::string& debug_dir,
                const strokex::PipelineConfig& config, int jobs) {
  if (fs::is_directory(input)) {
    const auto files = list_inputs(input, ".png");
    fs::create_directories(output);
    return run_batch(files.size(), jobs, [&](size_t i) -> std::string {
      const fs::path out = fs::path(output) / (files[i].stem().string() + ".json");
      const fs::path dbg =
          debug_dir.empty() ? fs::path() : fs::path(debug_dir) / files[i].stem();
      try {
        extract_one(files[i], out, config, dbg);
        return "";
      } catch (const std::exception& e) {
        return files[i].string() + ": " + e.what();
      }
    });
  }
  return extract_one(input, output, config, debug_dir.empty() ? fs::path() : fs::path(debug_dir));
}

int cmd_render(const std::string& input, const std::string& output,
               const strokex::PipelineConfig& config, int jobs) {
  auto render_one = [&](const fs::path& in, const fs::path& out) {
    const strokex::InkDocument doc = strokex::parse_ink(read_file(in));
    const strokex::GrayImage img =
        strokex::render(doc, config.render_size, config.pen_width, config.margin_frac);
    strokex::write_png(out.string(), img);
  };
  if (fs::is_directory(input)) {
    const auto files = list_inputs(input, ".inkml");
    fs::create_directories(output);
    return run_batch(files.size(), jobs, [&](size_t i) -> std::string {
      try {
        render_one(files[i], fs::path(output) / (files[i].stem().string() + ".png"));
        return "";
      } catch (const std::exception& e) {
        return files[i].string() + ": " + e.what();
      }
    });
  }
  render_one(input, output);
  return kExitOk;
}

int cmd_evaluate(const std::string& truth_dir, const std::string& extracted_dir, double threshold,
                 double margin_frac, const std::string& report_path) {
  json files = json::array();
  std::vector<std::string> unpaired;
  double recall_sum = 0, precision_sum = 0, distance_sum = 0;
  int n_files = 0, n_with_matches = 0, count_agree = 0;
  long long total_matched = 0, total_truth = 0, total_extracted = 0;

  auto truth_files = list_inputs(truth_dir, ".inkml");
  for (const auto& tf : truth_files) {
    const fs::path ef = fs::path(extracted_dir) / (tf.stem().string() + ".json");
    if (!fs::exists(ef)) {
      unpaired.push_back(tf.stem().string());
      continue;
    }
    const strokex::InkDocument truth = strokex::parse_ink(read_file(tf));
    const strokex::InkDocument extracted = strokex::parse_stroke_json(read_file(ef));

    // Truth ink is mapped with the same fit the renderer used.
    const int size = extracted.width > 0 ? extracted.width : 1000;
    const auto fit = strokex::fit_to_canvas(truth, size, margin_frac);
    strokex::InkDocument truth_px = truth;
    for (auto& stroke : truth_px.strokes)
      for (auto& p : stroke) p = fit.apply(p);

    const auto report = strokex::match_strokes(truth_px, extracted, threshold);
    recall_sum += report.recall();
    precision_sum += report.precision();
    if (!report.matched_pairs.empty()) {
      distance_sum += report.mean_match_distance;
      ++n_with_matches;
    }
    count_agree += report.n_truth == report.n_extracted;
    total_matched += static_cast<long long>(report.matched_pairs.size());
    total_truth += report.n_truth;
    total_extracted += report.n_extracted;
    ++n_files;

    files.push_back({{"file", tf.stem().string()},
                     {"n_truth", report.n_truth},
                     {"n_extracted", report.n_extracted},
                     {"matched", report.matched_pairs.size()},
                     {"recall", report.recall()},
                     {"precision", report.precision()},
                     {"mean_distance", report.mean_match_distance},
                     {"stroke_count_match", report.n_truth == report.n_extracted}});
  }
  for (const auto& entry : list_inputs(extracted_dir, ".json")) {
    const fs::path tf = fs::path(truth_dir) / (entry.stem().string() + ".inkml");
    if (!fs::exists(tf)) unpaired.push_back(entry.stem().string());
  }

  json aggregate = {
      {"n_files", n_files},
      {"recall", n_files ? recall_sum / n_files : 0.0},
      {"precision", n_files ? precision_sum / n_files : 0.0},
      {"mean_distance", n_with_matches ? distance_sum / n_with_matches : 0.0},
      {"exact_count_rate", n_files ? static_cast<double>(count_agree) / n_files : 0.0},
      {"total_matched", total_matched},
      {"total_truth", total_truth},
      {"total_extracted", total_extracted},
      {"unpaired", unpaired},
  };
  json full = {{"files", files}, {"aggregate", aggregate}};
  if (!report_path.empty()) write_file(report_path, full.dump(2) + "\n");

  std::printf("%-24s %7s %7s %7s %9s %9s %9s\n", "file", "truth", "extr", "match", "recall",
              "precis", "dist");
  for (const auto& f : files)
    std::printf("%-24s %7d %7d %7d %9.3f %9.3f %9.2f\n", f["file"].get<std::string>().c_str(),
                f["n_truth"].get<int>(), f["n_extracted"].get<int>(), f["matched"].get<int>(),
                f["recall"].get<double>(), f["precision"].get<double>(),
                f["mean_distance"].get<double>());
  std::printf("aggregate over %d files: recall %.3f precision %.3f mean distance %.2f "
              "exact stroke-count %.3f\n",
              n_files, aggregate["recall"].get<double>(), aggregate["precision"].get<double>(),
              aggregate["mean_distance"].get<double>(),
              aggregate["exact_count_rate"].get<double>());
  if (!unpaired.empty()) {
    std::printf("unpaired files:");
    for (const auto& u : unpaired) std::printf(" %s", u.c_str());
    std::printf("\n");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stroke extraction for handwritten expression images"};
  app.require_subcommand(1);

  std::string input, output, debug_dir, truth_dir, extracted_dir, report_path;
  int jobs = 1;

  ConfigCli extract_cfg, render_cfg;

  CLI::App* extract = app.add_subcommand("extract", "recover ordered strokes from a PNG");
  extract->add_option("--input,-i", input, "input PNG file or directory")->required();
  extract->add_option("--output,-o", output, "output stroke JSON file or directory")->required();
  extract->add_option("--debug-dir", debug_dir, "write per-stage artifacts here");
  extract->add_option("--jobs,-j", jobs, "parallel files in batch mode");
  extract_cfg.attach(extract);

  CLI::App* render = app.add_subcommand("render", "render InkML ink to a PNG");
  render->add_option("--input,-i", input, "input InkML file or directory")->required();
  render->add_option("--output,-o", output, "output PNG file or directory")->required();
  render->add_option("--jobs,-j", jobs, "parallel files in batch mode");
  render_cfg.attach(render);

  double threshold = 10.0, eval_margin = 0.05;
  CLI::App* evaluate = app.add_subcommand("evaluate", "score extracted strokes against truth ink");
  evaluate->add_option("--truth", truth_dir, "directory of InkML ground truth")->required();
  evaluate->add_option("--extracted", extracted_dir, "directory of extracted stroke JSON")
      ->required();
  evaluate->add_option("--threshold", threshold, "match distance threshold in pixels");
  evaluate->add_option("--margin", eval_margin, "render margin fraction used for truth mapping");
  evaluate->add_option("--report", report_path, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (extract->parsed()) {
      extract_cfg.finish(extract);
      return cmd_extract(input, output, debug_dir, extract_cfg.config, jobs);
    }
    if (render->parsed()) {
      render_cfg.finish(render);
      return cmd_render(input, output, render_cfg.config, jobs);
    }
    if (evaluate->parsed())
      return cmd_evaluate(truth_dir, extracted_dir, threshold, eval_margin, report_path);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const strokex::InternalConsistencyError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
