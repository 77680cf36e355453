// Copyright 2026 The radar-anomaly Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line entry point: generate, train, eval, bench and render.
// Exit codes: 0 ok, 1 usage, 2 validation, 3 runtime.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "radar_anomaly/dataset_io.hpp"
#include "radar_anomaly/errors.hpp"
#include "radar_anomaly/models/config.hpp"
#include "radar_anomaly/pipeline.hpp"
#include "radar_anomaly/render.hpp"
#include "radar_anomaly/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

/// Environment failures (unwritable output, unreadable file) as opposed to bad input.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string dataset;
  std::vector<std::string> checkpoints;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string variant;
  std::optional<std::int64_t> frame;
  std::string report;
};

// One experiment file drives every subcommand; each reads its own sections.
struct ExperimentConfig {
  radar::synthgen::SceneConfig scene;
  std::string preset = "default";
  json model = json::object();
  json train = json::object();
  std::size_t bench_frames = 100;
  std::size_t bench_repetitions = 10;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeFailure("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw RuntimeFailure("cannot write " + path.string());
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw radar::ValidationError(std::string(what) + " path is empty");
  if (!fs::is_regular_file(path)) {
    throw radar::ValidationError(std::string(what) + " not found: " + path);
  }
}

fs::path prepare_out(const std::string& out) {
  const fs::path dir(out);
  if (fs::exists(dir) && !fs::is_directory(dir)) {
    throw radar::ValidationError("--out must be a directory: " + out);
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw RuntimeFailure("cannot create " + out + ": " + ec.message());
  return dir;
}

std::size_t read_count(const json& object, const char* key, std::size_t fallback) {
  if (!object.contains(key)) return fallback;
  const json& v = object.at(key);
  if (!v.is_number_unsigned()) {
    throw radar::ValidationError(std::string("bench.") + key + ": expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

radar::pipeline::TrainConfig train_base(const ExperimentConfig& config) {
  return config.preset == "desk" ? radar::pipeline::TrainConfig::desk()
                                 : radar::pipeline::TrainConfig{};
}

radar::pipeline::TrainConfig resolve_train(const ExperimentConfig& config) {
  return radar::pipeline::train_config_from_json(config.train, train_base(config));
}

ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig config;
  if (path.empty()) return config;
  require_file(path, "config");
  const json root = json::parse(read_text(path));
  if (!root.is_object()) throw radar::ValidationError("config: expected a JSON object");
  for (const auto& [key, value] : root.items()) {
    if (key == "scene") {
      config.scene = radar::synthgen::scene_config_from_json(value);
    } else if (key == "preset") {
      if (!value.is_string() || (value != "default" && value != "desk")) {
        throw radar::ValidationError("config.preset: expected \"default\" or \"desk\"");
      }
      config.preset = value.get<std::string>();
    } else if (key == "model") {
      if (!value.is_object()) throw radar::ValidationError("config.model: expected an object");
      config.model = value;
    } else if (key == "train") {
      if (!value.is_object()) throw radar::ValidationError("config.train: expected an object");
      config.train = value;
    } else if (key == "bench") {
      if (!value.is_object()) throw radar::ValidationError("config.bench: expected an object");
      for (const auto& [k, v] : value.items()) {
        if (k != "frames" && k != "repetitions") {
          throw radar::ValidationError("config.bench: unknown key '" + k + "'");
        }
      }
      config.bench_frames = read_count(value, "frames", config.bench_frames);
      config.bench_repetitions = read_count(value, "repetitions", config.bench_repetitions);
    } else {
      throw radar::ValidationError("config: unknown section '" + key + "'");
    }
  }
  // Validates the section early even for subcommands that only read the split.
  resolve_train(config);
  return config;
}

std::vector<radar::RadarFrame> load_dataset(const std::string& path) {
  require_file(path, "dataset");
  auto frames = radar::read_dataset(fs::path(path));
  if (frames.empty()) throw radar::ValidationError("dataset has no frames: " + path);
  return frames;
}

radar::pipeline::ModelCheckpoint load_checkpoint_dir(const std::string& path) {
  if (!fs::is_directory(path)) throw radar::ValidationError("checkpoint directory not found: " + path);
  require_file((fs::path(path) / "model.json").string(), "checkpoint model.json");
  require_file((fs::path(path) / "params.ckpt").string(), "checkpoint params.ckpt");
  return radar::pipeline::load_checkpoint(path);
}

std::string checkpoint_name(const std::string& path) {
  const fs::path p = fs::path(path).lexically_normal();
  const std::string name = p.filename().string();
  return name.empty() ? p.parent_path().filename().string() : name;
}

int cmd_generate(const Options& opt) {
  ExperimentConfig config = load_config(opt.config);
  if (opt.seed) config.scene.seed = *opt.seed;
  config.scene.validate();
  const fs::path out = prepare_out(opt.out);

  const auto seq = radar::synthgen::generate_sequence(config.scene);
  radar::write_dataset(seq.frames, out / "dataset.csv");
  const auto stats = radar::synthgen::compute_stats(seq.frames);
  const nlohmann::ordered_json sidecar = {
      {"format", "radar-anomaly dataset-stats v1"},
      {"seed", config.scene.seed},
      {"frames", stats.frames},
      {"targets", stats.targets},
      {"anomalies", stats.anomalies},
      {"frames_with_anomaly", stats.frames_with_anomaly},
      {"intersection_frames", stats.intersection_frames},
      {"anomaly_fraction", stats.anomaly_fraction()},
      {"anomalous_frame_fraction", stats.anomalous_frame_fraction()},
      {"warnings", seq.warnings},
      {"scene", radar::synthgen::to_json(config.scene)},
  };
  write_text(out / "dataset.stats.json", sidecar.dump(2) + "\n");
  for (const std::string& w : seq.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "wrote " << stats.frames << " frames, " << stats.targets << " targets ("
            << stats.anomalies << " anomalous) to " << (out / "dataset.csv").string() << '\n';
  return kExitOk;
}

int cmd_train(const Options& opt) {
  ExperimentConfig config = load_config(opt.config);
  std::string variant_name = opt.variant;
  if (variant_name.empty() && config.model.contains("variant") && config.model["variant"].is_string()) {
    variant_name = config.model["variant"].get<std::string>();
  }
  if (variant_name.empty()) throw radar::ValidationError("train needs --variant or model.variant");
  const auto variant = radar::models::parse_variant(variant_name);
  if (!variant) throw radar::ValidationError("unknown variant '" + variant_name + "'");
  json model_json = config.model;
  model_json["variant"] = variant_name;
  const auto base = config.preset == "desk" ? radar::models::ModelConfig::desk(*variant)
                                            : radar::models::ModelConfig::defaults(*variant);
  radar::models::ModelConfig model_config = radar::models::model_config_from_json(model_json, base);
  radar::pipeline::TrainConfig train_config = resolve_train(config);
  if (opt.seed) {
    train_config.seed = *opt.seed;
    model_config.seed = *opt.seed;
  }
  model_config.validate();
  train_config.validate();
  const auto frames = load_dataset(opt.dataset);
  const auto split = radar::pipeline::split_dataset(frames, train_config.train_fraction);
  if (split.train.empty()) throw radar::ValidationError("dataset has no Center frames to train on");
  // Held-out Center frames report a per-epoch F1; they never steer training.
  std::vector<radar::RadarFrame> validation;
  for (const radar::RadarFrame& f : split.test) {
    if (f.sensor == radar::SensorId::Center) validation.push_back(f);
  }
  const fs::path out = prepare_out(opt.out);

  auto result = radar::pipeline::train(
      model_config, train_config, split.train, validation,
      [&](const radar::pipeline::EpochLog& e) {
        std::cout << "epoch " << e.epoch + 1 << '/' << train_config.epochs << " lr "
                  << radar::format_double(e.lr) << " loss " << e.loss << " held-out F1 "
                  << e.val_f1 << '\n'
                  << std::flush;
      });
  radar::pipeline::save_checkpoint(out, result.model, result.stats, train_config.seed);
  write_text(out / "training_log.csv", radar::pipeline::training_log_csv(result.log, train_config.seed));
  const nlohmann::ordered_json resolved = {{"seed", train_config.seed},
                         {"preset", config.preset},
                         {"model", radar::models::to_json(model_config)},
                         {"train", radar::pipeline::to_json(train_config)}};
  write_text(out / "train_config.json", resolved.dump(2) + "\n");
  std::cout << "trained " << variant_name << " on " << split.train.size() << " frames; checkpoint in "
            << out.string() << '\n';
  return kExitOk;
}

int cmd_eval(const Options& opt) {
  const ExperimentConfig config = load_config(opt.config);
  if (opt.checkpoints.size() != 1) throw radar::ValidationError("eval takes exactly one --checkpoint");
  const auto checkpoint = load_checkpoint_dir(opt.checkpoints.front());
  const auto frames = load_dataset(opt.dataset);
  const auto split = radar::pipeline::split_dataset(frames, resolve_train(config).train_fraction);
  if (split.test.empty()) throw radar::ValidationError("dataset has no held-out frames");
  const fs::path out = prepare_out(opt.out);

  auto report = radar::pipeline::evaluate(checkpoint.model, checkpoint.stats, split.test);
  report.seed = opt.seed.value_or(checkpoint.seed);
  write_text(out / "eval_report.csv", report.to_csv());
  write_text(out / "eval_report.txt", report.to_text());
  write_text(out / "predictions.csv", report.predictions_csv());
  std::cout << report.to_text();
  return kExitOk;
}

int cmd_bench(const Options& opt) {
  const ExperimentConfig config = load_config(opt.config);
  if (opt.checkpoints.empty()) throw radar::ValidationError("bench needs at least one --checkpoint");
  std::vector<radar::pipeline::ModelCheckpoint> checkpoints;
  for (const std::string& path : opt.checkpoints) checkpoints.push_back(load_checkpoint_dir(path));
  const auto frames = load_dataset(opt.dataset);
  const std::size_t n = std::min(config.bench_frames, frames.size());
  const std::span<const radar::RadarFrame> workload(frames.data(), n);
  const fs::path out = prepare_out(opt.out);

  std::vector<radar::pipeline::BenchResult> rows;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    rows.push_back(radar::pipeline::bench_inference(checkpoint_name(opt.checkpoints[i]),
                                                    checkpoints[i].model, checkpoints[i].stats,
                                                    workload, config.bench_repetitions));
    const auto& r = rows.back();
    std::cout << r.name << " (" << radar::models::to_string(r.variant) << "): " << r.mean_ms
              << " ms/frame, mean candidates " << r.grouping.mean_candidates() << '\n';
  }
  write_text(out / "bench.csv", radar::pipeline::bench_table_csv(rows, opt.seed.value_or(checkpoints.front().seed)));
  return kExitOk;
}

int cmd_render(const Options& opt) {
  if (!opt.frame) throw radar::ValidationError("render needs --frame");
  const auto frames = load_dataset(opt.dataset);
  const auto it = std::find_if(frames.begin(), frames.end(),
                               [&](const radar::RadarFrame& f) { return f.frame_id == *opt.frame; });
  if (it == frames.end()) {
    const auto [lo, hi] = std::minmax_element(
        frames.begin(), frames.end(),
        [](const radar::RadarFrame& a, const radar::RadarFrame& b) { return a.frame_id < b.frame_id; });
    throw radar::ValidationError("unknown frame id " + std::to_string(*opt.frame) +
                                 "; valid frame ids are " + std::to_string(lo->frame_id) + ".." +
                                 std::to_string(hi->frame_id) + " (" +
                                 std::to_string(frames.size()) + " frames)");
  }

  std::vector<radar::Label> predicted;
  if (!opt.report.empty()) {
    fs::path path(opt.report);
    if (fs::is_directory(path)) path /= "predictions.csv";
    require_file(path.string(), "report");
    std::istringstream in(read_text(path));
    const auto predictions = radar::pipeline::read_predictions(in);
    const auto p = std::find_if(predictions.begin(), predictions.end(),
                                [&](const auto& fp) { return fp.frame_id == *opt.frame; });
    if (p == predictions.end()) {
      throw radar::ValidationError("report has no predictions for frame " + std::to_string(*opt.frame));
    }
    std::vector<radar::Label> truth;
    for (const auto& t : it->targets) truth.push_back(t.label);
    if (p->truth != truth) {
      throw radar::ValidationError("report labels for frame " + std::to_string(*opt.frame) +
                                   " do not match the dataset");
    }
    predicted = p->predicted;
  }
  const fs::path out = prepare_out(opt.out);
  radar::render::SvgOptions svg;
  svg.seed = opt.seed.value_or(0);
  const fs::path file = out / ("frame_" + std::to_string(*opt.frame) + ".svg");
  write_text(file, radar::render::frame_svg(*it, predicted, svg));
  std::cout << "wrote " << file.string() << '\n';
  return kExitOk;
}

std::string one_line(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

int fail(int code, const std::string& message) {
  std::cerr << "radar-anomaly: error: " << one_line(message) << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anomaly segmentation of sparse 2D radar point clouds.", "radar-anomaly"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "radar-anomaly 0.1.0");
  Options opt;

  const auto add_seed = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("--seed", opt.seed, what)->type_name("U64");
  };

  CLI::App* generate = app.add_subcommand("generate", "Generate a synthetic radar dataset");
  generate->add_option("--config", opt.config, "Experiment JSON; the scene section is used")
      ->type_name("PATH");
  generate->add_option("--out", opt.out, "Output directory for dataset.csv and dataset.stats.json")
      ->type_name("DIR")
      ->required();
  add_seed(generate, "Scene seed, overrides scene.seed");

  CLI::App* train = app.add_subcommand("train", "Train a model on the Center training frames");
  train->add_option("--dataset", opt.dataset, "Dataset CSV")->type_name("PATH")->required();
  train->add_option("--config", opt.config, "Experiment JSON; preset, model and train sections")
      ->type_name("PATH");
  train->add_option("--variant", opt.variant, "Model variant, overrides model.variant")
      ->check(CLI::IsMember({"pointnet", "ssg", "msg", "mfg"}));
  train->add_option("--out", opt.out, "Checkpoint directory")->type_name("DIR")->required();
  add_seed(train, "Training and initialization seed, overrides train.seed");

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint on the held-out frames");
  eval->add_option("--dataset", opt.dataset, "Dataset CSV")->type_name("PATH")->required();
  eval->add_option("--checkpoint", opt.checkpoints, "Checkpoint directory")
      ->type_name("DIR")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::Throw)
      ->required();
  eval->add_option("--config", opt.config, "Experiment JSON; train.train_fraction sets the split")
      ->type_name("PATH");
  eval->add_option("--out", opt.out, "Output directory for the report and predictions")
      ->type_name("DIR")
      ->required();
  add_seed(eval, "Seed recorded in the report headers (default: the checkpoint's)");

  CLI::App* bench = app.add_subcommand("bench", "Time single-frame inference of checkpoints");
  bench->add_option("--dataset", opt.dataset, "Dataset CSV")->type_name("PATH")->required();
  bench->add_option("--checkpoint", opt.checkpoints, "Checkpoint directory, repeatable")
      ->type_name("DIR")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->required();
  bench->add_option("--config", opt.config, "Experiment JSON; bench.frames and bench.repetitions")
      ->type_name("PATH");
  bench->add_option("--out", opt.out, "Output directory for bench.csv")->type_name("DIR")->required();
  add_seed(bench, "Seed recorded in the table header (default: the first checkpoint's)");

  CLI::App* render = app.add_subcommand("render", "Render one frame as SVG");
  render->add_option("--dataset", opt.dataset, "Dataset CSV")->type_name("PATH")->required();
  render->add_option("--frame", opt.frame, "Frame id")->type_name("ID")->required();
  render->add_option("--report", opt.report,
                     "Eval output directory or predictions.csv; colors by prediction outcome")
      ->type_name("PATH");
  render->add_option("--out", opt.out, "Output directory for frame_<id>.svg")
      ->type_name("DIR")
      ->required();
  add_seed(render, "Seed recorded in the SVG header");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kExitUsage, e.what());
  }

  try {
    if (generate->parsed()) return cmd_generate(opt);
    if (train->parsed()) return cmd_train(opt);
    if (eval->parsed()) return cmd_eval(opt);
    if (bench->parsed()) return cmd_bench(opt);
    return cmd_render(opt);
  } catch (const RuntimeFailure& e) {
    return fail(kExitRuntime, e.what());
  } catch (const radar::Error& e) {
    return fail(kExitValidation, e.what());
  } catch (const json::exception& e) {
    return fail(kExitValidation, std::string("config: ") + e.what());
  } catch (const std::exception& e) {
    return fail(kExitRuntime, e.what());
  }
}
