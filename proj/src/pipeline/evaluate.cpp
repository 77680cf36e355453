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

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "radar_anomaly/autodiff/checkpoint.hpp"
#include "radar_anomaly/dataset_io.hpp"
#include "radar_anomaly/errors.hpp"
#include "radar_anomaly/pipeline.hpp"

namespace radar::pipeline {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::vector<Label> predict_frame(const Model& model, const FeatureStats& stats,
                                 const RadarFrame& frame, models::GroupingStats* grouping) {
  return model.predict(make_model_input(frame.targets, stats), grouping).predicted;
}

const SplitReport& EvalReport::split(std::string_view name) const {
  for (const SplitReport& s : splits) {
    if (s.name == name) return s;
  }
  throw Error("no evaluation split named '" + std::string(name) + "'");
}

EvalReport evaluate(const Model& model, const FeatureStats& stats,
                    std::span<const RadarFrame> frames) {
  EvalReport report;
  for (const char* name : {"all", "center", "left", "right", "intersection", "no_intersection"}) {
    report.splits.push_back({name, 0, {}, {}});
  }
  auto bump = [&](std::size_t split, const Confusion& c) {
    report.splits[split].frames += 1;
    report.splits[split].confusion += c;
  };
  double total_ms = 0.0;
  for (const RadarFrame& frame : frames) {
    const auto start = Clock::now();
    std::vector<Label> predicted = predict_frame(model, stats, frame);
    total_ms += std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    FramePrediction fp{frame.frame_id, {}, std::move(predicted)};
    Confusion c;
    for (std::size_t i = 0; i < frame.targets.size(); ++i) {
      fp.truth.push_back(frame.targets[i].label);
      c.add(frame.targets[i].label, fp.predicted[i]);
    }
    bump(0, c);
    bump(1 + static_cast<std::size_t>(frame.sensor), c);
    bump(frame.scenario == Scenario::IntersectionLike ? 4 : 5, c);
    report.predictions.push_back(std::move(fp));
  }
  for (SplitReport& s : report.splits) s.metrics = compute_metrics(s.confusion);
  report.mean_inference_ms = frames.empty() ? 0.0 : total_ms / static_cast<double>(frames.size());
  return report;
}

std::string EvalReport::to_csv() const {
  std::ostringstream out;
  out << "# radar-anomaly eval-report v1 seed=" << seed << '\n';
  out << "split,frames,targets,tp,fp,fn,tn,precision,recall,f1\n";
  for (const SplitReport& s : splits) {
    const Confusion& c = s.confusion;
    out << s.name << ',' << s.frames << ',' << c.total() << ',' << c.tp << ',' << c.fp << ','
        << c.fn << ',' << c.tn << ',' << format_double(s.metrics.precision) << ','
        << format_double(s.metrics.recall) << ',' << format_double(s.metrics.f1) << '\n';
  }
  return out.str();
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  out << std::left << std::setw(16) << "split" << std::right << std::setw(8) << "frames"
      << std::setw(10) << "targets" << std::setw(8) << "TP" << std::setw(8) << "FP"
      << std::setw(8) << "FN" << std::setw(11) << "precision" << std::setw(9) << "recall"
      << std::setw(9) << "F1" << '\n';
  out << std::fixed << std::setprecision(4);
  for (const SplitReport& s : splits) {
    out << std::left << std::setw(16) << s.name << std::right << std::setw(8) << s.frames
        << std::setw(10) << s.confusion.total() << std::setw(8) << s.confusion.tp << std::setw(8)
        << s.confusion.fp << std::setw(8) << s.confusion.fn << std::setw(11)
        << s.metrics.precision << std::setw(9) << s.metrics.recall << std::setw(9)
        << s.metrics.f1 << '\n';
  }
  out << std::setprecision(3) << "mean inference time per frame: " << mean_inference_ms
      << " ms\n";
  return out.str();
}

std::string EvalReport::predictions_csv() const {
  std::ostringstream out;
  out << "# radar-anomaly predictions v1 seed=" << seed << '\n';
  out << "frame_id,index,label,predicted\n";
  for (const FramePrediction& f : predictions) {
    for (std::size_t i = 0; i < f.predicted.size(); ++i) {
      out << f.frame_id << ',' << i << ',' << static_cast<int>(f.truth[i]) << ','
          << static_cast<int>(f.predicted[i]) << '\n';
    }
  }
  return out.str();
}

namespace {

std::int64_t parse_int(std::string_view text, std::size_t line) {
  std::int64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw ParseError(line, "not an integer: '" + std::string(text) + "'");
  }
  return value;
}

Label parse_label(std::string_view text, std::size_t line) {
  const std::int64_t v = parse_int(text, line);
  if (v != 0 && v != 1) throw ParseError(line, "label must be 0 or 1, got '" + std::string(text) + "'");
  return static_cast<Label>(v);
}

}  // namespace

std::vector<FramePrediction> read_predictions(std::istream& in) {
  std::vector<FramePrediction> frames;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != "frame_id,index,label,predicted") {
        throw ParseError(line_no, "expected header 'frame_id,index,label,predicted'");
      }
      header = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    for (std::size_t comma; (comma = rest.find(',')) != std::string_view::npos;) {
      fields.push_back(rest.substr(0, comma));
      rest.remove_prefix(comma + 1);
    }
    fields.push_back(rest);
    if (fields.size() != 4) {
      throw ParseError(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
    }
    const std::int64_t frame_id = parse_int(fields[0], line_no);
    const std::int64_t index = parse_int(fields[1], line_no);
    if (frames.empty() || frames.back().frame_id != frame_id) {
      for (const FramePrediction& f : frames) {
        if (f.frame_id == frame_id) {
          throw ParseError(line_no, "rows of frame " + std::to_string(frame_id) + " are not contiguous");
        }
      }
      frames.push_back({frame_id, {}, {}});
    }
    FramePrediction& f = frames.back();
    if (index != static_cast<std::int64_t>(f.predicted.size())) {
      throw ParseError(line_no, "expected index " + std::to_string(f.predicted.size()) + ", got " +
                                    std::to_string(index));
    }
    f.truth.push_back(parse_label(fields[2], line_no));
    f.predicted.push_back(parse_label(fields[3], line_no));
  }
  if (!header) throw ParseError(line_no, "missing header 'frame_id,index,label,predicted'");
  return frames;
}

BenchResult bench_inference(const std::string& name, const Model& model, const FeatureStats& stats,
                            std::span<const RadarFrame> frames, std::size_t repetitions) {
  if (frames.size() < kBenchMinFrames) {
    throw ValidationError("bench needs at least " + std::to_string(kBenchMinFrames) +
                          " frames, got " + std::to_string(frames.size()));
  }
  if (repetitions < kBenchMinRepetitions) {
    throw ValidationError("bench needs at least " + std::to_string(kBenchMinRepetitions) +
                          " repetitions, got " + std::to_string(repetitions));
  }
  BenchResult r;
  r.name = name;
  r.variant = model.config().variant;
  r.frames = frames.size();
  r.repetitions = repetitions;

  std::vector<models::ModelInput> inputs;
  inputs.reserve(frames.size());
  for (const RadarFrame& f : frames) inputs.push_back(make_model_input(f.targets, stats));
  for (const auto& in : inputs) model.predict(in, &r.grouping);  // warm-up, also counts candidates

  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    for (const auto& in : inputs) {
      const auto start = Clock::now();
      model.predict(in);
      const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      sum += ms;
      sum_sq += ms * ms;
    }
  }
  const double n = static_cast<double>(repetitions * frames.size());
  r.mean_ms = sum / n;
  r.std_ms = std::sqrt(std::max(0.0, sum_sq / n - r.mean_ms * r.mean_ms));
  return r;
}

std::string bench_table_csv(std::span<const BenchResult> rows, std::uint64_t seed) {
  std::ostringstream out;
  out << "# radar-anomaly bench v1 seed=" << seed << '\n';
  out << "model,variant,frames,repetitions,mean_ms,std_ms,circle_queries,circle_candidates_mean,"
         "ring_queries,ring_candidates_mean,candidates_mean\n";
  using grouping::QueryForm;
  for (const BenchResult& r : rows) {
    out << r.name << ',' << models::to_string(r.variant) << ',' << r.frames << ','
        << r.repetitions << ',' << format_double(r.mean_ms) << ',' << format_double(r.std_ms)
        << ',' << r.grouping.queries[0] << ','
        << format_double(r.grouping.mean_candidates(QueryForm::Circle)) << ','
        << r.grouping.queries[1] << ',' << format_double(r.grouping.mean_candidates(QueryForm::Ring))
        << ',' << format_double(r.grouping.mean_candidates()) << '\n';
  }
  return out.str();
}

void save_checkpoint(const std::filesystem::path& dir, const Model& model,
                     const FeatureStats& stats, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  const json meta{{"format", "radar-anomaly-model"},
                  {"version", kModelFormatVersion},
                  {"dtype", "float32"},
                  {"seed", seed},
                  {"config", models::to_json(model.config())},
                  {"feature_stats",
                   {{"mean", stats.mean}, {"std", stats.std}, {"checksum", stats.checksum()}}}};
  std::ofstream out(dir / "model.json");
  if (!out) throw Error("cannot write " + (dir / "model.json").string());
  out << meta.dump(2) << '\n';
  if (!out) throw Error("failed writing " + (dir / "model.json").string());
  ad::save_parameters(model.parameters(), dir / "params.ckpt");
}

ModelCheckpoint load_checkpoint(const std::filesystem::path& dir) {
  const auto meta_path = dir / "model.json";
  std::ifstream in(meta_path);
  if (!in) throw Error("cannot open " + meta_path.string());
  json meta;
  try {
    meta = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(meta_path.string() + ": " + e.what());
  }
  try {
    if (meta.at("format") != "radar-anomaly-model") {
      throw ValidationError(meta_path.string() + ": not a model checkpoint");
    }
    if (meta.at("version") != kModelFormatVersion) {
      throw ValidationError(meta_path.string() + ": unsupported version " +
                            meta.at("version").dump());
    }
    const auto& cfg = meta.at("config");
    const auto variant = models::parse_variant(cfg.at("variant").get<std::string>());
    if (!variant) throw ValidationError(meta_path.string() + ": unknown variant");
    ModelCheckpoint ck{Model(models::model_config_from_json(
                           cfg, models::ModelConfig::defaults(*variant))),
                       {},
                       meta.at("seed").get<std::uint64_t>()};
    const auto& fs = meta.at("feature_stats");
    ck.stats.mean = fs.at("mean").get<std::array<double, kFeatureCount>>();
    ck.stats.std = fs.at("std").get<std::array<double, kFeatureCount>>();
    if (fs.at("checksum").get<std::uint64_t>() != ck.stats.checksum()) {
      throw ValidationError(meta_path.string() + ": feature statistics checksum mismatch");
    }
    ad::load_parameters(dir / "params.ckpt", ck.model.parameters());
    return ck;
  } catch (const json::exception& e) {
    throw ValidationError(meta_path.string() + ": " + e.what());
  }
}

}  // namespace radar::pipeline
