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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "radar_anomaly/core.hpp"
#include "radar_anomaly/models/config.hpp"
#include "radar_anomaly/models/model.hpp"
#include "radar_anomaly/synthgen.hpp"

namespace radar::pipeline {

using Rng = synthgen::Rng;
using Model = models::SegmentationModel<float>;

// ---- Metrics ---------------------------------------------------------------

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  void add(Label truth, Label predicted) noexcept;
  Confusion& operator+=(const Confusion& other) noexcept;
  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  bool operator==(const Confusion&) const = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Harmonic mean of precision and recall; 0 when both are 0.
double f1_score(double precision, double recall) noexcept;
/// Ratios with the 0/0 -> 0 convention.
Metrics compute_metrics(const Confusion& confusion) noexcept;

// ---- Features --------------------------------------------------------------

/// Per-target network input order: x, y, v_d_comp, rcs, v_d.
inline constexpr std::size_t kFeatureCount = 5;
inline constexpr double kStdFloor = 1e-6;

std::array<double, kFeatureCount> target_features(const RadarTarget& target) noexcept;

struct FeatureStats {
  std::array<double, kFeatureCount> mean{};
  std::array<double, kFeatureCount> std{};

  /// Population mean and standard deviation over every target.
  static FeatureStats compute(std::span<const RadarFrame> frames);
  /// FNV-1a over the bit patterns of mean and std.
  std::uint64_t checksum() const noexcept;
  bool operator==(const FeatureStats&) const = default;
};

/// (value - mean) / max(std, 1e-6) per feature, in place on rows of 5 values.
void standardize(std::span<double> features, const FeatureStats& stats);

/// Standardized network input. Gaussian jitter with `jitter_std` (in units of
/// the feature std) is added when `rng` is given.
models::ModelInput make_model_input(std::span<const RadarTarget> targets,
                                    const FeatureStats& stats,
                                    std::span<const std::size_t> origin = {},
                                    double jitter_std = 0.0, Rng* rng = nullptr);

// ---- Augmentation ----------------------------------------------------------

struct PaddedFrame {
  std::vector<RadarTarget> targets;  // originals first, then duplicates
  std::vector<std::size_t> origin;   // row -> source row; originals map to themselves
};

/// Fills up to `pad_to` rows with uniformly drawn copies of original targets.
PaddedFrame pad_frame(const RadarFrame& frame, std::size_t pad_to, Rng& rng);

/// Predictions of the source rows, in source order.
std::vector<Label> deduplicate(std::span<const Label> padded, std::span<const std::size_t> origin);

/// Copy of frame `k` with every anomaly of frames k-window..k+window (same
/// sequence, k excluded, clipped at the ends) inserted with probability `prob`.
/// Insertions beyond 250 targets are dropped.
RadarFrame augment_with_neighbor_anomalies(std::span<const RadarFrame> sequence, std::size_t k,
                                           std::size_t window, double prob, Rng& rng);

/// Reflection y -> -y. Doppler values are unchanged, which keeps compensation
/// consistent because cos is even.
RadarFrame mirror_frame(const RadarFrame& frame);

// ---- Splits ----------------------------------------------------------------

struct DatasetSplit {
  std::vector<RadarFrame> train;  // leading Center frames
  std::vector<RadarFrame> test;   // trailing Center frames plus every Left and Right frame
};

DatasetSplit split_dataset(std::span<const RadarFrame> frames, double train_fraction);

// ---- Training --------------------------------------------------------------

struct TrainConfig {
  std::size_t batch_size = 48;
  std::size_t epochs = 100;
  std::size_t pad_to = kMaxTargets;
  std::size_t neighbor_window = 3;
  double injection_prob = 0.75;
  std::array<double, 2> class_weights{1.0, 9.0};
  double base_lr = 2e-4;
  std::size_t lr_halve_every = 10;
  bool neighbor_injection = true;
  bool mirror = true;
  double mirror_prob = 0.5;
  bool jitter = true;
  double jitter_std = 0.1;
  double train_fraction = 0.8;
  std::uint64_t seed = 42;

  /// CPU-budget recipe for the narrow desk models: 30 epochs, small batches,
  /// a larger step size and no neighbor-frame injection.
  static TrainConfig desk();

  void validate() const;
};

nlohmann::json to_json(const TrainConfig& config);
/// Keys present in `json` override `base`; unknown keys are rejected. The
/// result is validated.
TrainConfig train_config_from_json(const nlohmann::json& json, const TrainConfig& base = {});

struct EpochLog {
  std::size_t epoch = 0;
  double lr = 0.0;
  double loss = 0.0;    // mean per-frame weighted loss
  double val_f1 = 0.0;  // NaN without validation frames
};

struct TrainResult {
  Model model;
  FeatureStats stats;
  std::vector<EpochLog> log;
};

using EpochCallback = std::function<void(const EpochLog&)>;

/// Deterministic in both configs and the data. Feature statistics come from
/// `train_frames` only.
TrainResult train(const models::ModelConfig& model_config, const TrainConfig& config,
                  std::span<const RadarFrame> train_frames,
                  std::span<const RadarFrame> validation_frames = {},
                  const EpochCallback& on_epoch = {});

std::string training_log_csv(std::span<const EpochLog> log, std::uint64_t seed);

// ---- Evaluation ------------------------------------------------------------

struct SplitReport {
  std::string name;
  std::size_t frames = 0;
  Confusion confusion;
  Metrics metrics;
};

struct FramePrediction {
  std::int64_t frame_id = 0;
  std::vector<Label> truth;
  std::vector<Label> predicted;
};

struct EvalReport {
  std::vector<SplitReport> splits;  // all, center, left, right, intersection, no_intersection
  std::vector<FramePrediction> predictions;
  double mean_inference_ms = 0.0;
  std::uint64_t seed = 0;  // recorded in the CSV headers

  /// Throws Error for an unknown name.
  const SplitReport& split(std::string_view name) const;
  std::string to_csv() const;
  std::string to_text() const;
  std::string predictions_csv() const;
};

EvalReport evaluate(const Model& model, const FeatureStats& stats,
                    std::span<const RadarFrame> frames);

/// Parses the text written by EvalReport::predictions_csv. Throws ParseError.
std::vector<FramePrediction> read_predictions(std::istream& in);

/// Predictions for one frame, unpadded.
std::vector<Label> predict_frame(const Model& model, const FeatureStats& stats,
                                 const RadarFrame& frame, models::GroupingStats* grouping = nullptr);

// ---- Benchmark -------------------------------------------------------------

inline constexpr std::size_t kBenchMinFrames = 100;
inline constexpr std::size_t kBenchMinRepetitions = 10;

struct BenchResult {
  std::string name;
  models::Variant variant = models::Variant::PointNet;
  std::size_t frames = 0;
  std::size_t repetitions = 0;
  double mean_ms = 0.0;  // per frame
  double std_ms = 0.0;
  models::GroupingStats grouping;  // one pass over the frames
};

/// Times single-frame inference on the calling thread. One warm-up pass over
/// the frames is excluded.
BenchResult bench_inference(const std::string& name, const Model& model, const FeatureStats& stats,
                            std::span<const RadarFrame> frames, std::size_t repetitions);

std::string bench_table_csv(std::span<const BenchResult> rows, std::uint64_t seed);

// ---- Checkpoints -----------------------------------------------------------

inline constexpr int kModelFormatVersion = 1;

struct ModelCheckpoint {
  Model model;
  FeatureStats stats;
  std::uint64_t seed = 0;
};

/// Writes `model.json` (format version, config, feature statistics with their
/// checksum, seed) and `params.ckpt` into `dir`.
void save_checkpoint(const std::filesystem::path& dir, const Model& model,
                     const FeatureStats& stats, std::uint64_t seed);
ModelCheckpoint load_checkpoint(const std::filesystem::path& dir);

}  // namespace radar::pipeline
