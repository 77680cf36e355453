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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "../json_util.hpp"
#include "radar_anomaly/autodiff/adam.hpp"
#include "radar_anomaly/autodiff/ops.hpp"
#include "radar_anomaly/dataset_io.hpp"
#include "radar_anomaly/errors.hpp"
#include "radar_anomaly/pipeline.hpp"

namespace radar::pipeline {

using nlohmann::json;

TrainConfig TrainConfig::desk() {
  TrainConfig c;
  c.epochs = 30;
  c.batch_size = 8;
  c.base_lr = 1e-3;
  c.neighbor_injection = false;
  return c;
}

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw ValidationError("train config: " + what); };
  if (batch_size == 0) fail("batch_size must be positive");
  if (epochs == 0) fail("epochs must be positive");
  if (pad_to == 0 || pad_to > kMaxTargets) fail("pad_to must lie in [1, 250]");
  if (!(injection_prob >= 0.0 && injection_prob <= 1.0)) fail("injection_prob must lie in [0, 1]");
  if (!(mirror_prob >= 0.0 && mirror_prob <= 1.0)) fail("mirror_prob must lie in [0, 1]");
  for (double w : class_weights) {
    if (!(w > 0.0) || !std::isfinite(w)) fail("class weights must be positive");
  }
  if (!(base_lr > 0.0) || !std::isfinite(base_lr)) fail("base_lr must be positive");
  if (lr_halve_every == 0) fail("lr_halve_every must be positive");
  if (!(jitter_std >= 0.0) || !std::isfinite(jitter_std)) fail("jitter_std must be >= 0");
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) fail("train_fraction must lie in (0, 1]");
}

json to_json(const TrainConfig& c) {
  return {{"batch_size", c.batch_size},
          {"epochs", c.epochs},
          {"pad_to", c.pad_to},
          {"neighbor_window", c.neighbor_window},
          {"injection_prob", c.injection_prob},
          {"class_weights", c.class_weights},
          {"base_lr", c.base_lr},
          {"lr_halve_every", c.lr_halve_every},
          {"neighbor_injection", c.neighbor_injection},
          {"mirror", c.mirror},
          {"mirror_prob", c.mirror_prob},
          {"jitter", c.jitter},
          {"jitter_std", c.jitter_std},
          {"train_fraction", c.train_fraction},
          {"seed", c.seed}};
}

TrainConfig train_config_from_json(const json& j, const TrainConfig& base) {
  TrainConfig c = base;
  detail::StrictObject o(j, "train");
  o.read("batch_size", c.batch_size);
  o.read("epochs", c.epochs);
  o.read("pad_to", c.pad_to);
  o.read("neighbor_window", c.neighbor_window);
  o.read("injection_prob", c.injection_prob);
  o.read("class_weights", c.class_weights);
  o.read("base_lr", c.base_lr);
  o.read("lr_halve_every", c.lr_halve_every);
  o.read("neighbor_injection", c.neighbor_injection);
  o.read("mirror", c.mirror);
  o.read("mirror_prob", c.mirror_prob);
  o.read("jitter", c.jitter);
  o.read("jitter_std", c.jitter_std);
  o.read("train_fraction", c.train_fraction);
  o.read("seed", c.seed);
  o.finish();
  c.validate();
  return c;
}

namespace {

// Frames of one sensor in file order; neighbors are looked up within it.
struct SequenceIndex {
  std::vector<std::vector<RadarFrame>> sequences;
  std::vector<std::pair<std::size_t, std::size_t>> position;  // frame -> (sequence, slot)
};

SequenceIndex index_sequences(std::span<const RadarFrame> frames) {
  SequenceIndex idx;
  std::map<SensorId, std::size_t> slot_of;
  for (const RadarFrame& f : frames) {
    auto [it, inserted] = slot_of.try_emplace(f.sensor, idx.sequences.size());
    if (inserted) idx.sequences.emplace_back();
    idx.position.emplace_back(it->second, idx.sequences[it->second].size());
    idx.sequences[it->second].push_back(f);
  }
  return idx;
}

}  // namespace

TrainResult train(const models::ModelConfig& model_config, const TrainConfig& config,
                  std::span<const RadarFrame> train_frames,
                  std::span<const RadarFrame> validation_frames, const EpochCallback& on_epoch) {
  config.validate();
  if (train_frames.empty()) throw ValidationError("train: empty training split");
  for (const RadarFrame& f : train_frames) validate_frame(f);

  TrainResult result{Model(model_config), FeatureStats::compute(train_frames), {}};
  Model& model = result.model;
  const SequenceIndex sequences = index_sequences(train_frames);
  std::vector<ad::Tensor<float>> params = model.parameter_tensors();
  ad::AdamState<float> adam;

  std::vector<std::size_t> order(train_frames.size());
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = ad::step_decay_lr(epoch, config.base_lr, config.lr_halve_every);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(synthgen::derive_seed(config.seed, 1, epoch));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      const double batch = static_cast<double>(end - begin);
      // Scaling the class weights by 1/batch makes the summed gradients the
      // gradient of the batch mean.
      const std::array<double, 2> weights{config.class_weights[0] / batch,
                                          config.class_weights[1] / batch};
      for (ad::Tensor<float>& p : params) p.zero_grad();
      for (std::size_t b = begin; b < end; ++b) {
        const std::size_t frame_index = order[b];
        Rng rng(synthgen::derive_seed(config.seed, 2, epoch, frame_index));
        const auto [seq, slot] = sequences.position[frame_index];
        RadarFrame frame =
            config.neighbor_injection
                ? augment_with_neighbor_anomalies(sequences.sequences[seq], slot,
                                                  config.neighbor_window, config.injection_prob,
                                                  rng)
                : train_frames[frame_index];
        if (config.mirror && std::bernoulli_distribution(config.mirror_prob)(rng)) {
          frame = mirror_frame(frame);
        }
        PaddedFrame padded;
        if (frame.targets.size() < config.pad_to) {
          padded = pad_frame(frame, config.pad_to, rng);
        } else {
          padded.targets = frame.targets;
          padded.origin.resize(frame.targets.size());
          std::iota(padded.origin.begin(), padded.origin.end(), std::size_t{0});
        }
        const models::ModelInput input = make_model_input(
            padded.targets, result.stats, padded.origin, config.jitter ? config.jitter_std : 0.0,
            config.jitter ? &rng : nullptr);
        std::vector<int> labels(padded.targets.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
          labels[i] = padded.targets[i].label == Label::Anomalous ? 1 : 0;
        }
        const ad::Tensor<float> loss =
            ad::weighted_softmax_cross_entropy(model.forward(input), labels, weights);
        loss.backward();
        loss_sum += static_cast<double>(loss.item()) * batch;
      }
      ad::adam_step<float>(params, adam, lr);
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.lr = lr;
    entry.loss = loss_sum / static_cast<double>(train_frames.size());
    entry.val_f1 = validation_frames.empty()
                       ? std::numeric_limits<double>::quiet_NaN()
                       : evaluate(model, result.stats, validation_frames).split("all").metrics.f1;
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  }
  return result;
}

std::string training_log_csv(std::span<const EpochLog> log, std::uint64_t seed) {
  std::ostringstream out;
  out << "# radar-anomaly training-log v1 seed=" << seed << '\n';
  out << "epoch,lr,loss,val_f1\n";
  for (const EpochLog& e : log) {
    out << e.epoch << ',' << format_double(e.lr) << ',' << format_double(e.loss) << ','
        << (std::isnan(e.val_f1) ? std::string("nan") : format_double(e.val_f1)) << '\n';
  }
  return out.str();
}

}  // namespace radar::pipeline
