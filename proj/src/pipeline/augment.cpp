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

#include "radar_anomaly/errors.hpp"
#include "radar_anomaly/pipeline.hpp"

namespace radar::pipeline {

PaddedFrame pad_frame(const RadarFrame& frame, std::size_t pad_to, Rng& rng) {
  const std::size_t n = frame.targets.size();
  if (n == 0) throw ValidationError("pad_frame: frame has no targets");
  if (n > pad_to) {
    throw ValidationError("pad_frame: " + std::to_string(n) + " targets exceed pad_to " +
                          std::to_string(pad_to));
  }
  PaddedFrame out;
  out.targets = frame.targets;
  out.targets.reserve(pad_to);
  out.origin.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.origin[i] = i;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  while (out.targets.size() < pad_to) {
    const std::size_t src = pick(rng);
    out.targets.push_back(frame.targets[src]);
    out.origin.push_back(src);
  }
  return out;
}

std::vector<Label> deduplicate(std::span<const Label> padded, std::span<const std::size_t> origin) {
  if (padded.size() != origin.size()) {
    throw ShapeError("deduplicate: " + std::to_string(padded.size()) + " predictions for " +
                     std::to_string(origin.size()) + " rows");
  }
  std::vector<Label> out;
  for (std::size_t i = 0; i < padded.size(); ++i) {
    if (origin[i] == i) out.push_back(padded[i]);
  }
  return out;
}

RadarFrame augment_with_neighbor_anomalies(std::span<const RadarFrame> sequence, std::size_t k,
                                           std::size_t window, double prob, Rng& rng) {
  if (k >= sequence.size()) {
    throw Error("augment_with_neighbor_anomalies: frame " + std::to_string(k) +
                " outside a sequence of " + std::to_string(sequence.size()));
  }
  RadarFrame out = sequence[k];
  std::bernoulli_distribution insert(std::clamp(prob, 0.0, 1.0));
  const std::size_t lo = k >= window ? k - window : 0;
  const std::size_t hi = std::min(sequence.size() - 1, k + window);
  for (std::size_t j = lo; j <= hi; ++j) {
    if (j == k) continue;
    for (const RadarTarget& t : sequence[j].targets) {
      if (t.label != Label::Anomalous) continue;
      // Draw for every candidate so the stream does not depend on capacity.
      const bool take = insert(rng);
      if (take && out.targets.size() < kMaxTargets) out.targets.push_back(t);
    }
  }
  return out;
}

RadarFrame mirror_frame(const RadarFrame& frame) {
  RadarFrame out = frame;
  for (RadarTarget& t : out.targets) t.y = -t.y;
  return out;
}

DatasetSplit split_dataset(std::span<const RadarFrame> frames, double train_fraction) {
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
    throw ValidationError("train_fraction must lie in [0, 1]");
  }
  std::size_t center = 0;
  for (const RadarFrame& f : frames) center += f.sensor == SensorId::Center ? 1 : 0;
  const auto n_train =
      static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(center)));
  DatasetSplit split;
  std::size_t seen = 0;
  for (const RadarFrame& f : frames) {
    if (f.sensor == SensorId::Center && seen++ < n_train) {
      split.train.push_back(f);
    } else {
      split.test.push_back(f);
    }
  }
  return split;
}

}  // namespace radar::pipeline
