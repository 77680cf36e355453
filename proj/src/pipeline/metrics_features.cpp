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

#include <bit>
#include <cmath>

#include "radar_anomaly/errors.hpp"
#include "radar_anomaly/pipeline.hpp"

namespace radar::pipeline {

void Confusion::add(Label truth, Label predicted) noexcept {
  const bool t = truth == Label::Anomalous;
  const bool p = predicted == Label::Anomalous;
  if (t && p) {
    ++tp;
  } else if (p) {
    ++fp;
  } else if (t) {
    ++fn;
  } else {
    ++tn;
  }
}

Confusion& Confusion::operator+=(const Confusion& o) noexcept {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

double f1_score(double precision, double recall) noexcept {
  const double sum = precision + recall;
  return sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

Metrics compute_metrics(const Confusion& c) noexcept {
  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  Metrics m;
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.f1 = f1_score(m.precision, m.recall);
  return m;
}

std::array<double, kFeatureCount> target_features(const RadarTarget& t) noexcept {
  return {t.x, t.y, t.v_d_comp, t.rcs, t.v_d};
}

FeatureStats FeatureStats::compute(std::span<const RadarFrame> frames) {
  FeatureStats s;
  std::size_t count = 0;
  for (const RadarFrame& f : frames) {
    for (const RadarTarget& t : f.targets) {
      const auto v = target_features(t);
      for (std::size_t i = 0; i < kFeatureCount; ++i) s.mean[i] += v[i];
      ++count;
    }
  }
  if (count == 0) throw ValidationError("feature statistics need at least one target");
  for (double& m : s.mean) m /= static_cast<double>(count);
  for (const RadarFrame& f : frames) {
    for (const RadarTarget& t : f.targets) {
      const auto v = target_features(t);
      for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const double d = v[i] - s.mean[i];
        s.std[i] += d * d;
      }
    }
  }
  for (double& sd : s.std) sd = std::sqrt(sd / static_cast<double>(count));
  return s;
}

std::uint64_t FeatureStats::checksum() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (double v : mean) mix(v);
  for (double v : std) mix(v);
  return h;
}

void standardize(std::span<double> features, const FeatureStats& stats) {
  if (features.size() % kFeatureCount != 0) {
    throw ShapeError("standardize: " + std::to_string(features.size()) +
                     " values do not form rows of " + std::to_string(kFeatureCount));
  }
  std::array<double, kFeatureCount> inv{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) inv[i] = 1.0 / std::max(stats.std[i], kStdFloor);
  for (std::size_t r = 0; r < features.size(); r += kFeatureCount) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      features[r + i] = (features[r + i] - stats.mean[i]) * inv[i];
    }
  }
}

models::ModelInput make_model_input(std::span<const RadarTarget> targets,
                                    const FeatureStats& stats,
                                    std::span<const std::size_t> origin, double jitter_std,
                                    Rng* rng) {
  models::ModelInput in;
  in.positions.reserve(targets.size());
  in.features.reserve(targets.size() * kFeatureCount);
  for (const RadarTarget& t : targets) {
    in.positions.push_back({t.x, t.y});
    const auto v = target_features(t);
    in.features.insert(in.features.end(), v.begin(), v.end());
  }
  standardize(in.features, stats);
  if (rng != nullptr && jitter_std > 0.0) {
    // Duplicated rows receive their source's noise so copies stay identical.
    std::normal_distribution<double> noise(0.0, jitter_std);
    for (std::size_t r = 0; r < targets.size(); ++r) {
      if (!origin.empty() && origin[r] != r) continue;
      for (std::size_t i = 0; i < kFeatureCount; ++i) {
        in.features[r * kFeatureCount + i] += noise(*rng);
      }
    }
    for (std::size_t r = 0; r < origin.size(); ++r) {
      if (origin[r] == r) continue;
      std::copy_n(in.features.begin() + static_cast<std::ptrdiff_t>(origin[r] * kFeatureCount),
                  kFeatureCount,
                  in.features.begin() + static_cast<std::ptrdiff_t>(r * kFeatureCount));
    }
  }
  in.origin.assign(origin.begin(), origin.end());
  return in;
}

}  // namespace radar::pipeline
