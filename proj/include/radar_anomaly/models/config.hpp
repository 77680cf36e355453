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

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "radar_anomaly/grouping.hpp"

namespace radar::models {

enum class Variant { PointNet, SSG, MSG, MFG };

std::string_view to_string(Variant variant) noexcept;
std::optional<Variant> parse_variant(std::string_view text) noexcept;

/// Centroid count meaning "every input point is a centroid" (no sampling).
inline constexpr std::size_t kAllCentroids = 0;

struct SetAbstractionConfig {
  std::size_t centroids = kAllCentroids;
  std::vector<grouping::GroupSpec> groups;
  std::vector<std::size_t> mlp;  // shared widths, separate weights per group spec
};

struct ModelConfig {
  Variant variant = Variant::MFG;
  std::size_t input_features = 5;
  std::size_t num_classes = 2;

  // PointNet
  std::vector<std::size_t> point_mlp;
  std::vector<std::size_t> global_mlp;

  // PointNet++
  std::vector<SetAbstractionConfig> sa_layers;
  std::vector<std::vector<std::size_t>> fp_mlps;  // deepest level first
  double offset_scale = 10.0;                     // meters per unit of local offset

  std::vector<std::size_t> head;  // hidden widths before the class layer
  std::uint64_t seed = 0;

  /// Full-size architecture.
  static ModelConfig defaults(Variant variant);
  /// Narrow layers for CPU-budget training runs.
  static ModelConfig desk(Variant variant);

  void validate() const;
  bool operator==(const ModelConfig&) const;
};

nlohmann::json to_json(const ModelConfig& config);
/// Keys present in `json` override `base`; unknown keys are rejected. The
/// result is validated.
ModelConfig model_config_from_json(const nlohmann::json& json, const ModelConfig& base);

}  // namespace radar::models
