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
#include <span>
#include <string>

#include "radar_anomaly/core.hpp"

namespace radar::render {

/// Compensated Doppler magnitude above which a target counts as moving and
/// gets a velocity arrow.
inline constexpr double kMovingSpeed = 1.0;

struct SvgOptions {
  double width = 720.0;   // px
  double height = 400.0;  // px
  double max_range = kMaxRange;
  double arrow_scale = 1.0;  // meters of arrow per m/s of compensated Doppler
  std::uint64_t seed = 0;    // recorded in the header comment
};

enum class PointClass {
  Stationary,   // ground truth normal, |v_d_comp| <= 1
  Moving,       // ground truth normal, |v_d_comp| > 1
  Anomalous,    // ground truth anomaly
  TruePositive,
  FalsePositive,
  FalseNegative,
};

std::string_view color_of(PointClass c) noexcept;

/// Class used for ground-truth rendering.
PointClass ground_truth_class(const RadarTarget& t) noexcept;
/// Class used when predictions are available; true negatives keep their
/// stationary or moving color.
PointClass prediction_class(const RadarTarget& t, Label predicted) noexcept;

/// Bird's-eye scatter plot of one frame: x points up, y points left, arrows
/// along the line of sight for moving targets, marker area growing with RCS.
/// Pass an empty span to color by ground truth.
std::string frame_svg(const RadarFrame& frame, std::span<const Label> predicted = {},
                      const SvgOptions& options = {});

}  // namespace radar::render
