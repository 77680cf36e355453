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

namespace radar {

inline constexpr std::size_t kMaxTargets = 250;
inline constexpr double kMaxRange = 70.0;

enum class Label : std::uint8_t { Normal = 0, Anomalous = 1 };
enum class SensorId : std::uint8_t { Center, Left, Right };
enum class Scenario : std::uint8_t { Normal, IntersectionLike };

/// One resolved reflection in vehicle coordinates.
///
/// x points forward and y to the left. Doppler values are radial velocities,
/// negative when the target approaches. `v_d` is the raw measurement and
/// `v_d_comp` has the ego-motion contribution removed.
struct RadarTarget {
  double x = 0.0;
  double y = 0.0;
  double v_d = 0.0;
  double v_d_comp = 0.0;
  double rcs = 0.0;  // dBsm
  Label label = Label::Normal;

  double range() const noexcept;
  double azimuth() const noexcept;
  bool operator==(const RadarTarget&) const = default;
};

struct PolarCoord {
  double r = 0.0;
  double phi = 0.0;  // (-pi, pi], measured from +x toward +y
};

struct EgoState {
  double speed = 0.0;     // m/s along the longitudinal axis
  double yaw_rate = 0.0;  // rad/s, recorded only
  bool operator==(const EgoState&) const = default;
};

/// One measurement cycle of one sensor.
struct RadarFrame {
  std::int64_t frame_id = 0;
  SensorId sensor = SensorId::Center;
  EgoState ego;
  Scenario scenario = Scenario::Normal;
  std::vector<RadarTarget> targets;

  bool operator==(const RadarFrame&) const = default;
};

PolarCoord to_polar(double x, double y) noexcept;

/// Removes the ego-motion contribution from a raw Doppler value measured at
/// azimuth `phi`: v_d + speed * cos(phi). Yaw rate and mounting offsets are
/// ignored; sensor coordinates coincide with vehicle coordinates.
double compensate_doppler(double v_d, double phi, const EgoState& ego) noexcept;

/// Throws ValidationError when the frame breaks a dataset invariant:
/// 1 <= n <= 250, every field finite, range <= 70 m, finite non-negative speed.
void validate_frame(const RadarFrame& frame);

std::string_view to_string(SensorId sensor) noexcept;
std::string_view to_string(Scenario scenario) noexcept;
std::optional<SensorId> parse_sensor(std::string_view text) noexcept;
std::optional<Scenario> parse_scenario(std::string_view text) noexcept;

/// Scenario tag implied by an ego speed (slow driving marks intersections).
Scenario scenario_for_speed(double speed) noexcept;
inline constexpr double kIntersectionSpeed = 3.0;

}  // namespace radar
