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

#include "radar_anomaly/core.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "radar_anomaly/errors.hpp"

namespace radar {

double RadarTarget::range() const noexcept { return to_polar(x, y).r; }

double RadarTarget::azimuth() const noexcept { return to_polar(x, y).phi; }

PolarCoord to_polar(double x, double y) noexcept {
  const double r = std::sqrt(x * x + y * y);
  if (r == 0.0) {
    return {0.0, 0.0};
  }
  double phi = std::atan2(y, x);
  // atan2 yields -pi for (negative x, -0.0); fold it onto the open side.
  if (phi <= -std::numbers::pi) {
    phi = std::numbers::pi;
  }
  return {r, phi};
}

double compensate_doppler(double v_d, double phi, const EgoState& ego) noexcept {
  return v_d + ego.speed * std::cos(phi);
}

void validate_frame(const RadarFrame& frame) {
  auto fail = [&](const std::string& what) {
    std::ostringstream msg;
    msg << "frame " << frame.frame_id << ": " << what;
    throw ValidationError(msg.str());
  };
  if (frame.targets.empty()) {
    fail("no targets (at least one required)");
  }
  if (frame.targets.size() > kMaxTargets) {
    fail(std::to_string(frame.targets.size()) + " targets exceed the limit of " +
         std::to_string(kMaxTargets));
  }
  if (!std::isfinite(frame.ego.speed) || frame.ego.speed < 0.0) {
    fail("ego speed must be finite and non-negative");
  }
  if (!std::isfinite(frame.ego.yaw_rate)) {
    fail("ego yaw rate must be finite");
  }
  for (std::size_t i = 0; i < frame.targets.size(); ++i) {
    const RadarTarget& t = frame.targets[i];
    if (!std::isfinite(t.x) || !std::isfinite(t.y) || !std::isfinite(t.v_d) ||
        !std::isfinite(t.v_d_comp) || !std::isfinite(t.rcs)) {
      fail("target " + std::to_string(i) + " has a non-finite field");
    }
    const double r = t.range();
    if (r > kMaxRange) {
      std::ostringstream msg;
      msg << "target " << i << " at range " << r << " m exceeds " << kMaxRange << " m";
      fail(msg.str());
    }
  }
}

std::string_view to_string(SensorId sensor) noexcept {
  switch (sensor) {
    case SensorId::Center: return "center";
    case SensorId::Left: return "left";
    case SensorId::Right: return "right";
  }
  return "center";
}

std::string_view to_string(Scenario scenario) noexcept {
  return scenario == Scenario::IntersectionLike ? "intersection" : "normal";
}

std::optional<SensorId> parse_sensor(std::string_view text) noexcept {
  if (text == "center") return SensorId::Center;
  if (text == "left") return SensorId::Left;
  if (text == "right") return SensorId::Right;
  return std::nullopt;
}

std::optional<Scenario> parse_scenario(std::string_view text) noexcept {
  if (text == "normal") return Scenario::Normal;
  if (text == "intersection") return Scenario::IntersectionLike;
  return std::nullopt;
}

Scenario scenario_for_speed(double speed) noexcept {
  return speed < kIntersectionSpeed ? Scenario::IntersectionLike : Scenario::Normal;
}

}  // namespace radar
