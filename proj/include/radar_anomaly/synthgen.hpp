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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "radar_anomaly/core.hpp"

namespace radar::synthgen {

using Rng = std::mt19937_64;

/// Origin of a generated target. Kept beside the frames for tests and
/// statistics; the dataset file only carries the binary label.
enum class TargetKind : std::uint8_t { Stationary, Vehicle, Pedestrian, DoaGhost, MultipathGhost };

/// Cruise speed with periodic slowdowns for intersections.
struct SpeedProfile {
  double cruise = 12.0;               // m/s
  double cruise_variation = 1.5;      // m/s, amplitude of a slow sinusoid
  std::size_t intersection_period = 300;    // frames between intersection centers
  std::size_t intersection_duration = 100;  // frames of slowdown per intersection
  double intersection_min_speed = 0.5;      // m/s at the intersection center
};

struct NoiseConfig {
  double range = 0.05;     // m
  double azimuth = 0.004;  // rad
  double doppler = 0.05;   // m/s
  double rcs = 2.0;        // dBsm
};

struct FieldOfView {
  double max_range = kMaxRange;             // m
  double azimuth_limit = 1.0471975511965976;  // rad either side of the boresight
};

struct SceneConfig {
  std::uint64_t seed = 42;
  std::size_t frames = 700;  // measurement cycles per sensor
  std::vector<SensorId> sensors{SensorId::Center, SensorId::Left, SensorId::Right};
  double frame_period = 0.1;  // s
  double sensor_yaw = 0.4363323129985824;  // rad, left sensor +yaw, right sensor -yaw
  SpeedProfile ego;

  // Stationary background.
  double wall_min_offset = 6.0;  // m, lateral distance of building walls
  double wall_max_offset = 20.0;
  double wall_min_length = 15.0;
  double wall_max_length = 60.0;
  double wall_density = 0.45;     // detections per visible wall meter per frame
  double clutter_per_frame = 14.0;  // Poisson mean inside the field of view

  // Traffic.
  double vehicle_density = 1.2;  // vehicles per 100 m of lane
  std::size_t cluster_min = 3;
  std::size_t cluster_max = 8;
  double vehicle_min_speed = 5.0;  // m/s
  double vehicle_max_speed = 15.0;
  double pedestrians_per_intersection = 6.0;  // Poisson mean near each intersection

  // Anomalies, per-frame Poisson means.
  double doa_rate = 0.7;
  double multipath_rate = 0.7;

  NoiseConfig noise;
  FieldOfView fov;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

nlohmann::json to_json(const SceneConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
SceneConfig scene_config_from_json(const nlohmann::json& json);

struct GeneratedSequence {
  std::vector<RadarFrame> frames;               // frame_id = step * sensors + sensor slot
  std::vector<std::vector<TargetKind>> kinds;   // parallel to each frame's targets
  std::vector<std::string> warnings;
};

/// Deterministic in the config. Every frame draws from its own RNG stream, so
/// the output does not depend on generation order.
GeneratedSequence generate_sequence(const SceneConfig& config);

/// Ego speed at a frame index.
double ego_speed(const SpeedProfile& profile, std::size_t frame);

struct DoaOptions {
  double min_offset = 0.17453292519943295;  // rad
  double max_offset = 0.8726646259971648;   // rad
  double azimuth_min = -1.0471975511965976;  // field of view in vehicle coordinates
  double azimuth_max = 1.0471975511965976;
  std::optional<double> forced_offset;       // signed, replaces the random draw
};

/// Adds a ghost at the range of a moving target (|v_d_comp| > 1 m/s) with a
/// rotated azimuth. Raw Doppler and RCS are copied; v_d_comp is recomputed at
/// the new azimuth. Returns the frame unchanged when nothing moves.
RadarFrame inject_doa_anomaly(const RadarFrame& frame, Rng& rng, const DoaOptions& options = {});

struct MultipathOptions {
  double max_distance = 2.0;  // m from the anchoring stationary target
  double min_factor = 1.5;    // |v_d_comp| as a multiple of the ego speed
  double max_factor = 3.0;
  double min_speed = 3.0;     // m/s floor on |v_d_comp|
  double rcs_mean = -5.0;     // clutter RCS distribution, dBsm
  double rcs_std = 4.0;
  double max_range = kMaxRange;
  double azimuth_min = -1.0471975511965976;
  double azimuth_max = 1.0471975511965976;
};

/// Adds a high-Doppler ghost within `max_distance` of a stationary target
/// (|v_d_comp| < 1 m/s). Needs three stationary targets, otherwise returns the
/// frame unchanged.
RadarFrame inject_multipath_anomaly(const RadarFrame& frame, Rng& rng,
                                    const MultipathOptions& options = {});

struct DatasetStats {
  std::size_t frames = 0;
  std::size_t targets = 0;
  std::size_t anomalies = 0;
  std::size_t frames_with_anomaly = 0;
  std::size_t intersection_frames = 0;

  double anomaly_fraction() const noexcept;
  double anomalous_frame_fraction() const noexcept;
};

DatasetStats compute_stats(std::span<const RadarFrame> frames);

/// Stream seed for one purpose within a run, mixed with splitmix64.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0) noexcept;

}  // namespace radar::synthgen
