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

#include "radar_anomaly/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "radar_anomaly/errors.hpp"

namespace radar::synthgen {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMovingThreshold = 1.0;  // m/s of |v_d_comp|
constexpr double kVehicleLength = 4.5;
constexpr double kVehicleWidth = 1.8;
constexpr double kCrossStreetHalfWidth = 10.0;
constexpr double kIntersectionLead = 12.0;  // m from the stopping point to the cross street
constexpr double kCruisePeriod = 237.0;     // frames per cycle of the cruise variation

struct RcsModel {
  double mean;
  double std;
};
constexpr RcsModel kWallRcs{8.0, 3.0};
constexpr RcsModel kClutterRcs{-5.0, 4.0};
constexpr RcsModel kVehicleRcs{10.0, 4.0};
constexpr RcsModel kPedestrianRcs{-8.0, 3.0};

struct Lane {
  double y;
  double direction;
};
constexpr Lane kLanes[] = {{-3.5, 1.0}, {3.5, -1.0}, {7.0, -1.0}};

struct Wall {
  double x0, x1, y;
};

struct Mover {
  double x0, y0;    // world position at reference frame t0
  double vx, vy;    // world velocity
  double t0 = 0.0;  // frame index
  double first = -1e300, last = 1e300;  // active frame interval
  bool pedestrian = false;
};

struct World {
  std::vector<double> ego_x;  // ego position per frame
  std::vector<Wall> walls;
  std::vector<Mover> movers;
};

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double normal(Rng& rng, double mean, double std) {
  return std == 0.0 ? mean : std::normal_distribution<double>(mean, std)(rng);
}

std::size_t poisson(Rng& rng, double mean) {
  return mean <= 0.0 ? 0 : std::poisson_distribution<std::size_t>(mean)(rng);
}

double sensor_yaw(const SceneConfig& c, SensorId sensor) {
  switch (sensor) {
    case SensorId::Center: return 0.0;
    case SensorId::Left: return c.sensor_yaw;
    case SensorId::Right: return -c.sensor_yaw;
  }
  return 0.0;
}

std::vector<std::size_t> intersection_centers(const SceneConfig& c) {
  std::vector<std::size_t> centers;
  const auto& e = c.ego;
  if (e.intersection_duration == 0) return centers;
  for (std::size_t start = e.intersection_period - e.intersection_duration; start < c.frames;
       start += e.intersection_period) {
    centers.push_back(start + e.intersection_duration / 2);
  }
  return centers;
}

void add_wall_side(std::vector<Wall>& walls, Rng& rng, const SceneConfig& c, double side,
                   double x_begin, double x_end, const std::vector<double>& cross_streets) {
  double x = x_begin;
  while (x < x_end) {
    const double length = uniform(rng, c.wall_min_length, c.wall_max_length);
    const double offset = uniform(rng, c.wall_min_offset, c.wall_max_offset);
    double a = x;
    const double b = x + length;
    // Cross streets cut the facade.
    for (double s : cross_streets) {
      const double lo = s - kCrossStreetHalfWidth;
      const double hi = s + kCrossStreetHalfWidth;
      if (hi <= a || lo >= b) continue;
      if (lo > a) walls.push_back({a, lo, side * offset});
      a = std::max(a, hi);
    }
    if (a < b) walls.push_back({a, b, side * offset});
    x = b + uniform(rng, 2.0, 15.0);
  }
}

World build_world(const SceneConfig& c) {
  World w;
  w.ego_x.resize(c.frames);
  double x = 0.0;
  for (std::size_t t = 0; t < c.frames; ++t) {
    w.ego_x[t] = x;
    x += ego_speed(c.ego, t) * c.frame_period;
  }
  const double x_end = x;
  const double duration = static_cast<double>(c.frames) * c.frame_period;

  std::vector<double> cross_streets;
  const auto centers = intersection_centers(c);
  for (std::size_t t : centers) cross_streets.push_back(w.ego_x[t] + kIntersectionLead);

  Rng rng(derive_seed(c.seed, 0));
  const double begin = -c.fov.max_range - 50.0;
  const double end = x_end + c.fov.max_range + 50.0;
  add_wall_side(w.walls, rng, c, 1.0, begin, end, cross_streets);
  add_wall_side(w.walls, rng, c, -1.0, begin, end, cross_streets);

  const double reach = c.vehicle_max_speed * duration;
  for (const Lane& lane : kLanes) {
    const double lo = begin - reach;
    const double hi = end + reach;
    const std::size_t count = poisson(rng, c.vehicle_density * (hi - lo) / 100.0);
    for (std::size_t i = 0; i < count; ++i) {
      Mover m;
      m.x0 = uniform(rng, lo, hi);
      m.y0 = lane.y;
      m.vx = lane.direction * uniform(rng, c.vehicle_min_speed, c.vehicle_max_speed);
      m.vy = 0.0;
      w.movers.push_back(m);
    }
  }

  const double window = 0.5 * static_cast<double>(c.ego.intersection_duration);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const std::size_t count = poisson(rng, c.pedestrians_per_intersection);
    for (std::size_t k = 0; k < count; ++k) {
      Mover m;
      m.pedestrian = true;
      m.t0 = static_cast<double>(centers[i]);
      m.first = m.t0 - window;
      m.last = m.t0 + window;
      m.x0 = cross_streets[i] + uniform(rng, -kCrossStreetHalfWidth, kCrossStreetHalfWidth);
      m.y0 = uniform(rng, -12.0, 12.0);
      const double speed = uniform(rng, 0.8, 2.0);
      const double heading = uniform(rng, 0.0, kTwoPi);
      m.vx = speed * std::cos(heading);
      m.vy = speed * std::sin(heading);
      w.movers.push_back(m);
    }
  }
  return w;
}

/// Builds one frame's targets with measurement noise.
class FrameBuilder {
 public:
  FrameBuilder(const SceneConfig& c, Rng& rng, double ego_speed, double yaw)
      : c_(c), rng_(rng), ego_{ego_speed, 0.0}, yaw_(yaw) {}

  bool in_view(double r, double phi) const {
    return r > 0.0 && r <= c_.fov.max_range && std::abs(phi - yaw_) <= c_.fov.azimuth_limit;
  }

  // (x, y) relative to the ego origin; (vx, vy) world velocity of the reflector.
  void emit(double x, double y, double vx, double vy, RcsModel rcs, TargetKind kind) {
    const PolarCoord truth = to_polar(x, y);
    if (truth.r <= 0.0) return;
    const double radial = ((vx - ego_.speed) * x + vy * y) / truth.r;
    const double r = truth.r + normal(rng_, 0.0, c_.noise.range);
    const double phi = truth.phi + normal(rng_, 0.0, c_.noise.azimuth);
    const double v_d = radial + normal(rng_, 0.0, c_.noise.doppler);
    const double rcs_value =
        normal(rng_, rcs.mean, rcs.std) + normal(rng_, 0.0, c_.noise.rcs);
    if (!in_view(r, phi)) return;
    RadarTarget t;
    t.x = r * std::cos(phi);
    t.y = r * std::sin(phi);
    if (std::hypot(t.x, t.y) > c_.fov.max_range) return;
    t.v_d = v_d;
    t.v_d_comp = compensate_doppler(v_d, to_polar(t.x, t.y).phi, ego_);
    t.rcs = rcs_value;
    targets.push_back(t);
    kinds.push_back(kind);
  }

  std::vector<RadarTarget> targets;
  std::vector<TargetKind> kinds;

 private:
  const SceneConfig& c_;
  Rng& rng_;
  EgoState ego_;
  double yaw_;
};

RadarFrame make_frame(const SceneConfig& c, const World& world, std::size_t t, std::size_t slot,
                      std::vector<TargetKind>& kinds, std::vector<std::string>& warnings) {
  const SensorId sensor = c.sensors[slot];
  Rng rng(derive_seed(c.seed, 1, t, slot));
  const double speed = ego_speed(c.ego, t);
  const double ego_x = world.ego_x[t];
  const double yaw = sensor_yaw(c, sensor);
  const double R = c.fov.max_range;
  FrameBuilder fb(c, rng, speed, yaw);

  for (const Wall& wall : world.walls) {
    if (std::abs(wall.y) >= R) continue;
    const double reach = std::sqrt(R * R - wall.y * wall.y);
    const double a = std::max(wall.x0 - ego_x, -reach);
    const double b = std::min(wall.x1 - ego_x, reach);
    if (b <= a) continue;
    const std::size_t count = poisson(rng, c.wall_density * (b - a));
    for (std::size_t i = 0; i < count; ++i) {
      fb.emit(uniform(rng, a, b), wall.y, 0.0, 0.0, kWallRcs, TargetKind::Stationary);
    }
  }

  const std::size_t clutter = poisson(rng, c.clutter_per_frame);
  for (std::size_t i = 0; i < clutter; ++i) {
    const double r = R * std::sqrt(uniform(rng, 0.0, 1.0));
    const double phi = yaw + uniform(rng, -c.fov.azimuth_limit, c.fov.azimuth_limit);
    fb.emit(r * std::cos(phi), r * std::sin(phi), 0.0, 0.0, kClutterRcs, TargetKind::Stationary);
  }

  const double now = static_cast<double>(t);
  for (const Mover& m : world.movers) {
    if (now < m.first || now > m.last) continue;
    const double elapsed = (now - m.t0) * c.frame_period;
    const double cx = m.x0 + m.vx * elapsed - ego_x;
    const double cy = m.y0 + m.vy * elapsed;
    const PolarCoord centre = to_polar(cx, cy);
    if (centre.r > R + kVehicleLength ||
        std::abs(centre.phi - yaw) > c.fov.azimuth_limit + 0.2) {
      continue;
    }
    if (m.pedestrian) {
      const std::size_t points = 1 + std::uniform_int_distribution<std::size_t>(0, 1)(rng);
      for (std::size_t i = 0; i < points; ++i) {
        fb.emit(cx + uniform(rng, -0.4, 0.4), cy + uniform(rng, -0.4, 0.4), m.vx, m.vy,
                kPedestrianRcs, TargetKind::Pedestrian);
      }
      continue;
    }
    const std::size_t points =
        std::uniform_int_distribution<std::size_t>(c.cluster_min, c.cluster_max)(rng);
    for (std::size_t i = 0; i < points; ++i) {
      fb.emit(cx + uniform(rng, -kVehicleLength / 2, kVehicleLength / 2),
              cy + uniform(rng, -kVehicleWidth / 2, kVehicleWidth / 2), m.vx, m.vy, kVehicleRcs,
              TargetKind::Vehicle);
    }
  }

  RadarFrame frame;
  frame.frame_id = static_cast<std::int64_t>(t * c.sensors.size() + slot);
  frame.sensor = sensor;
  frame.ego = {speed, 0.0};
  frame.scenario = scenario_for_speed(speed);
  frame.targets = std::move(fb.targets);
  kinds = std::move(fb.kinds);

  DoaOptions doa;
  doa.azimuth_min = yaw - c.fov.azimuth_limit;
  doa.azimuth_max = yaw + c.fov.azimuth_limit;
  MultipathOptions multipath;
  multipath.rcs_mean = kClutterRcs.mean;
  multipath.rcs_std = kClutterRcs.std;
  multipath.max_range = R;
  multipath.azimuth_min = doa.azimuth_min;
  multipath.azimuth_max = doa.azimuth_max;
  const std::size_t doa_count = poisson(rng, c.doa_rate);
  const std::size_t multipath_count = poisson(rng, c.multipath_rate);
  for (std::size_t i = 0; i < doa_count; ++i) {
    frame = inject_doa_anomaly(frame, rng, doa);
    kinds.resize(frame.targets.size(), TargetKind::DoaGhost);
  }
  for (std::size_t i = 0; i < multipath_count; ++i) {
    frame = inject_multipath_anomaly(frame, rng, multipath);
    kinds.resize(frame.targets.size(), TargetKind::MultipathGhost);
  }

  std::vector<std::size_t> order(frame.targets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto key = [&](std::size_t i) {
    return std::pair{frame.targets[i].range(), frame.targets[i].azimuth()};
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  if (order.size() > kMaxTargets) {
    warnings.push_back("frame " + std::to_string(frame.frame_id) + ": dropped " +
                       std::to_string(order.size() - kMaxTargets) + " farthest targets");
    order.resize(kMaxTargets);
  }
  std::vector<RadarTarget> sorted;
  std::vector<TargetKind> sorted_kinds;
  sorted.reserve(order.size());
  for (std::size_t i : order) {
    sorted.push_back(frame.targets[i]);
    sorted_kinds.push_back(kinds[i]);
  }
  frame.targets = std::move(sorted);
  kinds = std::move(sorted_kinds);

  if (frame.targets.empty()) {
    // A frame needs one target; place a single clutter return on the boresight.
    warnings.push_back("frame " + std::to_string(frame.frame_id) + ": empty, added clutter");
    RadarTarget t;
    t.x = 0.5 * R * std::cos(yaw);
    t.y = 0.5 * R * std::sin(yaw);
    t.v_d = -speed * std::cos(to_polar(t.x, t.y).phi);
    t.v_d_comp = compensate_doppler(t.v_d, to_polar(t.x, t.y).phi, frame.ego);
    t.rcs = kClutterRcs.mean;
    frame.targets.push_back(t);
    kinds.push_back(TargetKind::Stationary);
  }
  return frame;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) noexcept {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed);
  h = mix(h ^ a);
  h = mix(h ^ b);
  return mix(h ^ c);
}

double ego_speed(const SpeedProfile& p, std::size_t frame) {
  const double base =
      p.cruise + p.cruise_variation * std::sin(kTwoPi * static_cast<double>(frame) / kCruisePeriod);
  if (p.intersection_duration == 0) return base;
  const std::size_t phase = frame % p.intersection_period;
  const std::size_t start = p.intersection_period - p.intersection_duration;
  if (phase < start) return base;
  const double s = (static_cast<double>(phase - start) + 0.5) /
                   static_cast<double>(p.intersection_duration);
  const double dip = 0.5 * (1.0 - std::cos(kTwoPi * s));
  return base - (base - p.intersection_min_speed) * dip;
}

void SceneConfig::validate() const {
  auto fail = [](const std::string& what) { throw ValidationError("scene config: " + what); };
  auto non_negative = [&](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail(std::string(name) + " must be finite and >= 0");
  };
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(std::string(name) + " must be finite and > 0");
  };
  if (frames == 0) fail("frames must be positive");
  if (sensors.empty()) fail("at least one sensor is required");
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    for (std::size_t j = i + 1; j < sensors.size(); ++j) {
      if (sensors[i] == sensors[j]) fail("sensors must be distinct");
    }
  }
  positive(frame_period, "frame_period");
  non_negative(sensor_yaw, "sensor_yaw");
  positive(ego.cruise, "ego.cruise");
  non_negative(ego.cruise_variation, "ego.cruise_variation");
  if (ego.cruise_variation >= ego.cruise) fail("ego.cruise_variation must be below ego.cruise");
  non_negative(ego.intersection_min_speed, "ego.intersection_min_speed");
  if (ego.intersection_period == 0) fail("ego.intersection_period must be positive");
  if (ego.intersection_duration > ego.intersection_period) {
    fail("ego.intersection_duration exceeds ego.intersection_period");
  }
  positive(wall_min_offset, "wall_min_offset");
  if (wall_max_offset < wall_min_offset) fail("wall_max_offset below wall_min_offset");
  positive(wall_min_length, "wall_min_length");
  if (wall_max_length < wall_min_length) fail("wall_max_length below wall_min_length");
  non_negative(wall_density, "wall_density");
  non_negative(clutter_per_frame, "clutter_per_frame");
  non_negative(vehicle_density, "vehicle_density");
  if (cluster_min == 0 || cluster_max < cluster_min) fail("need 1 <= cluster_min <= cluster_max");
  positive(vehicle_min_speed, "vehicle_min_speed");
  if (vehicle_max_speed < vehicle_min_speed) fail("vehicle_max_speed below vehicle_min_speed");
  non_negative(pedestrians_per_intersection, "pedestrians_per_intersection");
  non_negative(doa_rate, "doa_rate");
  non_negative(multipath_rate, "multipath_rate");
  non_negative(noise.range, "noise.range");
  non_negative(noise.azimuth, "noise.azimuth");
  non_negative(noise.doppler, "noise.doppler");
  non_negative(noise.rcs, "noise.rcs");
  positive(fov.max_range, "fov.max_range");
  if (fov.max_range > kMaxRange) fail("fov.max_range exceeds the 70 m dataset cap");
  positive(fov.azimuth_limit, "fov.azimuth_limit");
  if (fov.azimuth_limit + sensor_yaw > std::numbers::pi) {
    fail("fov.azimuth_limit + sensor_yaw must stay within pi");
  }
}

GeneratedSequence generate_sequence(const SceneConfig& config) {
  config.validate();
  const World world = build_world(config);
  GeneratedSequence out;
  const std::size_t total = config.frames * config.sensors.size();
  out.frames.reserve(total);
  out.kinds.reserve(total);
  for (std::size_t t = 0; t < config.frames; ++t) {
    for (std::size_t s = 0; s < config.sensors.size(); ++s) {
      std::vector<TargetKind> kinds;
      out.frames.push_back(make_frame(config, world, t, s, kinds, out.warnings));
      out.kinds.push_back(std::move(kinds));
    }
  }
  return out;
}

RadarFrame inject_doa_anomaly(const RadarFrame& frame, Rng& rng, const DoaOptions& options) {
  std::vector<std::size_t> moving;
  for (std::size_t i = 0; i < frame.targets.size(); ++i) {
    const RadarTarget& t = frame.targets[i];
    if (t.label == Label::Normal && std::abs(t.v_d_comp) > kMovingThreshold) moving.push_back(i);
  }
  RadarFrame out = frame;
  if (moving.empty() || frame.targets.size() >= kMaxTargets) return out;
  const RadarTarget& source =
      frame.targets[moving[std::uniform_int_distribution<std::size_t>(0, moving.size() - 1)(rng)]];
  double offset = 0.0;
  if (options.forced_offset) {
    offset = *options.forced_offset;
  } else {
    offset = uniform(rng, options.min_offset, options.max_offset);
    if (std::bernoulli_distribution(0.5)(rng)) offset = -offset;
  }
  const double phi = source.azimuth();
  const double rotation = std::clamp(phi + offset, options.azimuth_min, options.azimuth_max) - phi;
  // Rotation about the origin keeps the range; a zero rotation is exact.
  const double c = std::cos(rotation);
  const double s = std::sin(rotation);
  RadarTarget ghost = source;
  ghost.x = source.x * c - source.y * s;
  ghost.y = source.x * s + source.y * c;
  ghost.v_d_comp = compensate_doppler(source.v_d, ghost.azimuth(), frame.ego);
  ghost.label = Label::Anomalous;
  out.targets.push_back(ghost);
  return out;
}

RadarFrame inject_multipath_anomaly(const RadarFrame& frame, Rng& rng,
                                    const MultipathOptions& options) {
  std::vector<std::size_t> stationary;
  for (std::size_t i = 0; i < frame.targets.size(); ++i) {
    const RadarTarget& t = frame.targets[i];
    if (t.label == Label::Normal && std::abs(t.v_d_comp) < kMovingThreshold) {
      stationary.push_back(i);
    }
  }
  RadarFrame out = frame;
  if (stationary.size() < 3 || frame.targets.size() >= kMaxTargets) return out;
  const RadarTarget& anchor = frame.targets[stationary[std::uniform_int_distribution<std::size_t>(
      0, stationary.size() - 1)(rng)]];
  constexpr int kAttempts = 16;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const double d = options.max_distance * std::sqrt(uniform(rng, 0.0, 1.0));
    const double theta = uniform(rng, 0.0, kTwoPi);
    RadarTarget ghost;
    ghost.x = anchor.x + d * std::cos(theta);
    ghost.y = anchor.y + d * std::sin(theta);
    const PolarCoord p = to_polar(ghost.x, ghost.y);
    if (p.r <= 0.0 || p.r > options.max_range) continue;
    if (p.phi < options.azimuth_min || p.phi > options.azimuth_max) continue;
    double magnitude = uniform(rng, options.min_factor, options.max_factor) * frame.ego.speed;
    magnitude = std::max(magnitude, options.min_speed);
    const double v_comp = std::bernoulli_distribution(0.5)(rng) ? magnitude : -magnitude;
    ghost.v_d = v_comp - frame.ego.speed * std::cos(p.phi);
    ghost.v_d_comp = compensate_doppler(ghost.v_d, p.phi, frame.ego);
    ghost.rcs = normal(rng, options.rcs_mean, options.rcs_std);
    ghost.label = Label::Anomalous;
    out.targets.push_back(ghost);
    return out;
  }
  return out;
}

double DatasetStats::anomaly_fraction() const noexcept {
  return targets == 0 ? 0.0 : static_cast<double>(anomalies) / static_cast<double>(targets);
}

double DatasetStats::anomalous_frame_fraction() const noexcept {
  return frames == 0 ? 0.0
                     : static_cast<double>(frames_with_anomaly) / static_cast<double>(frames);
}

DatasetStats compute_stats(std::span<const RadarFrame> frames) {
  DatasetStats s;
  s.frames = frames.size();
  for (const RadarFrame& f : frames) {
    std::size_t anomalies = 0;
    for (const RadarTarget& t : f.targets) anomalies += t.label == Label::Anomalous ? 1 : 0;
    s.targets += f.targets.size();
    s.anomalies += anomalies;
    s.frames_with_anomaly += anomalies > 0 ? 1 : 0;
    s.intersection_frames += f.scenario == Scenario::IntersectionLike ? 1 : 0;
  }
  return s;
}

}  // namespace radar::synthgen
