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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "radar_anomaly/errors.hpp"
#include "radar_anomaly/synthgen.hpp"

namespace radar::synthgen {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

SceneConfig small_config(std::size_t frames = 120) {
  SceneConfig c;
  c.frames = frames;
  return c;
}

RadarTarget polar_target(double r, double phi, double v_d, const EgoState& ego, Label label) {
  RadarTarget t;
  t.x = r * std::cos(phi);
  t.y = r * std::sin(phi);
  t.v_d = v_d;
  t.v_d_comp = compensate_doppler(v_d, t.azimuth(), ego);
  t.label = label;
  return t;
}

TEST(Generator, SameSeedIsIdentical) {
  const auto a = generate_sequence(small_config());
  const auto b = generate_sequence(small_config());
  EXPECT_EQ(a.frames, b.frames);
  SceneConfig other = small_config();
  other.seed = 43;
  EXPECT_NE(generate_sequence(other).frames, a.frames);
}

TEST(Generator, FramesSatisfyCoreInvariants) {
  const auto seq = generate_sequence(small_config(400));
  ASSERT_EQ(seq.frames.size(), 1200u);
  ASSERT_EQ(seq.kinds.size(), seq.frames.size());
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    const RadarFrame& f = seq.frames[i];
    ASSERT_NO_THROW(validate_frame(f));
    ASSERT_EQ(f.frame_id, static_cast<std::int64_t>(i));
    ASSERT_EQ(f.sensor, SceneConfig{}.sensors[i % 3]);
    ASSERT_EQ(f.scenario, scenario_for_speed(f.ego.speed));
    ASSERT_EQ(seq.kinds[i].size(), f.targets.size());
    for (std::size_t j = 0; j < f.targets.size(); ++j) {
      const RadarTarget& t = f.targets[j];
      ASSERT_EQ(t.v_d_comp, compensate_doppler(t.v_d, t.azimuth(), f.ego));
      const bool injected =
          seq.kinds[i][j] == TargetKind::DoaGhost || seq.kinds[i][j] == TargetKind::MultipathGhost;
      ASSERT_EQ(t.label == Label::Anomalous, injected);
    }
  }
}

TEST(Generator, ZeroRatesGiveNoAnomalies) {
  SceneConfig c = small_config();
  c.doa_rate = 0.0;
  c.multipath_rate = 0.0;
  const DatasetStats s = compute_stats(generate_sequence(c).frames);
  EXPECT_GT(s.targets, 0u);
  EXPECT_EQ(s.anomalies, 0u);
}

TEST(Generator, IntersectionsSlowTheEgoVehicle) {
  const SpeedProfile p;
  EXPECT_GT(ego_speed(p, 0), 10.0);
  // The slowdown of the first period is centred on frame 250.
  EXPECT_LT(ego_speed(p, 250), 0.6);
  EXPECT_LT(ego_speed(p, 250), kIntersectionSpeed);
  const DatasetStats s = compute_stats(generate_sequence(small_config(300)).frames);
  EXPECT_GT(s.intersection_frames, 0u);
  EXPECT_LT(s.intersection_frames, s.frames / 4);
}

TEST(Generator, DenseScenesTruncateWithWarning) {
  SceneConfig c = small_config(3);
  c.clutter_per_frame = 400.0;
  const auto seq = generate_sequence(c);
  EXPECT_FALSE(seq.warnings.empty());
  for (const RadarFrame& f : seq.frames) EXPECT_LE(f.targets.size(), kMaxTargets);
}

TEST(Generator, MultipathGhostsSitAmongStationaryTargets) {
  const auto seq = generate_sequence(small_config(300));
  std::size_t checked = 0;
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    const auto& targets = seq.frames[i].targets;
    for (std::size_t j = 0; j < targets.size(); ++j) {
      if (seq.kinds[i][j] != TargetKind::MultipathGhost) continue;
      ++checked;
      for (std::size_t k = 0; k < targets.size(); ++k) {
        if (seq.kinds[i][k] != TargetKind::Stationary) continue;
        if (std::hypot(targets[k].x - targets[j].x, targets[k].y - targets[j].y) <= 5.0) {
          ASSERT_LT(std::abs(targets[k].v_d_comp), 1.0);
        }
      }
    }
  }
  EXPECT_GT(checked, 100u);
}

TEST(Generator, SceneConfigJsonRoundTrip) {
  SceneConfig c;
  c.seed = 7;
  c.sensors = {SensorId::Right};
  c.noise.rcs = 1.5;
  const SceneConfig back = scene_config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  nlohmann::json j = to_json(c);
  j["noise"]["phase"] = 1.0;
  EXPECT_THROW(scene_config_from_json(j), ValidationError);
  j = to_json(c);
  j["doa_rate"] = -1.0;
  EXPECT_THROW(scene_config_from_json(j), ValidationError);
  j = to_json(c);
  j["sensors"] = {"center", "center"};
  EXPECT_THROW(scene_config_from_json(j), ValidationError);
}

TEST(DoaInjection, GhostKeepsRangeAndRawDoppler) {
  const EgoState ego{10.0, 0.0};
  RadarFrame f;
  f.ego = ego;
  f.targets.push_back(polar_target(29.1, -16.0 * kDeg, -3.0, ego, Label::Normal));
  DoaOptions o;
  o.forced_offset = -30.0 * kDeg;
  Rng rng(1);
  const RadarFrame out = inject_doa_anomaly(f, rng, o);
  ASSERT_EQ(out.targets.size(), 2u);
  const RadarTarget& src = out.targets[0];
  const RadarTarget& ghost = out.targets[1];
  EXPECT_NEAR(ghost.azimuth(), -46.0 * kDeg, 1e-12);
  EXPECT_NEAR(ghost.range(), src.range(), 1e-12);
  EXPECT_EQ(ghost.v_d, src.v_d);
  EXPECT_NEAR(ghost.v_d_comp, 3.9466, 1e-4);
  EXPECT_NEAR(src.v_d_comp, 6.6126, 1e-4);
  EXPECT_EQ(ghost.label, Label::Anomalous);
}

TEST(DoaInjection, ZeroOffsetDuplicatesSource) {
  const EgoState ego{8.0, 0.0};
  RadarFrame f;
  f.ego = ego;
  f.targets.push_back(polar_target(20.0, 0.3, 4.0, ego, Label::Normal));
  DoaOptions o;
  o.forced_offset = 0.0;
  Rng rng(2);
  const RadarFrame out = inject_doa_anomaly(f, rng, o);
  RadarTarget expected = f.targets[0];
  expected.label = Label::Anomalous;
  ASSERT_EQ(out.targets.size(), 2u);
  EXPECT_EQ(out.targets[1], expected);
}

TEST(DoaInjection, RandomOffsetsStayInBandAndFieldOfView) {
  const EgoState ego{10.0, 0.0};
  RadarFrame f;
  f.ego = ego;
  f.targets.push_back(polar_target(15.0, 0.0, 5.0, ego, Label::Normal));
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const RadarTarget g = inject_doa_anomaly(f, rng).targets.back();
    const double off = std::abs(g.azimuth());
    ASSERT_GE(off, 10.0 * kDeg - 1e-12);
    ASSERT_LE(off, 50.0 * kDeg + 1e-12);
  }
  f.targets[0] = polar_target(15.0, 55.0 * kDeg, 5.0, ego, Label::Normal);
  for (int i = 0; i < 200; ++i) {
    ASSERT_LE(inject_doa_anomaly(f, rng).targets.back().azimuth(), 60.0 * kDeg + 1e-12);
  }
}

TEST(DoaInjection, NoMovingTargetIsNoOp) {
  const EgoState ego{10.0, 0.0};
  RadarFrame f;
  f.ego = ego;
  f.targets.push_back(polar_target(15.0, 0.2, -10.0 * std::cos(0.2), ego, Label::Normal));
  Rng rng(4);
  EXPECT_EQ(inject_doa_anomaly(f, rng), f);
}

TEST(MultipathInjection, SpeedBandAndPlacement) {
  const EgoState ego{10.0, 0.0};
  RadarFrame f;
  f.ego = ego;
  for (int i = 0; i < 5; ++i) {
    const double phi = -0.4 + 0.2 * i;
    f.targets.push_back(polar_target(30.0, phi, -10.0 * std::cos(phi), ego, Label::Normal));
  }
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const RadarFrame out = inject_multipath_anomaly(f, rng);
    ASSERT_EQ(out.targets.size(), 6u);
    const RadarTarget& g = out.targets.back();
    ASSERT_EQ(g.label, Label::Anomalous);
    ASSERT_GE(std::abs(g.v_d_comp), 15.0 - 1e-9);
    ASSERT_LE(std::abs(g.v_d_comp), 30.0 + 1e-9);
    ASSERT_EQ(g.v_d_comp, compensate_doppler(g.v_d, g.azimuth(), ego));
    double nearest = 1e9;
    for (int i = 0; i < 5; ++i) {
      nearest = std::min(nearest, std::hypot(g.x - f.targets[i].x, g.y - f.targets[i].y));
    }
    ASSERT_LE(nearest, 2.0);
  }
}

TEST(MultipathInjection, SlowEgoUsesSpeedFloor) {
  const EgoState ego{0.5, 0.0};
  RadarFrame f;
  f.ego = ego;
  for (int i = 0; i < 3; ++i) f.targets.push_back(polar_target(10.0 + i, 0.0, -0.5, ego, Label::Normal));
  Rng rng(6);
  EXPECT_EQ(std::abs(inject_multipath_anomaly(f, rng).targets.back().v_d_comp), 3.0);
}

TEST(MultipathInjection, TooFewStationaryTargetsIsNoOp) {
  const EgoState ego{10.0, 0.0};
  RadarFrame f;
  f.ego = ego;
  f.targets.push_back(polar_target(10.0, 0.0, -10.0, ego, Label::Normal));
  f.targets.push_back(polar_target(12.0, 0.0, -10.0, ego, Label::Normal));
  Rng rng(7);
  EXPECT_EQ(inject_multipath_anomaly(f, rng), f);
}

TEST(Seeds, DerivedStreamsDiffer) {
  EXPECT_EQ(derive_seed(42, 1, 2, 3), derive_seed(42, 1, 2, 3));
  EXPECT_NE(derive_seed(42, 1, 2, 3), derive_seed(42, 1, 3, 2));
  EXPECT_NE(derive_seed(42, 1), derive_seed(43, 1));
}

}  // namespace
}  // namespace radar::synthgen
