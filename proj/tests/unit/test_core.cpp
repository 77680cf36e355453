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
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "radar_anomaly/core.hpp"
#include "radar_anomaly/dataset_io.hpp"
#include "radar_anomaly/errors.hpp"

namespace radar {
namespace {

TEST(ToPolar, AxisAlignedAndOrigin) {
  const PolarCoord a = to_polar(1.0, 0.0);
  EXPECT_EQ(a.r, 1.0);
  EXPECT_EQ(a.phi, 0.0);
  const PolarCoord o = to_polar(0.0, 0.0);
  EXPECT_EQ(o.r, 0.0);
  EXPECT_EQ(o.phi, 0.0);
}

TEST(ToPolar, VehicleRangeExample) {
  const PolarCoord p = to_polar(28.0, -8.0);
  EXPECT_NEAR(p.r, 29.1204, 1e-4);
  EXPECT_NEAR(p.phi, -0.2783, 1e-4);
}

TEST(ToPolar, NegativeXAxisMapsToPi) {
  EXPECT_EQ(to_polar(-2.0, 0.0).phi, std::numbers::pi);
  EXPECT_EQ(to_polar(-2.0, -0.0).phi, std::numbers::pi);
}

TEST(ToPolar, RoundTripBelowNanometer) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-70.0, 70.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng);
    const double y = u(rng);
    const PolarCoord p = to_polar(x, y);
    ASSERT_GT(p.phi, -std::numbers::pi);
    ASSERT_LE(p.phi, std::numbers::pi);
    EXPECT_LT(std::hypot(p.r * std::cos(p.phi) - x, p.r * std::sin(p.phi) - y), 1e-9);
  }
}

TEST(CompensateDoppler, StationaryTargetsCompensateToZero) {
  EXPECT_EQ(compensate_doppler(-10.0, 0.0, {10.0, 0.0}), 0.0);
  EXPECT_NEAR(compensate_doppler(0.0, std::numbers::pi / 2, {10.0, 0.0}), 0.0, 1e-12);
  EXPECT_NEAR(compensate_doppler(-5.0, std::numbers::pi / 3, {10.0, 0.0}), 0.0, 1e-12);
}

TEST(CompensateDoppler, IgnoresYawRate) {
  EXPECT_EQ(compensate_doppler(-3.0, 0.4, {8.0, 0.0}), compensate_doppler(-3.0, 0.4, {8.0, 1.5}));
}

RadarFrame make_frame(std::int64_t id, std::size_t n) {
  RadarFrame f;
  f.frame_id = id;
  f.ego = {9.5, 0.01};
  for (std::size_t i = 0; i < n; ++i) {
    RadarTarget t;
    t.x = 3.0 + static_cast<double>(i) * 0.1;
    t.y = -1.0 + static_cast<double>(i) * 0.01;
    t.v_d = -9.0;
    t.v_d_comp = compensate_doppler(t.v_d, t.azimuth(), f.ego);
    t.rcs = 1.25;
    f.targets.push_back(t);
  }
  return f;
}

TEST(ValidateFrame, AcceptsBoundsAndRejectsViolations) {
  EXPECT_NO_THROW(validate_frame(make_frame(0, 1)));
  EXPECT_NO_THROW(validate_frame(make_frame(0, kMaxTargets)));
  EXPECT_THROW(validate_frame(make_frame(0, 0)), ValidationError);
  EXPECT_THROW(validate_frame(make_frame(0, kMaxTargets + 1)), ValidationError);

  RadarFrame far = make_frame(0, 1);
  far.targets[0].x = 60.0;
  far.targets[0].y = 40.0;  // range sqrt(5200) ~ 72.11
  EXPECT_THROW(validate_frame(far), ValidationError);

  RadarFrame nan = make_frame(0, 2);
  nan.targets[1].rcs = std::nan("");
  EXPECT_THROW(validate_frame(nan), ValidationError);

  RadarFrame reverse = make_frame(0, 2);
  reverse.ego.speed = -1.0;
  EXPECT_THROW(validate_frame(reverse), ValidationError);
}

TEST(ScenarioForSpeed, ThresholdIsExclusive) {
  EXPECT_EQ(scenario_for_speed(2.999), Scenario::IntersectionLike);
  EXPECT_EQ(scenario_for_speed(3.0), Scenario::Normal);
}

TEST(EnumText, RoundTrips) {
  for (SensorId s : {SensorId::Center, SensorId::Left, SensorId::Right}) {
    EXPECT_EQ(parse_sensor(to_string(s)), s);
  }
  for (Scenario s : {Scenario::Normal, Scenario::IntersectionLike}) {
    EXPECT_EQ(parse_scenario(to_string(s)), s);
  }
  EXPECT_FALSE(parse_sensor("rear").has_value());
}

const std::string kHeader = std::string(kDatasetHeader) + "\n";

TEST(DatasetIo, ReadsThreeTargetFrameBitExact) {
  std::istringstream in(kHeader +
                        "7,center,10.5,0,normal,12.25,-3.5,-9.75,0.5,4.125,0\n"
                        "7,center,10.5,0,normal,20,1e-3,-10,0.25,-2,1\n"
                        "7,center,10.5,0,normal,0.1,0.2,0.3,0.4,0.5,0\n");
  const auto frames = read_dataset(in);
  ASSERT_EQ(frames.size(), 1u);
  ASSERT_EQ(frames[0].targets.size(), 3u);
  EXPECT_EQ(frames[0].frame_id, 7);
  EXPECT_EQ(frames[0].ego.speed, 10.5);
  EXPECT_EQ(frames[0].targets[0].x, 12.25);
  EXPECT_EQ(frames[0].targets[1].y, 1e-3);
  EXPECT_EQ(frames[0].targets[1].label, Label::Anomalous);
  EXPECT_EQ(frames[0].targets[2].x, 0.1);
  EXPECT_EQ(frames[0].targets[2].rcs, 0.5);
}

TEST(DatasetIo, CanonicalTextRoundTripsByteForByte) {
  const std::string text = kHeader +
                           "0,left,7.25,0.5,intersection,1.5,-2.25,0.125,3,-7.5,1\n"
                           "0,left,7.25,0.5,intersection,30.000000000000004,0.1,-7,0.3,2,0\n"
                           "3,right,0,0,normal,69.9,0,-0,0,0,0\n";
  std::istringstream in(text);
  std::ostringstream out;
  write_dataset(read_dataset(in), out);
  EXPECT_EQ(out.str(), text);
}

TEST(DatasetIo, RandomFramesRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  std::vector<RadarFrame> frames;
  for (int f = 0; f < 20; ++f) {
    RadarFrame frame = make_frame(f * 3, 1 + static_cast<std::size_t>(f) * 5);
    for (RadarTarget& t : frame.targets) {
      t.x = u(rng);
      t.y = u(rng) / 2.0;
      t.v_d = u(rng) / 3.0;
      t.v_d_comp = u(rng) / 7.0;
      t.rcs = u(rng) / 11.0;
      t.label = f % 2 == 0 ? Label::Normal : Label::Anomalous;
    }
    frames.push_back(frame);
  }
  std::stringstream buf;
  write_dataset(frames, buf);
  EXPECT_EQ(read_dataset(buf), frames);
}

TEST(DatasetIo, EmptyTargetSectionIsRejected) {
  std::istringstream in(kHeader + "4,center,5,0,normal,,,,,,\n");
  EXPECT_THROW(read_dataset(in), ValidationError);
}

TEST(DatasetIo, RangeBeyondCapIsRejected) {
  std::istringstream in(kHeader + "1,center,5,0,normal,60,40,0,0,0,0\n");
  EXPECT_THROW(read_dataset(in), ValidationError);
}

TEST(DatasetIo, TooManyTargetsIsRejected) {
  std::string text = kHeader;
  for (std::size_t i = 0; i <= kMaxTargets; ++i) text += "1,center,5,0,normal,1,0,0,0,0,0\n";
  std::istringstream in(text);
  EXPECT_THROW(read_dataset(in), ValidationError);
}

TEST(DatasetIo, MalformedRowNamesLine) {
  std::istringstream in(kHeader + "1,center,5,0,normal,1,0,0,0,0,0\n1,center,5,0,normal,abc,0,0,0,0,0\n");
  try {
    read_dataset(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(DatasetIo, StructuralErrors) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_dataset(in);
  };
  EXPECT_THROW(parse("frame_id,x\n"), ParseError);
  EXPECT_THROW(parse(kHeader + "1,center,5,0,normal,1,0,0,0,0\n"), ParseError);
  EXPECT_THROW(parse(kHeader + "1,front,5,0,normal,1,0,0,0,0,0\n"), ParseError);
  EXPECT_THROW(parse(kHeader + "1,center,5,0,normal,1,0,0,0,0,2\n"), ParseError);
  EXPECT_THROW(parse(kHeader + "2,center,5,0,normal,1,0,0,0,0,0\n1,center,5,0,normal,1,0,0,0,0,0\n"),
               ParseError);
  EXPECT_THROW(parse(kHeader + "1,center,5,0,normal,1,0,0,0,0,0\n1,left,5,0,normal,1,0,0,0,0,0\n"),
               ParseError);
  EXPECT_THROW(parse(""), ParseError);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-2.0), "-2");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

}  // namespace
}  // namespace radar
