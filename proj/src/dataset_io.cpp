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

#include "radar_anomaly/dataset_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "radar_anomaly/errors.hpp"

namespace radar {
namespace {

constexpr std::size_t kColumns = 11;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

double parse_double(std::string_view text, std::size_t line, std::string_view column) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ParseError(line, "column '" + std::string(column) + "': not a number: '" +
                               std::string(text) + "'");
  }
  return value;
}

std::int64_t parse_int(std::string_view text, std::size_t line, std::string_view column) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(line, "column '" + std::string(column) + "': not an integer: '" +
                               std::string(text) + "'");
  }
  return value;
}

struct FrameKey {
  std::int64_t frame_id;
  SensorId sensor;
  EgoState ego;
  Scenario scenario;
};

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::vector<RadarFrame> read_dataset(std::istream& in) {
  std::vector<RadarFrame> frames;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kDatasetHeader) {
        throw ParseError(line_no, "expected header '" + std::string(kDatasetHeader) + "'");
      }
      header_seen = true;
      continue;
    }

    const auto fields = split_fields(line);
    if (fields.size() != kColumns) {
      throw ParseError(line_no, "expected " + std::to_string(kColumns) + " fields, got " +
                                    std::to_string(fields.size()));
    }
    FrameKey key{};
    key.frame_id = parse_int(fields[0], line_no, "frame_id");
    const auto sensor = parse_sensor(fields[1]);
    if (!sensor) throw ParseError(line_no, "unknown sensor_id '" + std::string(fields[1]) + "'");
    key.sensor = *sensor;
    key.ego.speed = parse_double(fields[2], line_no, "ego_speed");
    key.ego.yaw_rate = parse_double(fields[3], line_no, "ego_yaw_rate");
    const auto scenario = parse_scenario(fields[4]);
    if (!scenario) throw ParseError(line_no, "unknown scenario '" + std::string(fields[4]) + "'");
    key.scenario = *scenario;

    if (frames.empty() || frames.back().frame_id != key.frame_id) {
      if (!frames.empty() && key.frame_id <= frames.back().frame_id) {
        throw ParseError(line_no, "frame_id " + std::to_string(key.frame_id) +
                                      " is not greater than the previous frame_id " +
                                      std::to_string(frames.back().frame_id));
      }
      RadarFrame frame;
      frame.frame_id = key.frame_id;
      frame.sensor = key.sensor;
      frame.ego = key.ego;
      frame.scenario = key.scenario;
      frames.push_back(std::move(frame));
    } else {
      const RadarFrame& cur = frames.back();
      if (cur.sensor != key.sensor || cur.ego != key.ego || cur.scenario != key.scenario) {
        throw ParseError(line_no, "frame-level fields differ from earlier rows of frame " +
                                      std::to_string(key.frame_id));
      }
    }

    bool all_empty = true;
    for (std::size_t c = 5; c < kColumns; ++c) all_empty = all_empty && fields[c].empty();
    if (all_empty) continue;

    RadarTarget t;
    t.x = parse_double(fields[5], line_no, "x");
    t.y = parse_double(fields[6], line_no, "y");
    t.v_d = parse_double(fields[7], line_no, "v_d");
    t.v_d_comp = parse_double(fields[8], line_no, "v_d_comp");
    t.rcs = parse_double(fields[9], line_no, "rcs");
    if (fields[10] == "0") {
      t.label = Label::Normal;
    } else if (fields[10] == "1") {
      t.label = Label::Anomalous;
    } else {
      throw ParseError(line_no, "label must be 0 or 1, got '" + std::string(fields[10]) + "'");
    }
    frames.back().targets.push_back(t);
  }
  if (!header_seen) {
    throw ParseError(line_no + 1, "missing header");
  }
  for (const RadarFrame& f : frames) validate_frame(f);
  return frames;
}

std::vector<RadarFrame> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset '" + path.string() + "'");
  return read_dataset(in);
}

void write_dataset(std::span<const RadarFrame> frames, std::ostream& out) {
  for (std::size_t i = 0; i < frames.size(); ++i) {
    validate_frame(frames[i]);
    if (i > 0 && frames[i].frame_id <= frames[i - 1].frame_id) {
      throw ValidationError("frame_id " + std::to_string(frames[i].frame_id) +
                            " is not strictly increasing");
    }
  }
  out << kDatasetHeader << '\n';
  std::string prefix;
  for (const RadarFrame& f : frames) {
    prefix = std::to_string(f.frame_id);
    prefix += ',';
    prefix += to_string(f.sensor);
    prefix += ',';
    prefix += format_double(f.ego.speed);
    prefix += ',';
    prefix += format_double(f.ego.yaw_rate);
    prefix += ',';
    prefix += to_string(f.scenario);
    for (const RadarTarget& t : f.targets) {
      out << prefix << ',' << format_double(t.x) << ',' << format_double(t.y) << ','
          << format_double(t.v_d) << ',' << format_double(t.v_d_comp) << ','
          << format_double(t.rcs) << ',' << (t.label == Label::Anomalous ? '1' : '0') << '\n';
    }
  }
}

void write_dataset(std::span<const RadarFrame> frames, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write dataset '" + path.string() + "'");
  write_dataset(frames, out);
}

}  // namespace radar
