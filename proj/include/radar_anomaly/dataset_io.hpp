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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "radar_anomaly/core.hpp"

namespace radar {

inline constexpr std::string_view kDatasetHeader =
    "frame_id,sensor_id,ego_speed,ego_yaw_rate,scenario,x,y,v_d,v_d_comp,rcs,label";

// CSV dataset, one row per target. A row whose target fields are all empty
// declares a frame without adding a target; a frame left with no targets
// fails validation. Floating-point values are written in shortest
// round-trip form, so write(read(text)) reproduces canonical text exactly.
std::vector<RadarFrame> read_dataset(std::istream& in);
std::vector<RadarFrame> read_dataset(const std::filesystem::path& path);

void write_dataset(std::span<const RadarFrame> frames, std::ostream& out);
void write_dataset(std::span<const RadarFrame> frames, const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace radar
