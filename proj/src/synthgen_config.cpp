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

#include <string>

#include "json_util.hpp"
#include "radar_anomaly/errors.hpp"
#include "radar_anomaly/synthgen.hpp"

namespace radar::synthgen {

using nlohmann::json;

json to_json(const SceneConfig& c) {
  json sensors = json::array();
  for (SensorId s : c.sensors) sensors.push_back(std::string(to_string(s)));
  return {
      {"seed", c.seed},
      {"frames", c.frames},
      {"sensors", sensors},
      {"frame_period", c.frame_period},
      {"sensor_yaw", c.sensor_yaw},
      {"ego",
       {{"cruise", c.ego.cruise},
        {"cruise_variation", c.ego.cruise_variation},
        {"intersection_period", c.ego.intersection_period},
        {"intersection_duration", c.ego.intersection_duration},
        {"intersection_min_speed", c.ego.intersection_min_speed}}},
      {"wall_min_offset", c.wall_min_offset},
      {"wall_max_offset", c.wall_max_offset},
      {"wall_min_length", c.wall_min_length},
      {"wall_max_length", c.wall_max_length},
      {"wall_density", c.wall_density},
      {"clutter_per_frame", c.clutter_per_frame},
      {"vehicle_density", c.vehicle_density},
      {"cluster_min", c.cluster_min},
      {"cluster_max", c.cluster_max},
      {"vehicle_min_speed", c.vehicle_min_speed},
      {"vehicle_max_speed", c.vehicle_max_speed},
      {"pedestrians_per_intersection", c.pedestrians_per_intersection},
      {"doa_rate", c.doa_rate},
      {"multipath_rate", c.multipath_rate},
      {"noise",
       {{"range", c.noise.range},
        {"azimuth", c.noise.azimuth},
        {"doppler", c.noise.doppler},
        {"rcs", c.noise.rcs}}},
      {"fov", {{"max_range", c.fov.max_range}, {"azimuth_limit", c.fov.azimuth_limit}}},
  };
}

SceneConfig scene_config_from_json(const json& j) {
  SceneConfig c;
  detail::StrictObject o(j, "scene");
  o.read("seed", c.seed);
  o.read("frames", c.frames);
  if (const json* sensors = o.child("sensors")) {
    if (!sensors->is_array()) throw ValidationError("scene.sensors: expected an array");
    c.sensors.clear();
    for (const json& s : *sensors) {
      const auto id = s.is_string() ? parse_sensor(s.get<std::string>()) : std::nullopt;
      if (!id) throw ValidationError("scene.sensors: unknown sensor " + s.dump());
      c.sensors.push_back(*id);
    }
  }
  o.read("frame_period", c.frame_period);
  o.read("sensor_yaw", c.sensor_yaw);
  if (const json* ego = o.child("ego")) {
    detail::StrictObject e(*ego, "scene.ego");
    e.read("cruise", c.ego.cruise);
    e.read("cruise_variation", c.ego.cruise_variation);
    e.read("intersection_period", c.ego.intersection_period);
    e.read("intersection_duration", c.ego.intersection_duration);
    e.read("intersection_min_speed", c.ego.intersection_min_speed);
    e.finish();
  }
  o.read("wall_min_offset", c.wall_min_offset);
  o.read("wall_max_offset", c.wall_max_offset);
  o.read("wall_min_length", c.wall_min_length);
  o.read("wall_max_length", c.wall_max_length);
  o.read("wall_density", c.wall_density);
  o.read("clutter_per_frame", c.clutter_per_frame);
  o.read("vehicle_density", c.vehicle_density);
  o.read("cluster_min", c.cluster_min);
  o.read("cluster_max", c.cluster_max);
  o.read("vehicle_min_speed", c.vehicle_min_speed);
  o.read("vehicle_max_speed", c.vehicle_max_speed);
  o.read("pedestrians_per_intersection", c.pedestrians_per_intersection);
  o.read("doa_rate", c.doa_rate);
  o.read("multipath_rate", c.multipath_rate);
  if (const json* noise = o.child("noise")) {
    detail::StrictObject n(*noise, "scene.noise");
    n.read("range", c.noise.range);
    n.read("azimuth", c.noise.azimuth);
    n.read("doppler", c.noise.doppler);
    n.read("rcs", c.noise.rcs);
    n.finish();
  }
  if (const json* fov = o.child("fov")) {
    detail::StrictObject f(*fov, "scene.fov");
    f.read("max_range", c.fov.max_range);
    f.read("azimuth_limit", c.fov.azimuth_limit);
    f.finish();
  }
  o.finish();
  c.validate();
  return c;
}

}  // namespace radar::synthgen
