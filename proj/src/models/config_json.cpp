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

#include "../json_util.hpp"
#include "radar_anomaly/errors.hpp"
#include "radar_anomaly/models/config.hpp"

namespace radar::models {

using nlohmann::json;

namespace {

json specs_to_json(const std::vector<grouping::GroupSpec>& specs) {
  json out = json::array();
  for (const auto& g : specs) {
    out.push_back({{"form", g.form == grouping::QueryForm::Circle ? "circle" : "ring"},
                   {"size", g.size},
                   {"max_samples", g.max_samples}});
  }
  return out;
}

grouping::GroupSpec spec_from_json(const json& j, const std::string& context) {
  grouping::GroupSpec g;
  std::string form = "circle";
  detail::StrictObject o(j, context);
  o.read("form", form);
  o.read("size", g.size);
  o.read("max_samples", g.max_samples);
  o.finish();
  if (form == "circle") {
    g.form = grouping::QueryForm::Circle;
  } else if (form == "ring") {
    g.form = grouping::QueryForm::Ring;
  } else {
    throw ValidationError(context + ".form: expected 'circle' or 'ring', got '" + form + "'");
  }
  return g;
}

}  // namespace

json to_json(const ModelConfig& c) {
  json layers = json::array();
  for (const auto& layer : c.sa_layers) {
    layers.push_back({{"centroids", layer.centroids == kAllCentroids ? json("all")
                                                                     : json(layer.centroids)},
                      {"groups", specs_to_json(layer.groups)},
                      {"mlp", layer.mlp}});
  }
  return {{"variant", std::string(to_string(c.variant))},
          {"input_features", c.input_features},
          {"num_classes", c.num_classes},
          {"point_mlp", c.point_mlp},
          {"global_mlp", c.global_mlp},
          {"sa_layers", layers},
          {"fp_mlps", c.fp_mlps},
          {"offset_scale", c.offset_scale},
          {"head", c.head},
          {"seed", c.seed}};
}

ModelConfig model_config_from_json(const json& j, const ModelConfig& base) {
  ModelConfig c = base;
  detail::StrictObject o(j, "model");
  std::string variant(to_string(c.variant));
  o.read("variant", variant);
  const auto parsed = parse_variant(variant);
  if (!parsed) throw ValidationError("model.variant: unknown variant '" + variant + "'");
  c.variant = *parsed;
  o.read("input_features", c.input_features);
  o.read("num_classes", c.num_classes);
  o.read("point_mlp", c.point_mlp);
  o.read("global_mlp", c.global_mlp);
  if (const json* layers = o.child("sa_layers")) {
    if (!layers->is_array()) throw ValidationError("model.sa_layers: expected an array");
    c.sa_layers.clear();
    for (std::size_t l = 0; l < layers->size(); ++l) {
      const std::string context = "model.sa_layers[" + std::to_string(l) + "]";
      detail::StrictObject lo((*layers)[l], context);
      SetAbstractionConfig layer;
      if (const json* centroids = lo.child("centroids")) {
        if (centroids->is_string() && centroids->get<std::string>() == "all") {
          layer.centroids = kAllCentroids;
        } else if (centroids->is_number_unsigned() && centroids->get<std::size_t>() > 0) {
          layer.centroids = centroids->get<std::size_t>();
        } else {
          throw ValidationError(context + ".centroids: expected \"all\" or a positive count");
        }
      }
      if (const json* groups = lo.child("groups")) {
        if (!groups->is_array()) throw ValidationError(context + ".groups: expected an array");
        for (std::size_t g = 0; g < groups->size(); ++g) {
          layer.groups.push_back(
              spec_from_json((*groups)[g], context + ".groups[" + std::to_string(g) + "]"));
        }
      }
      lo.read("mlp", layer.mlp);
      lo.finish();
      c.sa_layers.push_back(std::move(layer));
    }
  }
  o.read("fp_mlps", c.fp_mlps);
  o.read("offset_scale", c.offset_scale);
  o.read("head", c.head);
  o.read("seed", c.seed);
  o.finish();
  c.validate();
  return c;
}

}  // namespace radar::models
