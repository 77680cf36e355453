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

#include "radar_anomaly/models/config.hpp"

#include <string>

#include "radar_anomaly/core.hpp"
#include "radar_anomaly/errors.hpp"

namespace radar::models {
namespace {

using grouping::GroupSpec;
using grouping::QueryForm;

std::vector<GroupSpec> first_layer_groups(Variant variant) {
  constexpr std::size_t K = 16;
  switch (variant) {
    case Variant::SSG:
      return {{QueryForm::Circle, 5.0, K}};
    case Variant::MSG:
      return {{QueryForm::Circle, 2.5, K}, {QueryForm::Circle, 5.0, K}, {QueryForm::Circle, 10.0, K}};
    case Variant::MFG:
      return {{QueryForm::Circle, 2.5, K},
              {QueryForm::Circle, 5.0, K},
              {QueryForm::Ring, 2.0, K},
              {QueryForm::Ring, 4.0, K}};
    case Variant::PointNet:
      break;
  }
  return {};
}

std::vector<GroupSpec> scaled(std::vector<GroupSpec> groups, double factor) {
  for (GroupSpec& g : groups) g.size *= factor;
  return groups;
}

// Covers every pair of points inside the field of view.
GroupSpec global_group() { return {QueryForm::Circle, 2.0 * kMaxRange, 64}; }

ModelConfig pointnetpp(Variant variant, std::vector<std::vector<std::size_t>> sa_mlps,
                       std::vector<std::vector<std::size_t>> fp_mlps,
                       std::vector<std::size_t> head) {
  ModelConfig c;
  c.variant = variant;
  const auto groups = first_layer_groups(variant);
  c.sa_layers = {
      {kAllCentroids, groups, std::move(sa_mlps[0])},
      {64, scaled(groups, 2.0), std::move(sa_mlps[1])},
      {16, {global_group()}, std::move(sa_mlps[2])},
  };
  c.fp_mlps = std::move(fp_mlps);
  c.head = std::move(head);
  return c;
}

}  // namespace

std::string_view to_string(Variant variant) noexcept {
  switch (variant) {
    case Variant::PointNet: return "pointnet";
    case Variant::SSG: return "ssg";
    case Variant::MSG: return "msg";
    case Variant::MFG: return "mfg";
  }
  return "pointnet";
}

std::optional<Variant> parse_variant(std::string_view text) noexcept {
  if (text == "pointnet") return Variant::PointNet;
  if (text == "ssg") return Variant::SSG;
  if (text == "msg") return Variant::MSG;
  if (text == "mfg") return Variant::MFG;
  return std::nullopt;
}

ModelConfig ModelConfig::defaults(Variant variant) {
  if (variant == Variant::PointNet) {
    ModelConfig c;
    c.variant = variant;
    c.point_mlp = {64, 64};
    c.global_mlp = {128, 256};
    c.head = {128, 64};
    return c;
  }
  return pointnetpp(variant, {{32, 32, 64}, {64, 64, 128}, {128, 256}},
                    {{256, 128}, {128, 128}, {128, 128}}, {128});
}

ModelConfig ModelConfig::desk(Variant variant) {
  if (variant == Variant::PointNet) {
    ModelConfig c;
    c.variant = variant;
    c.point_mlp = {32, 32};
    c.global_mlp = {64, 128};
    c.head = {64, 32};
    return c;
  }
  return pointnetpp(variant, {{16, 16}, {32, 32}, {64}}, {{64}, {32}, {32}}, {32});
}

void ModelConfig::validate() const {
  auto fail = [](const std::string& what) { throw ValidationError("model config: " + what); };
  if (input_features == 0) fail("input_features must be positive");
  if (num_classes < 2) fail("num_classes must be at least 2");
  if (!(offset_scale > 0.0)) fail("offset_scale must be positive");
  for (std::size_t w : head) {
    if (w == 0) fail("head widths must be positive");
  }
  if (variant == Variant::PointNet) {
    if (point_mlp.empty() || global_mlp.empty()) fail("PointNet needs point and global MLPs");
    for (std::size_t w : point_mlp) if (w == 0) fail("MLP widths must be positive");
    for (std::size_t w : global_mlp) if (w == 0) fail("MLP widths must be positive");
    return;
  }
  if (sa_layers.empty()) fail("PointNet++ needs at least one set abstraction layer");
  if (fp_mlps.size() != sa_layers.size()) {
    fail("need one feature propagation MLP per set abstraction layer");
  }
  if (sa_layers.front().centroids != kAllCentroids) {
    fail("the first set abstraction layer must use every point as a centroid");
  }
  for (std::size_t l = 0; l < sa_layers.size(); ++l) {
    const auto& layer = sa_layers[l];
    if (layer.groups.empty()) fail("set abstraction layer " + std::to_string(l + 1) + " has no groups");
    if (layer.mlp.empty()) fail("set abstraction layer " + std::to_string(l + 1) + " has no MLP");
    for (std::size_t w : layer.mlp) if (w == 0) fail("MLP widths must be positive");
    if (l > 0 && layer.centroids == kAllCentroids) {
      fail("only the first set abstraction layer may skip sampling");
    }
    for (const auto& g : layer.groups) g.validate();
  }
  for (const auto& mlp : fp_mlps) {
    if (mlp.empty()) fail("feature propagation MLPs need at least one layer");
    for (std::size_t w : mlp) if (w == 0) fail("MLP widths must be positive");
  }
  const auto& first = sa_layers.front().groups;
  std::size_t circles = 0;
  std::size_t rings = 0;
  for (const auto& g : first) (g.form == QueryForm::Circle ? circles : rings)++;
  switch (variant) {
    case Variant::SSG:
      if (first.size() != 1) fail("SSG uses exactly one group spec per layer");
      break;
    case Variant::MSG:
      if (circles < 2 || rings != 0) fail("MSG needs at least two circles and no rings");
      break;
    case Variant::MFG:
      if (circles < 1 || rings < 1) fail("MFG needs at least one circle and one ring");
      break;
    case Variant::PointNet:
      break;
  }
}

bool ModelConfig::operator==(const ModelConfig& o) const {
  auto same_groups = [](const std::vector<grouping::GroupSpec>& a,
                        const std::vector<grouping::GroupSpec>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].form != b[i].form || a[i].size != b[i].size ||
          a[i].max_samples != b[i].max_samples) {
        return false;
      }
    }
    return true;
  };
  if (sa_layers.size() != o.sa_layers.size()) return false;
  for (std::size_t i = 0; i < sa_layers.size(); ++i) {
    if (sa_layers[i].centroids != o.sa_layers[i].centroids ||
        sa_layers[i].mlp != o.sa_layers[i].mlp ||
        !same_groups(sa_layers[i].groups, o.sa_layers[i].groups)) {
      return false;
    }
  }
  return variant == o.variant && input_features == o.input_features &&
         num_classes == o.num_classes && point_mlp == o.point_mlp &&
         global_mlp == o.global_mlp && fp_mlps == o.fp_mlps && offset_scale == o.offset_scale &&
         head == o.head && seed == o.seed;
}

}  // namespace radar::models
