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

#include "radar_anomaly/models/model.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "radar_anomaly/autodiff/ops.hpp"
#include "radar_anomaly/errors.hpp"

namespace radar::models {

using grouping::Point2;
using grouping::QueryForm;

double GroupingStats::mean_candidates(QueryForm form) const {
  const auto i = static_cast<std::size_t>(form);
  return queries[i] == 0 ? 0.0
                         : static_cast<double>(candidates[i]) / static_cast<double>(queries[i]);
}

double GroupingStats::mean_candidates() const {
  const std::size_t q = queries[0] + queries[1];
  return q == 0 ? 0.0 : static_cast<double>(candidates[0] + candidates[1]) / static_cast<double>(q);
}

template <typename T>
SegmentationModel<T>::SegmentationModel(ModelConfig config) : config_(std::move(config)) {
  config_.validate();
  build();
}

template <typename T>
SegmentationModel<T>::SegmentationModel(ModelConfig config, ad::NamedTensors<T> params)
    : config_(std::move(config)), bind_from_(std::move(params)) {
  build();
  bind_from_.clear();
}

template <typename T>
Dense<T> SegmentationModel<T>::make_dense(const std::string& name, std::size_t in,
                                          std::size_t out) {
  Dense<T> d;
  if (!bind_from_.empty()) {
    d.weight = bind_from_.at(bind_cursor_++).second;
    d.bias = bind_from_.at(bind_cursor_++).second;
  } else {
    // Glorot-uniform weights drawn in construction order; zero biases.
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    std::vector<T> w(in * out);
    for (T& v : w) v = static_cast<T>(dist(init_rng_));
    d.weight = ad::Tensor<T>::parameter({in, out}, std::move(w));
    d.bias = ad::Tensor<T>::parameter({out}, std::vector<T>(out, T(0)));
  }
  params_.emplace_back(name + ".weight", d.weight);
  params_.emplace_back(name + ".bias", d.bias);
  return d;
}

template <typename T>
Mlp<T> SegmentationModel<T>::make_mlp(const std::string& prefix, std::size_t in,
                                      const std::vector<std::size_t>& widths) {
  Mlp<T> mlp;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    mlp.push_back(make_dense(prefix + "." + std::to_string(i), in, widths[i]));
    in = widths[i];
  }
  return mlp;
}

template <typename T>
void SegmentationModel<T>::build() {
  init_rng_.seed(config_.seed);
  params_.clear();
  bind_cursor_ = 0;
  const ModelConfig& c = config_;
  std::size_t head_in = 0;
  if (c.variant == Variant::PointNet) {
    point_mlp_ = make_mlp("point", c.input_features, c.point_mlp);
    global_mlp_ = make_mlp("global", c.point_mlp.back(), c.global_mlp);
    head_in = c.point_mlp.back() + c.global_mlp.back();
  } else {
    std::vector<std::size_t> level_width{c.input_features};
    sa_mlps_.clear();
    for (std::size_t l = 0; l < c.sa_layers.size(); ++l) {
      const auto& layer = c.sa_layers[l];
      std::vector<Mlp<T>> per_spec;
      for (std::size_t s = 0; s < layer.groups.size(); ++s) {
        per_spec.push_back(make_mlp("sa" + std::to_string(l + 1) + ".g" + std::to_string(s),
                                    level_width.back() + 2, layer.mlp));
      }
      sa_mlps_.push_back(std::move(per_spec));
      level_width.push_back(layer.groups.size() * layer.mlp.back());
    }
    fp_mlps_.clear();
    const std::size_t L = c.sa_layers.size();
    std::size_t coarse_width = level_width[L];
    for (std::size_t i = 0; i < L; ++i) {
      const std::size_t level = L - i;
      fp_mlps_.push_back(make_mlp("fp" + std::to_string(level),
                                  coarse_width + level_width[level - 1], c.fp_mlps[i]));
      coarse_width = c.fp_mlps[i].back();
    }
    head_in = coarse_width;
  }
  head_ = make_mlp("head", head_in, c.head);
  head_.push_back(make_dense("head.out", c.head.empty() ? head_in : c.head.back(), c.num_classes));
}

template <typename T>
std::vector<ad::Tensor<T>> SegmentationModel<T>::parameter_tensors() const {
  std::vector<ad::Tensor<T>> out;
  out.reserve(params_.size());
  for (const auto& [name, t] : params_) out.push_back(t);
  return out;
}

template <typename T>
std::size_t SegmentationModel<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [name, t] : params_) n += t.numel();
  return n;
}

template <typename T>
ad::Tensor<T> SegmentationModel<T>::forward(const ModelInput& input, GroupingStats* stats) const {
  const std::size_t n = input.rows();
  if (n == 0) throw ValidationError("model input has no rows");
  if (n > kMaxTargets) {
    throw ValidationError("model input has " + std::to_string(n) + " rows, limit is " +
                          std::to_string(kMaxTargets));
  }
  if (input.features.size() != n * config_.input_features) {
    throw ShapeError("model input holds " + std::to_string(input.features.size()) +
                     " feature values for " + std::to_string(n) + " rows of " +
                     std::to_string(config_.input_features));
  }
  if (input.origin.empty()) return forward_unique(input, stats);

  if (input.origin.size() != n) throw ShapeError("origin map length differs from row count");
  // Evaluate the source rows once and copy their logits to the duplicates.
  ModelInput unique;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (input.origin[i] != i) continue;
    slot[i] = unique.positions.size();
    unique.positions.push_back(input.positions[i]);
    const auto row = input.features.begin() + static_cast<std::ptrdiff_t>(i * config_.input_features);
    unique.features.insert(unique.features.end(), row,
                           row + static_cast<std::ptrdiff_t>(config_.input_features));
  }
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = input.origin[i];
    if (src >= n || slot[src] == n) {
      throw ValidationError("origin map entry " + std::to_string(i) + " does not name a source row");
    }
    rows[i] = slot[src];
  }
  return ad::gather(forward_unique(unique, stats), rows, {n});
}

template <typename T>
ad::Tensor<T> SegmentationModel<T>::forward_unique(const ModelInput& input,
                                                   GroupingStats* stats) const {
  std::vector<T> values(input.features.begin(), input.features.end());
  const auto features =
      ad::Tensor<T>::constant({input.rows(), config_.input_features}, std::move(values));
  return config_.variant == Variant::PointNet
             ? forward_pointnet(features)
             : forward_pointnetpp(input.positions, features, stats);
}

template <typename T>
ad::Tensor<T> SegmentationModel<T>::forward_pointnet(const ad::Tensor<T>& features) const {
  const std::size_t n = features.dim(0);
  const ad::Tensor<T> local = apply_mlp(features, point_mlp_);
  const ad::Tensor<T> pooled = ad::max_reduce(apply_mlp(local, global_mlp_), 0);
  const std::size_t width = pooled.dim(0);
  const std::vector<std::size_t> broadcast(n, 0);
  const std::array<ad::Tensor<T>, 2> parts{
      local, ad::gather(ad::reshape(pooled, {1, width}), broadcast, {n})};
  return apply_mlp(ad::concat<T>(parts, 1), head_, false);
}

template <typename T>
ad::Tensor<T> SegmentationModel<T>::forward_pointnetpp(const std::vector<Point2>& positions,
                                                       const ad::Tensor<T>& features,
                                                       GroupingStats* stats) const {
  const std::size_t L = config_.sa_layers.size();
  std::vector<std::vector<Point2>> level_pos{positions};
  std::vector<ad::Tensor<T>> level_feat{features};
  for (std::size_t l = 0; l < L; ++l) {
    const auto& layer = config_.sa_layers[l];
    const auto& pos = level_pos.back();
    std::vector<std::size_t> centroids;
    if (layer.centroids == kAllCentroids) {
      centroids.resize(pos.size());
      std::iota(centroids.begin(), centroids.end(), std::size_t{0});
    } else {
      centroids = grouping::farthest_point_sample(pos, std::min(layer.centroids, pos.size()));
    }
    auto sa = set_abstraction<T>(pos, level_feat.back(), centroids, layer.groups, sa_mlps_[l],
                                 config_.offset_scale);
    if (stats != nullptr) {
      for (std::size_t s = 0; s < layer.groups.size(); ++s) {
        const auto form = static_cast<std::size_t>(layer.groups[s].form);
        stats->queries[form] += sa.groups[s].num_centroids();
        for (std::size_t count : sa.groups[s].candidates) stats->candidates[form] += count;
      }
    }
    level_pos.push_back(std::move(sa.positions));
    level_feat.push_back(std::move(sa.features));
  }
  ad::Tensor<T> feat = level_feat[L];
  for (std::size_t i = 0; i < L; ++i) {
    const std::size_t level = L - i;
    feat = feature_propagation<T>(level_pos[level - 1], level_pos[level], feat,
                                  level_feat[level - 1], fp_mlps_[i]);
  }
  return apply_mlp(feat, head_, false);
}

template <typename T>
SegmentationOutput SegmentationModel<T>::predict(const ModelInput& input,
                                                 GroupingStats* stats) const {
  ad::NoGradGuard guard;
  const ad::Tensor<T> logits = forward(input, stats);
  SegmentationOutput out;
  out.rows = logits.dim(0);
  out.classes = logits.dim(1);
  out.logits.assign(logits.data().begin(), logits.data().end());
  out.predicted.resize(out.rows);
  for (std::size_t i = 0; i < out.rows; ++i) {
    const double* row = out.logits.data() + i * out.classes;
    out.predicted[i] = row[1] > row[0] ? Label::Anomalous : Label::Normal;
  }
  return out;
}

template <typename T>
SegmentationModel<T> SegmentationModel<T>::clone() const {
  ad::NamedTensors<T> copy;
  copy.reserve(params_.size());
  for (const auto& [name, t] : params_) {
    copy.emplace_back(name, ad::Tensor<T>::parameter(
                                t.shape(), std::vector<T>(t.data().begin(), t.data().end())));
  }
  return SegmentationModel(config_, std::move(copy));
}

template class SegmentationModel<float>;
template class SegmentationModel<double>;

}  // namespace radar::models
