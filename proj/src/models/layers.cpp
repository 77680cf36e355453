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

#include "radar_anomaly/models/layers.hpp"

#include <algorithm>
#include <numeric>

#include "radar_anomaly/autodiff/ops.hpp"
#include "radar_anomaly/errors.hpp"

namespace radar::models {

using grouping::Point2;

template <typename T>
ad::Tensor<T> apply_mlp(const ad::Tensor<T>& x, const Mlp<T>& mlp, bool relu_last) {
  ad::Tensor<T> h = x;
  for (std::size_t i = 0; i < mlp.size(); ++i) {
    h = ad::add_bias(ad::matmul(h, mlp[i].weight), mlp[i].bias);
    if (relu_last || i + 1 < mlp.size()) h = ad::relu(h);
  }
  return h;
}

template <typename T>
SetAbstractionOutput<T> set_abstraction(std::span<const Point2> positions,
                                        const ad::Tensor<T>& features,
                                        std::span<const std::size_t> centroids,
                                        std::span<const grouping::GroupSpec> specs,
                                        std::span<const Mlp<T>> mlps, double offset_scale) {
  if (specs.empty()) throw Error("set_abstraction: no group specs");
  if (specs.size() != mlps.size()) throw Error("set_abstraction: one MLP per group spec required");
  if (features.rank() != 2 || features.dim(0) != positions.size()) {
    throw ShapeError("set_abstraction: features " + ad::to_string(features.shape()) + " for " +
                     std::to_string(positions.size()) + " positions");
  }
  SetAbstractionOutput<T> out;
  const std::size_t m = centroids.size();
  out.positions.reserve(m);
  for (std::size_t c : centroids) out.positions.push_back(positions[c]);

  std::vector<ad::Tensor<T>> pooled;
  pooled.reserve(specs.size());
  const double inv_scale = 1.0 / offset_scale;
  const std::size_t channels = features.dim(1);
  const std::vector<std::size_t> offset_rows{0, 1};
  std::vector<std::size_t> feature_rows(channels);
  std::iota(feature_rows.begin(), feature_rows.end(), std::size_t{2});
  for (std::size_t s = 0; s < specs.size(); ++s) {
    grouping::GroupingResult groups = grouping::query(positions, centroids, specs[s]);
    const std::size_t K = groups.max_samples;
    std::vector<T> offsets(m * K * 2);
    for (std::size_t c = 0; c < m; ++c) {
      const Point2 pc = positions[centroids[c]];
      for (std::size_t j = 0; j < K; ++j) {
        const Point2 p = positions[groups.indices[c * K + j]];
        offsets[(c * K + j) * 2] = static_cast<T>((p.x - pc.x) * inv_scale);
        offsets[(c * K + j) * 2 + 1] = static_cast<T>((p.y - pc.y) * inv_scale);
      }
    }
    // The first layer is linear in [offset, feature], so the feature half is
    // applied once per point and gathered instead of once per group member.
    const Mlp<T>& mlp = mlps[s];
    if (mlp.empty() || mlp.front().weight.dim(0) != 2 + channels) {
      throw ShapeError("set_abstraction: first MLP layer must take " +
                       std::to_string(2 + channels) + " inputs");
    }
    const ad::Tensor<T>& w = mlp.front().weight;
    const ad::Tensor<T> w_offset = ad::gather(w, offset_rows, {2});
    const ad::Tensor<T> w_feature = ad::gather(w, feature_rows, {channels});
    ad::Tensor<T> h = ad::add(
        ad::matmul(ad::Tensor<T>::constant({m, K, 2}, std::move(offsets)), w_offset),
        ad::gather(ad::matmul(features, w_feature), groups.indices, {m, K}));
    h = ad::relu(ad::add_bias(h, mlp.front().bias));
    const Mlp<T> rest(mlp.begin() + 1, mlp.end());
    pooled.push_back(ad::max_reduce(apply_mlp(h, rest), 1));
    out.groups.push_back(std::move(groups));
  }
  out.features = pooled.size() == 1 ? pooled.front() : ad::concat<T>(pooled, 1);
  return out;
}

Interpolation interpolation_weights(std::span<const Point2> fine, std::span<const Point2> coarse,
                                    std::size_t k, double eps) {
  if (coarse.empty()) throw Error("interpolation_weights: no coarse points");
  Interpolation out;
  out.k = std::min(k, coarse.size());
  out.indices = grouping::knn(fine, coarse, out.k);
  out.weights.resize(out.indices.size());
  std::vector<double> d2(out.k);
  for (std::size_t i = 0; i < fine.size(); ++i) {
    std::size_t coincident = 0;
    for (std::size_t j = 0; j < out.k; ++j) {
      const Point2 c = coarse[out.indices[i * out.k + j]];
      const double dx = c.x - fine[i].x;
      const double dy = c.y - fine[i].y;
      d2[j] = dx * dx + dy * dy;
      if (d2[j] == 0.0) ++coincident;
    }
    double* w = out.weights.data() + i * out.k;
    if (coincident > 0) {
      for (std::size_t j = 0; j < out.k; ++j) {
        w[j] = d2[j] == 0.0 ? 1.0 / static_cast<double>(coincident) : 0.0;
      }
      continue;
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < out.k; ++j) {
      w[j] = 1.0 / (d2[j] + eps);
      sum += w[j];
    }
    for (std::size_t j = 0; j < out.k; ++j) w[j] /= sum;
  }
  return out;
}

template <typename T>
ad::Tensor<T> feature_propagation(std::span<const Point2> fine, std::span<const Point2> coarse,
                                  const ad::Tensor<T>& coarse_features,
                                  const ad::Tensor<T>& skip_features, const Mlp<T>& mlp) {
  if (coarse_features.rank() != 2 || coarse_features.dim(0) != coarse.size()) {
    throw ShapeError("feature_propagation: coarse features " +
                     ad::to_string(coarse_features.shape()) + " for " +
                     std::to_string(coarse.size()) + " coarse points");
  }
  const Interpolation interp = interpolation_weights(fine, coarse);
  const std::size_t nf = fine.size();
  const std::size_t nc = coarse.size();
  std::vector<T> dense(nf * nc, T(0));
  for (std::size_t i = 0; i < nf; ++i) {
    for (std::size_t j = 0; j < interp.k; ++j) {
      dense[i * nc + interp.indices[i * interp.k + j]] +=
          static_cast<T>(interp.weights[i * interp.k + j]);
    }
  }
  ad::Tensor<T> x =
      ad::matmul(ad::Tensor<T>::constant({nf, nc}, std::move(dense)), coarse_features);
  if (skip_features.defined()) {
    const std::array<ad::Tensor<T>, 2> parts{x, skip_features};
    x = ad::concat<T>(parts, 1);
  }
  return apply_mlp(x, mlp);
}

#define RADAR_LAYERS_INSTANTIATE(T)                                                            \
  template ad::Tensor<T> apply_mlp(const ad::Tensor<T>&, const Mlp<T>&, bool);                 \
  template SetAbstractionOutput<T> set_abstraction(                                            \
      std::span<const Point2>, const ad::Tensor<T>&, std::span<const std::size_t>,             \
      std::span<const grouping::GroupSpec>, std::span<const Mlp<T>>, double);                  \
  template ad::Tensor<T> feature_propagation(std::span<const Point2>, std::span<const Point2>, \
                                             const ad::Tensor<T>&, const ad::Tensor<T>&,       \
                                             const Mlp<T>&);

RADAR_LAYERS_INSTANTIATE(float)
RADAR_LAYERS_INSTANTIATE(double)

#undef RADAR_LAYERS_INSTANTIATE

}  // namespace radar::models
