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

#include <cstddef>
#include <span>
#include <vector>

#include "radar_anomaly/autodiff/tensor.hpp"
#include "radar_anomaly/grouping.hpp"

namespace radar::models {

template <typename T>
struct Dense {
  ad::Tensor<T> weight;  // (in, out)
  ad::Tensor<T> bias;    // (out)
};

template <typename T>
using Mlp = std::vector<Dense<T>>;

/// Row-wise MLP over the last axis. ReLU after every layer, optionally
/// except the last.
template <typename T>
ad::Tensor<T> apply_mlp(const ad::Tensor<T>& x, const Mlp<T>& mlp, bool relu_last = true);

template <typename T>
struct SetAbstractionOutput {
  std::vector<grouping::Point2> positions;  // centroid positions
  ad::Tensor<T> features;                   // (centroids, sum of group widths)
  std::vector<grouping::GroupingResult> groups;
};

// For each group spec: query neighbors, express their positions relative to
// the centroid (divided by offset_scale), append their features, run that
// spec's MLP per neighbor and max-pool per group. Per-spec results are
// concatenated along the feature axis.
template <typename T>
SetAbstractionOutput<T> set_abstraction(std::span<const grouping::Point2> positions,
                                        const ad::Tensor<T>& features,
                                        std::span<const std::size_t> centroids,
                                        std::span<const grouping::GroupSpec> specs,
                                        std::span<const Mlp<T>> mlps, double offset_scale);

/// Inverse-squared-distance weights over the k nearest coarse points.
struct Interpolation {
  std::size_t k = 0;
  std::vector<std::size_t> indices;  // fine-major, k per fine point
  std::vector<double> weights;       // sums to one per fine point
};

inline constexpr double kInterpolationEps = 1e-8;

// w_j proportional to 1 / (d_j^2 + eps) over min(k, coarse) neighbors. A
// coarse point that coincides with the fine point takes the whole weight.
Interpolation interpolation_weights(std::span<const grouping::Point2> fine,
                                    std::span<const grouping::Point2> coarse, std::size_t k = 3,
                                    double eps = kInterpolationEps);

// Interpolates coarse features onto the fine points, appends the skip
// features (if defined) and applies the unit MLP.
template <typename T>
ad::Tensor<T> feature_propagation(std::span<const grouping::Point2> fine,
                                  std::span<const grouping::Point2> coarse,
                                  const ad::Tensor<T>& coarse_features,
                                  const ad::Tensor<T>& skip_features, const Mlp<T>& mlp);

}  // namespace radar::models
