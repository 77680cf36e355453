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

#include <array>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "radar_anomaly/autodiff/checkpoint.hpp"
#include "radar_anomaly/autodiff/tensor.hpp"
#include "radar_anomaly/core.hpp"
#include "radar_anomaly/grouping.hpp"
#include "radar_anomaly/models/config.hpp"
#include "radar_anomaly/models/layers.hpp"

namespace radar::models {

/// Network input for one frame.
struct ModelInput {
  std::vector<grouping::Point2> positions;  // meters, used by the query kernels
  std::vector<double> features;             // rows x input_features, standardized
  // Optional row -> source row map of a padded frame. Rows that duplicate a
  // source share its computation; sources map to themselves.
  std::vector<std::size_t> origin;

  std::size_t rows() const noexcept { return positions.size(); }
};

struct SegmentationOutput {
  std::size_t rows = 0;
  std::size_t classes = 2;
  std::vector<double> logits;  // rows x classes
  std::vector<Label> predicted;
};

/// Candidate counts seen by the query kernels, per query form.
struct GroupingStats {
  std::array<std::size_t, 2> queries{};     // indexed by QueryForm
  std::array<std::size_t, 2> candidates{};  // indexed by QueryForm

  double mean_candidates(grouping::QueryForm form) const;
  double mean_candidates() const;
};

template <typename T>
class SegmentationModel {
 public:
  explicit SegmentationModel(ModelConfig config);

  const ModelConfig& config() const noexcept { return config_; }
  ad::NamedTensors<T>& parameters() noexcept { return params_; }
  const ad::NamedTensors<T>& parameters() const noexcept { return params_; }
  std::vector<ad::Tensor<T>> parameter_tensors() const;
  std::size_t parameter_count() const;

  /// Per-row class logits (rows x classes), recording the graph when
  /// gradients are enabled.
  ad::Tensor<T> forward(const ModelInput& input, GroupingStats* stats = nullptr) const;

  /// Forward pass without graph recording; argmax with ties going to Normal.
  SegmentationOutput predict(const ModelInput& input, GroupingStats* stats = nullptr) const;

  /// Deep copy with independent parameter storage.
  SegmentationModel clone() const;

 private:
  ad::Tensor<T> forward_unique(const ModelInput& input, GroupingStats* stats) const;
  ad::Tensor<T> forward_pointnet(const ad::Tensor<T>& features) const;
  ad::Tensor<T> forward_pointnetpp(const std::vector<grouping::Point2>& positions,
                                   const ad::Tensor<T>& features, GroupingStats* stats) const;
  SegmentationModel(ModelConfig config, ad::NamedTensors<T> params);
  void build();
  Mlp<T> make_mlp(const std::string& prefix, std::size_t in, const std::vector<std::size_t>& widths);
  Dense<T> make_dense(const std::string& name, std::size_t in, std::size_t out);

  ModelConfig config_;
  ad::NamedTensors<T> params_;
  // When set, build() binds existing tensors in order instead of initializing.
  ad::NamedTensors<T> bind_from_;
  std::size_t bind_cursor_ = 0;
  std::mt19937_64 init_rng_;

  // Layer views into params_.
  Mlp<T> point_mlp_;
  Mlp<T> global_mlp_;
  std::vector<std::vector<Mlp<T>>> sa_mlps_;
  std::vector<Mlp<T>> fp_mlps_;
  Mlp<T> head_;
};

extern template class SegmentationModel<float>;
extern template class SegmentationModel<double>;

}  // namespace radar::models
