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

#include <span>

#include "radar_anomaly/autodiff/tensor.hpp"

namespace radar::ad {

// a: (..., K) times b: (K, N) gives (..., N).
template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b);

// Elementwise sum of equally shaped tensors.
template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b);

// x: (..., N) plus bias: (N).
template <typename T>
Tensor<T> add_bias(const Tensor<T>& x, const Tensor<T>& bias);

// Gradient passes where the input is strictly positive.
template <typename T>
Tensor<T> relu(const Tensor<T>& x);

// All dimensions except `axis` must agree.
template <typename T>
Tensor<T> concat(std::span<const Tensor<T>> parts, std::size_t axis);

// Selects rows of src (N, rest...) by index; the output has shape
// index_shape ++ rest. Backward scatter-adds.
template <typename T>
Tensor<T> gather(const Tensor<T>& src, std::span<const std::size_t> indices,
                 const Shape& index_shape);

// Maximum over `axis`, which is removed from the shape. The gradient goes to
// the first maximal element.
template <typename T>
Tensor<T> max_reduce(const Tensor<T>& x, std::size_t axis);

template <typename T>
Tensor<T> reshape(const Tensor<T>& x, const Shape& shape);

// Mean over rows of weight[label] * -log softmax(logits)[label].
// logits: (n, C); labels in [0, C); one positive weight per class.
template <typename T>
Tensor<T> weighted_softmax_cross_entropy(const Tensor<T>& logits, std::span<const int> labels,
                                         std::span<const double> class_weights);

}  // namespace radar::ad
