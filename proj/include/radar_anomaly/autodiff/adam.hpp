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

#include <cstdint>
#include <span>
#include <vector>

#include "radar_anomaly/autodiff/tensor.hpp"

namespace radar::ad {

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename T>
struct AdamState {
  AdamOptions options;
  std::int64_t step = 0;
  std::vector<std::vector<T>> first_moment;
  std::vector<std::vector<T>> second_moment;
};

/// One bias-corrected Adam update of `params` with explicit gradients.
template <typename T>
void adam_step(std::span<Tensor<T>> params, std::span<const std::vector<T>> grads,
               AdamState<T>& state, double lr);

/// Same, reading each parameter's accumulated gradient.
template <typename T>
void adam_step(std::span<Tensor<T>> params, AdamState<T>& state, double lr);

/// Step decay: base * 0.5^floor(epoch / halve_every).
double step_decay_lr(std::size_t epoch, double base = 2e-4, std::size_t halve_every = 10);

}  // namespace radar::ad
