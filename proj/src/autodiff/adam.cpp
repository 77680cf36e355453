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

#include "radar_anomaly/autodiff/adam.hpp"

#include <cmath>

#include "radar_anomaly/errors.hpp"

namespace radar::ad {

template <typename T>
void adam_step(std::span<Tensor<T>> params, std::span<const std::vector<T>> grads,
               AdamState<T>& state, double lr) {
  if (grads.size() != params.size()) {
    throw ShapeError("adam_step: " + std::to_string(params.size()) + " parameters but " +
                     std::to_string(grads.size()) + " gradients");
  }
  if (state.first_moment.empty()) {
    for (const Tensor<T>& p : params) {
      state.first_moment.emplace_back(p.numel(), T(0));
      state.second_moment.emplace_back(p.numel(), T(0));
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw ShapeError("adam_step: optimizer state tracks a different parameter list");
  }

  const AdamOptions& o = state.options;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(o.beta1, t);
  const double bc2 = 1.0 - std::pow(o.beta2, t);
  for (std::size_t p = 0; p < params.size(); ++p) {
    auto data = params[p].mutable_data();
    const auto& g = grads[p];
    auto& m = state.first_moment[p];
    auto& v = state.second_moment[p];
    if (g.size() != data.size() || m.size() != data.size()) {
      throw ShapeError("adam_step: gradient " + std::to_string(p) + " has " +
                       std::to_string(g.size()) + " values for a parameter of " +
                       std::to_string(data.size()));
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double gi = static_cast<double>(g[i]);
      const double mi = o.beta1 * static_cast<double>(m[i]) + (1.0 - o.beta1) * gi;
      const double vi = o.beta2 * static_cast<double>(v[i]) + (1.0 - o.beta2) * gi * gi;
      m[i] = static_cast<T>(mi);
      v[i] = static_cast<T>(vi);
      const double update = lr * (mi / bc1) / (std::sqrt(vi / bc2) + o.eps);
      data[i] = static_cast<T>(static_cast<double>(data[i]) - update);
    }
  }
}

template <typename T>
void adam_step(std::span<Tensor<T>> params, AdamState<T>& state, double lr) {
  std::vector<std::vector<T>> grads;
  grads.reserve(params.size());
  for (const Tensor<T>& p : params) {
    if (p.grad().size() == p.numel()) {
      grads.emplace_back(p.grad().begin(), p.grad().end());
    } else {
      grads.emplace_back(p.numel(), T(0));
    }
  }
  adam_step<T>(params, grads, state, lr);
}

double step_decay_lr(std::size_t epoch, double base, std::size_t halve_every) {
  if (halve_every == 0) return base;
  return base * std::ldexp(1.0, -static_cast<int>(epoch / halve_every));
}

template void adam_step(std::span<Tensor<float>>, std::span<const std::vector<float>>,
                        AdamState<float>&, double);
template void adam_step(std::span<Tensor<double>>, std::span<const std::vector<double>>,
                        AdamState<double>&, double);
template void adam_step(std::span<Tensor<float>>, AdamState<float>&, double);
template void adam_step(std::span<Tensor<double>>, AdamState<double>&, double);

}  // namespace radar::ad
