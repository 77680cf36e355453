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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "radar_anomaly/autodiff/tensor.hpp"

namespace radar::ad {

template <typename T>
using NamedTensors = std::vector<std::pair<std::string, Tensor<T>>>;

inline constexpr int kParameterFormatVersion = 1;

// Text format:
//   radar-anomaly-parameters <version> <float32|float64>
//   <count>
//   then per tensor a line "<name> <rank> <dims...>" and a line of values.
template <typename T>
void save_parameters(const NamedTensors<T>& params, std::ostream& out);
template <typename T>
void save_parameters(const NamedTensors<T>& params, const std::filesystem::path& path);

// Overwrites the values of `params` by name. Every name must be present in
// the file with a matching shape.
template <typename T>
void load_parameters(std::istream& in, NamedTensors<T>& params);
template <typename T>
void load_parameters(const std::filesystem::path& path, NamedTensors<T>& params);

}  // namespace radar::ad
