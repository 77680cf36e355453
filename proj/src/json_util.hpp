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

#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "radar_anomaly/errors.hpp"

namespace radar::detail {

/// Reads optional keys of a JSON object into existing values and rejects keys
/// nobody asked for.
class StrictObject {
 public:
  StrictObject(const nlohmann::json& json, std::string context)
      : json_(json), context_(std::move(context)) {
    if (!json_.is_object()) throw ValidationError(context_ + ": expected a JSON object");
  }

  template <typename V>
  void read(const char* key, V& value) {
    seen_.insert(key);
    const auto it = json_.find(key);
    if (it == json_.end()) return;
    try {
      value = it->template get<V>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(context_ + "." + key + ": " + e.what());
    }
  }

  /// Returns the sub-object under `key`, or nullptr when absent.
  const nlohmann::json* child(const char* key) {
    seen_.insert(key);
    const auto it = json_.find(key);
    return it == json_.end() ? nullptr : &*it;
  }

  const std::string& context() const noexcept { return context_; }

  void finish() const {
    for (const auto& [key, value] : json_.items()) {
      if (seen_.count(key) == 0) throw ValidationError(context_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const nlohmann::json& json_;
  std::string context_;
  std::set<std::string> seen_;
};

}  // namespace radar::detail
