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

namespace radar::grouping {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

enum class QueryForm { Circle, Ring };

/// Neighborhood query description. For a Circle `size` is the radius; for a
/// Ring it is the full radial width of an annulus centered at the sensor
/// origin and passing through the centroid.
struct GroupSpec {
  QueryForm form = QueryForm::Circle;
  double size = 1.0;
  std::size_t max_samples = 16;

  void validate() const;
};

/// Per-centroid index lists into the query cloud, each exactly
/// `max_samples` long. `candidates[c]` counts the points that satisfied the
/// query predicate before truncation or fill.
struct GroupingResult {
  std::size_t max_samples = 0;
  std::vector<std::size_t> indices;  // centroid-major
  std::vector<std::size_t> candidates;

  std::size_t num_centroids() const noexcept { return candidates.size(); }
  std::span<const std::size_t> group(std::size_t c) const {
    return {indices.data() + c * max_samples, max_samples};
  }
};

// Neighbors inside `radius` (inclusive) of each centroid, nearest first, ties
// broken by range then azimuth then index. Short groups are filled by
// repeating their first entry. Centroids are indices into `cloud`.
GroupingResult ball_query(std::span<const Point2> cloud, std::span<const std::size_t> centroids,
                          double radius, std::size_t max_samples);

// Neighbors whose range differs from the centroid's range by at most
// width / 2, smallest range difference first, ties broken by azimuth then
// range then index. Unbounded in azimuth.
GroupingResult ring_query(std::span<const Point2> cloud, std::span<const std::size_t> centroids,
                          double width, std::size_t max_samples);

GroupingResult query(std::span<const Point2> cloud, std::span<const std::size_t> centroids,
                     const GroupSpec& spec);

/// Deterministic farthest-point sampling. Starts at the point of maximum
/// range; returns `count` distinct indices in selection order.
std::vector<std::size_t> farthest_point_sample(std::span<const Point2> cloud, std::size_t count);

/// `k` nearest reference points per query (Euclidean), ties by range then
/// azimuth then index. Query-major, k entries per query.
std::vector<std::size_t> knn(std::span<const Point2> queries, std::span<const Point2> reference,
                             std::size_t k);

}  // namespace radar::grouping
