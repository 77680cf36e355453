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

#include "radar_anomaly/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "radar_anomaly/core.hpp"
#include "radar_anomaly/errors.hpp"

namespace radar::grouping {
namespace {

struct Polar {
  double r;
  double phi;
};

std::vector<Polar> polar_of(std::span<const Point2> cloud) {
  std::vector<Polar> out;
  out.reserve(cloud.size());
  for (const Point2& p : cloud) {
    const PolarCoord pc = to_polar(p.x, p.y);
    out.push_back({pc.r, pc.phi});
  }
  return out;
}

void check_inputs(std::span<const Point2> cloud, std::span<const std::size_t> centroids,
                  double size, std::size_t max_samples, const char* what) {
  if (cloud.empty()) throw Error(std::string(what) + ": empty cloud");
  if (!(size > 0.0)) throw Error(std::string(what) + ": size must be positive");
  if (max_samples == 0) throw Error(std::string(what) + ": max_samples must be at least 1");
  for (std::size_t c : centroids) {
    if (c >= cloud.size()) {
      throw Error(std::string(what) + ": centroid index " + std::to_string(c) +
                  " outside cloud of " + std::to_string(cloud.size()));
    }
  }
}

// Candidates carry a primary key plus two secondary keys; the index breaks
// any remaining tie.
struct Candidate {
  double key0;
  double key1;
  double key2;
  std::size_t index;

  bool operator<(const Candidate& o) const noexcept {
    return std::tie(key0, key1, key2, index) < std::tie(o.key0, o.key1, o.key2, o.index);
  }
};

void emit_group(std::vector<Candidate>& cands, std::size_t centroid, std::size_t max_samples,
                GroupingResult& out) {
  out.candidates.push_back(cands.size());
  const std::size_t take = std::min(cands.size(), max_samples);
  std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(take), cands.end());
  const std::size_t fill = take > 0 ? cands.front().index : centroid;
  for (std::size_t i = 0; i < take; ++i) out.indices.push_back(cands[i].index);
  for (std::size_t i = take; i < max_samples; ++i) out.indices.push_back(fill);
}

}  // namespace

void GroupSpec::validate() const {
  if (!(size > 0.0)) throw ValidationError("group size must be positive");
  if (max_samples == 0) throw ValidationError("group max_samples must be at least 1");
}

GroupingResult ball_query(std::span<const Point2> cloud, std::span<const std::size_t> centroids,
                          double radius, std::size_t max_samples) {
  check_inputs(cloud, centroids, radius, max_samples, "ball_query");
  const auto polar = polar_of(cloud);
  const double r2 = radius * radius;

  GroupingResult out;
  out.max_samples = max_samples;
  out.indices.reserve(centroids.size() * max_samples);
  out.candidates.reserve(centroids.size());
  std::vector<Candidate> cands;
  cands.reserve(cloud.size());
  for (std::size_t c : centroids) {
    cands.clear();
    const Point2 pc = cloud[c];
    for (std::size_t j = 0; j < cloud.size(); ++j) {
      const double dx = cloud[j].x - pc.x;
      const double dy = cloud[j].y - pc.y;
      const double d2 = dx * dx + dy * dy;
      if (d2 <= r2) cands.push_back({d2, polar[j].r, polar[j].phi, j});
    }
    emit_group(cands, c, max_samples, out);
  }
  return out;
}

GroupingResult ring_query(std::span<const Point2> cloud, std::span<const std::size_t> centroids,
                          double width, std::size_t max_samples) {
  check_inputs(cloud, centroids, width, max_samples, "ring_query");
  const auto polar = polar_of(cloud);
  const double half = 0.5 * width;

  // Sorting by range turns each query into a contiguous window.
  std::vector<std::size_t> by_range(cloud.size());
  for (std::size_t i = 0; i < by_range.size(); ++i) by_range[i] = i;
  std::sort(by_range.begin(), by_range.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(polar[a].r, a) < std::tie(polar[b].r, b);
  });

  GroupingResult out;
  out.max_samples = max_samples;
  out.indices.reserve(centroids.size() * max_samples);
  out.candidates.reserve(centroids.size());
  std::vector<Candidate> cands;
  cands.reserve(cloud.size());
  for (std::size_t c : centroids) {
    cands.clear();
    const double rc = polar[c].r;
    // Start slightly early; membership is decided by the exact |dr| test.
    const double start = rc - half - 1e-9 * (1.0 + rc);
    auto lo = std::lower_bound(by_range.begin(), by_range.end(), start,
                               [&](std::size_t i, double v) { return polar[i].r < v; });
    for (auto it = lo; it != by_range.end(); ++it) {
      const std::size_t j = *it;
      const double dr = std::abs(polar[j].r - rc);
      if (polar[j].r > rc && dr > half) break;
      if (dr <= half) cands.push_back({dr, polar[j].phi, polar[j].r, j});
    }
    emit_group(cands, c, max_samples, out);
  }
  return out;
}

GroupingResult query(std::span<const Point2> cloud, std::span<const std::size_t> centroids,
                     const GroupSpec& spec) {
  return spec.form == QueryForm::Circle
             ? ball_query(cloud, centroids, spec.size, spec.max_samples)
             : ring_query(cloud, centroids, spec.size, spec.max_samples);
}

std::vector<std::size_t> farthest_point_sample(std::span<const Point2> cloud, std::size_t count) {
  if (count == 0 || count > cloud.size()) {
    throw Error("farthest_point_sample: requested " + std::to_string(count) +
                " samples from " + std::to_string(cloud.size()) + " points");
  }
  const auto polar = polar_of(cloud);
  // Preference among equally distant points: larger range, then smaller
  // azimuth, then index (only reached by exact duplicates).
  auto preferred = [&](std::size_t a, std::size_t b) {
    if (polar[a].r != polar[b].r) return polar[a].r > polar[b].r;
    if (polar[a].phi != polar[b].phi) return polar[a].phi < polar[b].phi;
    return a < b;
  };

  std::vector<std::size_t> selected;
  selected.reserve(count);
  std::size_t seed = 0;
  for (std::size_t i = 1; i < cloud.size(); ++i) {
    if (preferred(i, seed)) seed = i;
  }
  selected.push_back(seed);

  std::vector<double> min_d2(cloud.size(), std::numeric_limits<double>::infinity());
  std::vector<bool> taken(cloud.size(), false);
  taken[seed] = true;
  std::size_t last = seed;
  while (selected.size() < count) {
    std::size_t best = cloud.size();
    for (std::size_t j = 0; j < cloud.size(); ++j) {
      if (taken[j]) continue;
      const double dx = cloud[j].x - cloud[last].x;
      const double dy = cloud[j].y - cloud[last].y;
      min_d2[j] = std::min(min_d2[j], dx * dx + dy * dy);
      if (best == cloud.size() || min_d2[j] > min_d2[best] ||
          (min_d2[j] == min_d2[best] && preferred(j, best))) {
        best = j;
      }
    }
    taken[best] = true;
    selected.push_back(best);
    last = best;
  }
  return selected;
}

std::vector<std::size_t> knn(std::span<const Point2> queries, std::span<const Point2> reference,
                             std::size_t k) {
  if (reference.empty()) throw Error("knn: empty reference set");
  if (k == 0 || k > reference.size()) {
    throw Error("knn: k=" + std::to_string(k) + " outside [1, " +
                std::to_string(reference.size()) + "]");
  }
  const auto polar = polar_of(reference);
  std::vector<std::size_t> out;
  out.reserve(queries.size() * k);
  std::vector<Candidate> cands(reference.size());
  for (const Point2& q : queries) {
    for (std::size_t j = 0; j < reference.size(); ++j) {
      const double dx = reference[j].x - q.x;
      const double dy = reference[j].y - q.y;
      cands[j] = {dx * dx + dy * dy, polar[j].r, polar[j].phi, j};
    }
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(k), cands.end());
    for (std::size_t i = 0; i < k; ++i) out.push_back(cands[i].index);
  }
  return out;
}

}  // namespace radar::grouping
