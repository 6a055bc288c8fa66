// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference computations. Nothing here calls into the code paths it
// is used to check: distances, percentiles and intersections are recomputed
// from scratch.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "ballmapper/ballmapper.hpp"

namespace oracle {

inline double distance(const std::vector<double>& a, const std::vector<double>& b) {
  long double s = 0.0L;
  for (std::size_t k = 0; k < a.size(); ++k) s += (static_cast<long double>(a[k]) - b[k]) * (static_cast<long double>(a[k]) - b[k]);
  return static_cast<double>(std::sqrt(s));
}

inline std::vector<double> row(const bm::PointCloud& c, std::size_t i) {
  const auto p = c.point(i);
  return {p.begin(), p.end()};
}

// Sort and index: 1-indexed rank ceil(p/100 * n), clamped to [1, n].
inline double nearest_rank(std::vector<double> v, double pct) {
  std::sort(v.begin(), v.end());
  const auto n = static_cast<long long>(v.size());
  long long rank = static_cast<long long>(std::ceil(pct * static_cast<double>(n) / 100.0));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return v[static_cast<std::size_t>(rank - 1)];
}

// Every ball pair compared by set intersection of their member lists.
inline std::set<std::pair<std::size_t, std::size_t>> brute_force_edges(const std::vector<std::vector<std::size_t>>& memberships) {
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t a = 0; a < memberships.size(); ++a) {
    const std::set<std::size_t> sa(memberships[a].begin(), memberships[a].end());
    for (std::size_t b = a + 1; b < memberships.size(); ++b)
      for (std::size_t i : memberships[b])
        if (sa.count(i)) {
          edges.emplace(a, b);
          break;
        }
  }
  return edges;
}

struct CoverCheck {
  bool complete = true;   // every point within eps of some center
  bool separated = true;  // every center pair farther apart than eps
  bool memberships_exact = true;
};

// Brute-force scan using long-double distances; points within 1e-12 of the
// boundary are treated as ambiguous and skipped.
inline CoverCheck check_cover(const bm::PointCloud& cloud, const bm::EpsilonNet& net) {
  CoverCheck r;
  const double eps = net.epsilon;
  const double tol = 1e-12;
  std::vector<std::vector<double>> centers;
  for (auto c : net.centers) centers.push_back(row(cloud, c));
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = row(cloud, i);
    bool covered = false;
    for (const auto& c : centers)
      if (distance(p, c) <= eps + tol) {
        covered = true;
        break;
      }
    r.complete = r.complete && covered;
  }
  for (std::size_t a = 0; a < centers.size(); ++a)
    for (std::size_t b = a + 1; b < centers.size(); ++b)
      if (!(distance(centers[a], centers[b]) > eps - tol)) r.separated = false;
  for (std::size_t b = 0; b < centers.size(); ++b) {
    std::set<std::size_t> members(net.memberships[b].begin(), net.memberships[b].end());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const double d = distance(row(cloud, i), centers[b]);
      if (std::abs(d - eps) <= tol) continue;
      if ((d < eps) != (members.count(i) == 1)) r.memberships_exact = false;
    }
  }
  return r;
}

inline bm::PointCloud random_cloud(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::string> names;
  for (std::size_t j = 0; j < d; ++j) names.push_back("a" + std::to_string(j));
  bm::PointCloud cloud(names);
  std::vector<double> p(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : p) v = u(rng);
    cloud.push_back(p);
  }
  return cloud;
}

// Graph from explicit edges; each ball gets a single member so sizes are 1.
inline bm::BallMapperGraph graph_from_edges(std::size_t vertices, std::vector<bm::Edge> edges) {
  bm::BallMapperGraph g;
  for (std::size_t v = 0; v < vertices; ++v) g.balls.push_back(bm::Ball{v, v, {v}});
  g.point_count = vertices;
  std::sort(edges.begin(), edges.end());
  g.edges = std::move(edges);
  return g;
}

}  // namespace oracle
