// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "ballmapper/error.hpp"
#include "ballmapper/parallel.hpp"
#include "ballmapper/pointcloud.hpp"

namespace bm {

using PointIndex = std::size_t;
using BallId = std::size_t;

/**
 * Greedy epsilon-net over a point cloud.
 *
 * centers[b] is the point index of ball b; memberships[b] lists, in ascending
 * order, every point of the cloud within distance epsilon of that center
 * (closed ball). A point may belong to several balls.
 */
struct EpsilonNet {
  double epsilon = 0.0;
  std::size_t point_count = 0;
  std::vector<PointIndex> centers;
  std::vector<std::vector<PointIndex>> memberships;

  std::size_t ball_count() const noexcept { return centers.size(); }
};

enum class NeighborSearch {
  linear,       // reference: scan every point
  sorted_axis,  // window on the first coordinate, then the same distance test
};

struct CoverOptions {
  NeighborSearch search = NeighborSearch::linear;
  unsigned threads = 1;
};

inline std::vector<PointIndex> natural_order(std::size_t n) {
  std::vector<PointIndex> order(n);
  std::iota(order.begin(), order.end(), PointIndex{0});
  return order;
}

inline std::vector<PointIndex> shuffled_order(std::size_t n, std::uint64_t seed) {
  auto order = natural_order(n);
  std::mt19937_64 rng(seed);
  // Fisher-Yates with explicit index draws; std::shuffle's draw pattern is
  // implementation-defined.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

namespace detail {

// Range queries over a cloud. Both strategies return the ascending list of
// indices j with euclidean_distance(query, point j) <= epsilon, computed with
// the identical distance expression, so their outputs are bit-identical.
class RangeIndex {
 public:
  RangeIndex(const PointCloud& cloud, const CoverOptions& opts) : cloud_(cloud), opts_(opts) {
    if (opts.search == NeighborSearch::sorted_axis && cloud.dim() > 0) {
      sorted_ = natural_order(cloud.size());
      std::stable_sort(sorted_.begin(), sorted_.end(),
                       [&](PointIndex a, PointIndex b) { return cloud.at(a, 0) < cloud.at(b, 0); });
      keys_.resize(sorted_.size());
      for (std::size_t k = 0; k < sorted_.size(); ++k) keys_[k] = cloud.at(sorted_[k], 0);
    }
  }

  std::vector<PointIndex> query(std::span<const double> center, double epsilon) const {
    if (opts_.search == NeighborSearch::sorted_axis && !keys_.empty()) return query_sorted(center, epsilon);
    return query_linear(center, epsilon);
  }

 private:
  std::vector<PointIndex> query_linear(std::span<const double> center, double epsilon) const {
    const std::size_t n = cloud_.size();
    // Spawning workers per query only pays off on large clouds.
    const unsigned threads = n * cloud_.dim() >= (1u << 18) ? opts_.threads : 1u;
    if (threads <= 1) {
      std::vector<PointIndex> out;
      for (std::size_t j = 0; j < n; ++j)
        if (euclidean_distance(center, cloud_.point(j)) <= epsilon) out.push_back(j);
      return out;
    }
    std::vector<std::vector<PointIndex>> parts(threads);
    parallel_chunks(n, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
      for (std::size_t j = begin; j < end; ++j)
        if (euclidean_distance(center, cloud_.point(j)) <= epsilon) parts[c].push_back(j);
    });
    std::vector<PointIndex> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
  }

  std::vector<PointIndex> query_sorted(std::span<const double> center, double epsilon) const {
    // The window is widened slightly so that rounding in (q - eps) can never
    // exclude a point the exact distance test would accept.
    const double slack = 1e-9 * (std::abs(center[0]) + epsilon + 1.0);
    const auto lo = std::lower_bound(keys_.begin(), keys_.end(), center[0] - epsilon - slack);
    const auto hi = std::upper_bound(lo, keys_.end(), center[0] + epsilon + slack);
    std::vector<PointIndex> out;
    for (auto it = lo; it != hi; ++it) {
      const PointIndex j = sorted_[static_cast<std::size_t>(it - keys_.begin())];
      if (euclidean_distance(center, cloud_.point(j)) <= epsilon) out.push_back(j);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  const PointCloud& cloud_;
  CoverOptions opts_;
  std::vector<PointIndex> sorted_;
  std::vector<double> keys_;
};

inline void validate_order(std::span<const PointIndex> order, std::size_t n) {
  if (order.size() != n) fail("order must be a permutation of all " + std::to_string(n) + " point indices");
  std::vector<char> seen(n, 0);
  for (PointIndex i : order) {
    if (i >= n || seen[i]) fail("order must be a permutation of all point indices");
    seen[i] = 1;
  }
}

}  // namespace detail

/// Greedy epsilon-net: walk `order`, make every still-uncovered point a
/// center and mark all points within epsilon of it as covered.
inline EpsilonNet build_epsilon_net(const PointCloud& cloud, double epsilon, std::span<const PointIndex> order,
                                    const CoverOptions& opts = {}) {
  if (cloud.empty()) fail("empty input");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail("epsilon must be positive");
  detail::validate_order(order, cloud.size());

  EpsilonNet net;
  net.epsilon = epsilon;
  net.point_count = cloud.size();
  const detail::RangeIndex index(cloud, opts);
  std::vector<char> covered(cloud.size(), 0);
  for (PointIndex p : order) {
    if (covered[p]) continue;
    auto members = index.query(cloud.point(p), epsilon);
    for (PointIndex m : members) covered[m] = 1;
    net.centers.push_back(p);
    net.memberships.push_back(std::move(members));
  }
  return net;
}

inline EpsilonNet build_epsilon_net(const PointCloud& cloud, double epsilon, const CoverOptions& opts = {}) {
  const auto order = natural_order(cloud.size());
  return build_epsilon_net(cloud, epsilon, order, opts);
}

// Memberships of a fixed center set at a given radius (no greedy selection).
inline EpsilonNet memberships_for_centers(const PointCloud& cloud, std::span<const PointIndex> centers, double epsilon,
                                          const CoverOptions& opts = {}) {
  if (!(epsilon > 0.0)) fail("epsilon must be positive");
  EpsilonNet net;
  net.epsilon = epsilon;
  net.point_count = cloud.size();
  const detail::RangeIndex index(cloud, opts);
  for (PointIndex c : centers) {
    if (c >= cloud.size()) fail("center index out of range");
    net.centers.push_back(c);
    net.memberships.push_back(index.query(cloud.point(c), epsilon));
  }
  return net;
}

/// Inverse of the membership lists: for each point, the ascending ids of the
/// balls that contain it.
inline std::vector<std::vector<BallId>> assign_points(const EpsilonNet& net, const PointCloud& cloud) {
  if (net.point_count != cloud.size()) fail("net was built from a cloud of " + std::to_string(net.point_count) + " points, got " + std::to_string(cloud.size()));
  std::vector<std::vector<BallId>> out(cloud.size());
  for (BallId b = 0; b < net.memberships.size(); ++b)
    for (PointIndex i : net.memberships[b]) {
      if (i >= cloud.size()) fail("membership index out of range");
      out[i].push_back(b);
    }
  return out;
}

}  // namespace bm
