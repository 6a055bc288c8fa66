// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "ballmapper/bmgraph.hpp"

namespace bm {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// 2-D placement of a Ball Mapper graph. Coordinates are abstract plot
/// units; only relative placement carries meaning.
struct Layout {
  std::vector<Point2> position;
  std::vector<double> radius;
  std::uint64_t seed = 0;
};

struct LayoutOptions {
  double ideal_length = 1.0;  // spring rest length
  double radius_min = 0.08;
  double radius_max = 0.4;
  double component_gap = 1.0;
};

// Area-proportional radius: r_min + (r_max - r_min) * sqrt(size / size_max).
inline std::vector<double> ball_radii(const BallMapperGraph& graph, double r_min, double r_max) {
  std::size_t largest = 0;
  for (const auto& b : graph.balls) largest = std::max(largest, b.size());
  std::vector<double> r;
  r.reserve(graph.vertex_count());
  for (const auto& b : graph.balls) {
    const double frac = largest == 0 ? 0.0 : static_cast<double>(b.size()) / static_cast<double>(largest);
    r.push_back(r_min + (r_max - r_min) * std::sqrt(frac));
  }
  return r;
}

namespace detail {

// Fruchterman-Reingold on one connected component. Positions are local to
// the component; the caller translates them into place.
inline std::vector<Point2> spring_layout(const std::vector<BallId>& vertices, const std::vector<std::vector<BallId>>& adj,
                                         std::mt19937_64& rng, int iterations, double k) {
  const std::size_t n = vertices.size();
  std::vector<Point2> pos(n);
  if (n == 1) return pos;

  std::vector<std::size_t> local(adj.size(), 0);
  for (std::size_t a = 0; a < n; ++a) local[vertices[a]] = a;

  // Raw 53-bit draws keep initial positions identical across standard libraries.
  const double extent = k * std::sqrt(static_cast<double>(n));
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (auto& p : pos) {
    p.x = (uniform() * 2.0 - 1.0) * extent;
    p.y = (uniform() * 2.0 - 1.0) * extent;
  }

  double temperature = extent * 0.5;
  const double cooling = temperature / static_cast<double>(std::max(iterations, 1) + 1);
  std::vector<Point2> disp(n);
  for (int it = 0; it < iterations; ++it) {
    std::fill(disp.begin(), disp.end(), Point2{});
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        double dx = pos[a].x - pos[b].x;
        double dy = pos[a].y - pos[b].y;
        double d = std::hypot(dx, dy);
        if (d < 1e-9) {
          dx = 1e-3 * static_cast<double>(a + 1);
          dy = 1e-3 * static_cast<double>(b + 1);
          d = std::hypot(dx, dy);
        }
        const double f = k * k / d;  // repulsion
        disp[a].x += dx / d * f;
        disp[a].y += dy / d * f;
        disp[b].x -= dx / d * f;
        disp[b].y -= dy / d * f;
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (BallId nb : adj[vertices[a]]) {
        const std::size_t b = local[nb];
        if (b <= a) continue;
        const double dx = pos[a].x - pos[b].x;
        const double dy = pos[a].y - pos[b].y;
        const double d = std::hypot(dx, dy);
        if (d < 1e-12) continue;
        const double f = d * d / k;  // attraction
        disp[a].x -= dx / d * f;
        disp[a].y -= dy / d * f;
        disp[b].x += dx / d * f;
        disp[b].y += dy / d * f;
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      const double len = std::hypot(disp[a].x, disp[a].y);
      if (len < 1e-12) continue;
      const double step = std::min(len, temperature);
      pos[a].x += disp[a].x / len * step;
      pos[a].y += disp[a].y / len * step;
    }
    temperature = std::max(temperature - cooling, k * 1e-3);
  }
  return pos;
}

}  // namespace detail

/**
 * Deterministic spring-electrical layout.
 *
 * Each connected component is laid out on its own from seeded initial
 * positions, then components are packed left to right (largest first) in
 * disjoint bounding boxes. A single-vertex graph sits at the origin.
 */
inline Layout layout_force_directed(const BallMapperGraph& graph, std::uint64_t seed, int iterations,
                                    const LayoutOptions& opts = {}) {
  Layout layout;
  layout.seed = seed;
  const std::size_t n = graph.vertex_count();
  layout.position.assign(n, Point2{});
  layout.radius = ball_radii(graph, opts.radius_min, opts.radius_max);
  if (n <= 1) return layout;

  const auto adj = graph.adjacency();
  auto comps = connected_components(graph).groups;
  std::stable_sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });

  std::mt19937_64 rng(seed);
  double cursor = 0.0;
  for (const auto& comp : comps) {
    auto local = detail::spring_layout(comp, adj, rng, iterations, opts.ideal_length);
    double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    for (std::size_t a = 0; a < comp.size(); ++a) {
      const double r = layout.radius[comp[a]];
      if (a == 0 || local[a].x - r < min_x) min_x = local[a].x - r;
      if (a == 0 || local[a].x + r > max_x) max_x = local[a].x + r;
      if (a == 0 || local[a].y - r < min_y) min_y = local[a].y - r;
      if (a == 0 || local[a].y + r > max_y) max_y = local[a].y + r;
    }
    const double cy = 0.5 * (min_y + max_y);
    for (std::size_t a = 0; a < comp.size(); ++a)
      layout.position[comp[a]] = {local[a].x - min_x + cursor, local[a].y - cy};
    cursor += (max_x - min_x) + opts.component_gap;
  }

  // Components are laid out independently, so a coincidence can only arise
  // within one; nudge any exact duplicates apart.
  std::set<std::pair<double, double>> seen;
  for (std::size_t v = 0; v < n; ++v) {
    auto& p = layout.position[v];
    while (!seen.emplace(p.x, p.y).second) p.y += 1e-6 * opts.ideal_length;
  }
  return layout;
}

}  // namespace bm
