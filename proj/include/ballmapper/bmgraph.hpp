// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ballmapper/cover.hpp"
#include "ballmapper/error.hpp"

namespace bm {

struct Ball {
  BallId id = 0;
  PointIndex center_index = 0;
  std::vector<PointIndex> members;  // ascending

  std::size_t size() const noexcept { return members.size(); }
};

using Edge = std::pair<BallId, BallId>;  // first < second

struct Provenance {
  double epsilon = 0.0;
  std::optional<std::uint64_t> order_seed;  // empty: natural row order
  std::string cloud_hash;
};

/**
 * Abstract Ball Mapper graph: one vertex per ball of an epsilon-net, and an
 * undirected edge between every two balls whose memberships intersect.
 *
 * Vertex ids follow center-creation order; edges are sorted
 * lexicographically with no duplicates or self-loops.
 */
struct BallMapperGraph {
  std::vector<Ball> balls;
  std::vector<Edge> edges;
  std::size_t point_count = 0;  // size of the cloud the balls index into
  Provenance provenance;

  std::size_t vertex_count() const noexcept { return balls.size(); }
  std::size_t edge_count() const noexcept { return edges.size(); }

  std::vector<std::vector<BallId>> adjacency() const {
    std::vector<std::vector<BallId>> adj(balls.size());
    for (const auto& [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    for (auto& n : adj) std::sort(n.begin(), n.end());
    return adj;
  }
};

inline void validate_net(const EpsilonNet& net) {
  if (net.centers.size() != net.memberships.size()) fail("net has mismatched centers and memberships");
  for (std::size_t b = 0; b < net.centers.size(); ++b) {
    const auto& m = net.memberships[b];
    if (!std::is_sorted(m.begin(), m.end()) || std::adjacent_find(m.begin(), m.end()) != m.end())
      fail("ball " + std::to_string(b) + " membership is not strictly ascending");
    if (!std::binary_search(m.begin(), m.end(), net.centers[b])) fail("ball " + std::to_string(b) + " does not contain its center");
    if (!m.empty() && m.back() >= net.point_count) fail("ball " + std::to_string(b) + " has a member out of range");
  }
}

// Edges are found through the point -> balls inverse index: every point that
// lies in k balls contributes the k*(k-1)/2 pairs among them.
inline BallMapperGraph build_graph(const EpsilonNet& net) {
  validate_net(net);
  BallMapperGraph g;
  g.provenance.epsilon = net.epsilon;
  g.point_count = net.point_count;
  g.balls.reserve(net.ball_count());
  for (BallId b = 0; b < net.ball_count(); ++b) g.balls.push_back(Ball{b, net.centers[b], net.memberships[b]});

  std::vector<std::vector<BallId>> containing(net.point_count);
  for (BallId b = 0; b < net.ball_count(); ++b)
    for (PointIndex i : net.memberships[b]) containing[i].push_back(b);

  for (const auto& balls : containing)
    for (std::size_t x = 0; x < balls.size(); ++x)
      for (std::size_t y = x + 1; y < balls.size(); ++y) g.edges.emplace_back(balls[x], balls[y]);
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

struct Components {
  std::vector<std::vector<BallId>> groups;  // each ascending; ordered by smallest id
  std::vector<std::size_t> label;           // vertex -> index into groups

  // Balls not connected to anything are the outlier candidates.
  std::vector<BallId> singletons() const {
    std::vector<BallId> out;
    for (const auto& g : groups)
      if (g.size() == 1) out.push_back(g.front());
    return out;
  }
};

inline Components connected_components(const BallMapperGraph& graph) {
  const std::size_t n = graph.vertex_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [a, b] : graph.edges) {
    const auto ra = find(a), rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }

  Components c;
  c.label.assign(n, 0);
  std::map<std::size_t, std::size_t> root_to_group;
  for (std::size_t v = 0; v < n; ++v) {
    const auto r = find(v);
    auto [it, inserted] = root_to_group.try_emplace(r, c.groups.size());
    if (inserted) c.groups.emplace_back();
    c.groups[it->second].push_back(v);
    c.label[v] = it->second;
  }
  return c;
}

struct GraphStats {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t max_degree = 0;
  double mean_degree = 0.0;
  std::map<std::size_t, std::size_t> degree_histogram;  // degree -> vertex count
  std::size_t components = 0;
  std::size_t singleton_components = 0;
  double largest_component_fraction = 0.0;  // by vertex count
  std::size_t total_membership = 0;         // sum of ball sizes
};

inline GraphStats graph_stats(const BallMapperGraph& graph) {
  GraphStats s;
  s.vertices = graph.vertex_count();
  s.edges = graph.edge_count();
  std::vector<std::size_t> degree(s.vertices, 0);
  for (const auto& [a, b] : graph.edges) {
    ++degree[a];
    ++degree[b];
  }
  for (std::size_t d : degree) {
    ++s.degree_histogram[d];
    s.max_degree = std::max(s.max_degree, d);
  }
  if (s.vertices > 0) s.mean_degree = 2.0 * static_cast<double>(s.edges) / static_cast<double>(s.vertices);
  for (const auto& b : graph.balls) s.total_membership += b.size();

  const auto comps = connected_components(graph);
  s.components = comps.groups.size();
  std::size_t largest = 0;
  for (const auto& g : comps.groups) {
    largest = std::max(largest, g.size());
    if (g.size() == 1) ++s.singleton_components;
  }
  if (s.vertices > 0) s.largest_component_fraction = static_cast<double>(largest) / static_cast<double>(s.vertices);
  return s;
}

}  // namespace bm
