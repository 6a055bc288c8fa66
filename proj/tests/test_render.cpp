// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "ballmapper/graph_json.hpp"
#include "ballmapper/layout.hpp"
#include "ballmapper/render.hpp"
#include "oracle.hpp"

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + needle.size())) ++n;
  return n;
}

double gap(const bm::Layout& l, std::size_t a, std::size_t b) {
  return std::hypot(l.position[a].x - l.position[b].x, l.position[a].y - l.position[b].y);
}

bm::BallMapperGraph random_graph(std::mt19937_64& rng, std::size_t n, double eps) {
  const auto cloud = oracle::random_cloud(rng, n, 2);
  return bm::build_graph(bm::build_epsilon_net(cloud, eps));
}

}  // namespace

TEST_CASE("layout of tiny graphs", "[render][layout]") {
  const auto one = bm::layout_force_directed(oracle::graph_from_edges(1, {}), 1, 300);
  REQUIRE(one.position.size() == 1);
  CHECK(one.position[0].x == 0.0);
  CHECK(one.position[0].y == 0.0);

  const auto pair = bm::layout_force_directed(oracle::graph_from_edges(2, {{0, 1}}), 1, 300);
  const double d = gap(pair, 0, 1);
  CHECK(d >= 0.5);
  CHECK(d <= 2.0);
}

TEST_CASE("layout is deterministic for a seed", "[render][layout]") {
  std::mt19937_64 rng(6);
  const auto g = random_graph(rng, 300, 0.15);
  const auto a = bm::layout_force_directed(g, 42, 200);
  const auto b = bm::layout_force_directed(g, 42, 200);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    REQUIRE(a.position[v].x == b.position[v].x);
    REQUIRE(a.position[v].y == b.position[v].y);
  }
  const auto c = bm::layout_force_directed(g, 43, 200);
  bool differs = false;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) differs = differs || a.position[v].x != c.position[v].x;
  CHECK(differs);
}

TEST_CASE("layout invariants on random graphs", "[render][layout][property]") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = random_graph(rng, 1 + rng() % 400, 0.05 + 0.05 * (trial % 5));
    const auto l = bm::layout_force_directed(g, static_cast<std::uint64_t>(trial), 100);
    const std::size_t n = g.vertex_count();
    REQUIRE(l.position.size() == n);

    std::set<std::pair<double, double>> distinct;
    for (const auto& p : l.position) {
      REQUIRE(std::isfinite(p.x));
      REQUIRE(std::isfinite(p.y));
      distinct.emplace(p.x, p.y);
    }
    REQUIRE(distinct.size() == n);

    // Larger balls never get smaller circles.
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (g.balls[a].size() < g.balls[b].size()) REQUIRE(l.radius[a] <= l.radius[b]);

    // Bounding boxes of different components do not overlap.
    const auto comps = bm::connected_components(g).groups;
    std::vector<std::pair<double, double>> spans;
    for (const auto& comp : comps) {
      double lo = 1e300, hi = -1e300;
      for (auto v : comp) {
        lo = std::min(lo, l.position[v].x - l.radius[v]);
        hi = std::max(hi, l.position[v].x + l.radius[v]);
      }
      spans.emplace_back(lo, hi);
    }
    std::sort(spans.begin(), spans.end());
    for (std::size_t k = 1; k < spans.size(); ++k) REQUIRE(spans[k - 1].second < spans[k].first);
  }
}

TEST_CASE("svg structure", "[render][svg]") {
  const auto single = oracle::graph_from_edges(1, {});
  const auto svg = bm::emit_svg(single, bm::layout_force_directed(single, 1, 10), nullptr);
  CHECK(count_of(svg, "<circle") == 1);
  CHECK(count_of(svg, "<text") == 1);
  CHECK(count_of(svg, "<line") == 0);
  CHECK(count_of(svg, "class=\"legend\"") == 0);
  CHECK(svg.find("#bdbdbd") != std::string::npos);

  const auto pair = oracle::graph_from_edges(2, {{0, 1}});
  const bm::Coloration c{"z:mean", bm::Aggregator::mean, {0.0, 1.0}};
  const auto layout = bm::layout_force_directed(pair, 1, 50);
  const auto plain = bm::emit_svg(pair, layout, &c);
  CHECK(count_of(plain, "<line") == 1);
  CHECK(count_of(plain, "<circle") == 2);
  CHECK(count_of(plain, "class=\"legend\"") == 0);
  CHECK(plain.find("#d73027") != std::string::npos);
  CHECK(plain.find("#753fa0") != std::string::npos);

  bm::SvgOptions opts;
  opts.legend = true;
  const auto with_legend = bm::emit_svg(pair, layout, &c, opts);
  CHECK(count_of(with_legend, "class=\"legend\"") == 1);
  CHECK(with_legend.find("z:mean") != std::string::npos);

  opts.label_limit = 1;
  CHECK(count_of(bm::emit_svg(pair, layout, &c, opts), "class=\"labels\"") == 0);

  const bm::Coloration wrong{"w", bm::Aggregator::mean, {0.0}};
  REQUIRE_THROWS(bm::emit_svg(pair, layout, &wrong));
}

TEST_CASE("dot structure", "[render][dot]") {
  const auto triangle = oracle::graph_from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
  const auto dot = bm::emit_dot(triangle, nullptr);
  CHECK(dot.rfind("graph ballmapper {", 0) == 0);
  CHECK(count_of(dot, "shape=circle") == 3);
  CHECK(count_of(dot, " -- ") == 3);
  CHECK(dot.find("  0 -- 1;") != std::string::npos);

  const auto empty = bm::emit_dot(oracle::graph_from_edges(2, {}), nullptr);
  CHECK(count_of(empty, "--") == 0);
}

TEST_CASE("exports carry every node and every edge exactly once", "[render][property]") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_graph(rng, 1 + rng() % 500, 0.08 + 0.04 * (trial % 4));
    std::vector<double> v(g.point_count);
    for (auto& x : v) x = static_cast<double>(rng() % 100);
    const auto c = bm::compute_coloration(g, v);

    std::vector<std::pair<bm::BallId, std::size_t>> nodes;
    for (const auto& b : g.balls) nodes.emplace_back(b.id, b.size());

    for (const auto& text : {bm::emit_dot(g, &c), bm::emit_dot(g, nullptr)}) {
      const auto back = bm::read_dot(text);
      REQUIRE(back.nodes == nodes);
      REQUIRE(back.edges == g.edges);
    }
    for (const auto& text : {bm::emit_graphml(g, &c), bm::emit_graphml(g, nullptr)}) {
      const auto back = bm::read_graphml(text);
      REQUIRE(back.nodes == nodes);
      REQUIRE(back.edges == g.edges);
    }
    REQUIRE(bm::emit_dot(g, &c) == bm::emit_dot(g, &c));
    REQUIRE(bm::emit_graphml(g, &c) == bm::emit_graphml(g, &c));
    const auto layout = bm::layout_force_directed(g, 5, 50);
    REQUIRE(bm::emit_svg(g, layout, &c) == bm::emit_svg(g, bm::layout_force_directed(g, 5, 50), &c));
  }
}

TEST_CASE("graph JSON round trip", "[render][json][property]") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cloud = oracle::random_cloud(rng, 1 + rng() % 300, 1 + rng() % 5);
    auto g = bm::build_graph(bm::build_epsilon_net(cloud, 0.1 + 0.1 * (trial % 4)));
    g.provenance.order_seed = trial % 2 ? std::optional<std::uint64_t>(trial) : std::nullopt;
    g.provenance.cloud_hash = "abc";
    auto doc = bm::make_document(g, cloud);
    std::vector<double> v(g.point_count);
    for (auto& x : v) x = static_cast<double>(rng() % 7) / 3.0;
    auto c = bm::compute_coloration(g, v, bm::Aggregator::std_dev, "v:std_dev");
    doc.colorations[c.name] = c;
    if (trial % 3 == 0) {
      doc.winsorization = bm::WinsorizationRecord{1.0, 99.0, bm::winsorize_bounds(cloud, 1.0, 99.0)};
      doc.normalization = bm::fit_minmax(cloud);
    }

    const auto text = bm::to_json_text(doc);
    const auto back = bm::from_json_text(text);
    REQUIRE(bm::to_json_text(back) == text);
    REQUIRE(back.graph.edges == g.edges);
    REQUIRE(back.graph.vertex_count() == g.vertex_count());
    for (std::size_t b = 0; b < g.vertex_count(); ++b) {
      REQUIRE(back.graph.balls[b].members == g.balls[b].members);
      REQUIRE(back.graph.balls[b].center_index == g.balls[b].center_index);
    }
    REQUIRE(back.epsilon() == g.provenance.epsilon);
    REQUIRE(back.graph.provenance.order_seed == g.provenance.order_seed);
    REQUIRE(back.colorations.at("v:std_dev").values == c.values);
    REQUIRE(back.centers == doc.centers);
  }
  REQUIRE_THROWS(bm::from_json_text("{\"epsilon\": 1}"));
  REQUIRE_THROWS(bm::from_json_text("not json"));
}
