// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ballmapper/bmgraph.hpp"
#include "ballmapper/coloration.hpp"
#include "ballmapper/error.hpp"
#include "ballmapper/pointcloud.hpp"

namespace bm {

struct WinsorizationRecord {
  double lower_pct = 1.0;
  double upper_pct = 99.0;
  std::vector<AxisBounds> bounds;
};

/**
 * Everything persisted about one build: the graph, the coordinates of every
 * ball center, the named colorations and the preprocessing maps needed to
 * place new points into the same normalized space.
 */
struct GraphDocument {
  BallMapperGraph graph;
  std::vector<std::string> axis_names;
  std::vector<std::vector<double>> centers;     // cloud coordinates of each ball's center
  std::map<std::string, Coloration> colorations;  // keyed by name
  std::optional<WinsorizationRecord> winsorization;
  std::optional<MinMaxParams> normalization;

  double epsilon() const { return graph.provenance.epsilon; }
};

inline GraphDocument make_document(BallMapperGraph graph, const PointCloud& cloud) {
  GraphDocument doc;
  doc.axis_names = cloud.axis_names();
  for (const auto& b : graph.balls) {
    const auto p = cloud.point(b.center_index);
    doc.centers.emplace_back(p.begin(), p.end());
  }
  doc.graph = std::move(graph);
  return doc;
}

// Canonical serialization: fixed key order, members ascending, edges
// lexicographic, colorations sorted by name. Output is a single line.
inline std::string to_json_text(const GraphDocument& doc) {
  using json = nlohmann::ordered_json;
  const auto& g = doc.graph;
  json j;
  j["epsilon"] = g.provenance.epsilon;
  j["axis_names"] = doc.axis_names;
  json balls = json::array();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const auto& b = g.balls[v];
    json jb;
    jb["id"] = b.id;
    jb["center_index"] = b.center_index;
    jb["center"] = v < doc.centers.size() ? json(doc.centers[v]) : json::array();
    jb["members"] = b.members;
    jb["size"] = b.size();
    balls.push_back(std::move(jb));
  }
  j["balls"] = std::move(balls);
  json edges = json::array();
  for (const auto& [a, b] : g.edges) edges.push_back(json::array({a, b}));
  j["edges"] = std::move(edges);
  json colorations = json::object();
  for (const auto& [name, c] : doc.colorations) colorations[name] = c.values;
  j["colorations"] = std::move(colorations);

  json pre = json::object();
  if (doc.winsorization) {
    json w;
    w["lower_pct"] = doc.winsorization->lower_pct;
    w["upper_pct"] = doc.winsorization->upper_pct;
    json lo = json::array(), hi = json::array();
    for (const auto& b : doc.winsorization->bounds) {
      lo.push_back(b.lower);
      hi.push_back(b.upper);
    }
    w["lower"] = std::move(lo);
    w["upper"] = std::move(hi);
    pre["winsorization"] = std::move(w);
  } else {
    pre["winsorization"] = nullptr;
  }
  if (doc.normalization) {
    json n;
    n["min"] = doc.normalization->min;
    n["max"] = doc.normalization->max;
    pre["normalization"] = std::move(n);
  } else {
    pre["normalization"] = nullptr;
  }
  j["preprocessing"] = std::move(pre);

  json prov;
  prov["point_count"] = g.point_count;
  prov["order_seed"] = g.provenance.order_seed ? json(*g.provenance.order_seed) : json(nullptr);
  prov["cloud_hash"] = g.provenance.cloud_hash;
  prov["version"] = kVersion;
  j["provenance"] = std::move(prov);
  return j.dump() + "\n";
}

inline GraphDocument from_json_text(const std::string& text) {
  using json = nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail_runtime(std::string("graph JSON is not valid JSON: ") + e.what());
  }
  try {
    GraphDocument doc;
    auto& g = doc.graph;
    g.provenance.epsilon = j.at("epsilon").get<double>();
    doc.axis_names = j.at("axis_names").get<std::vector<std::string>>();
    for (const auto& jb : j.at("balls")) {
      Ball b;
      b.id = jb.at("id").get<BallId>();
      b.center_index = jb.at("center_index").get<PointIndex>();
      b.members = jb.at("members").get<std::vector<PointIndex>>();
      if (b.id != g.balls.size()) fail_runtime("ball ids must be 0..n-1 in order");
      if (jb.at("size").get<std::size_t>() != b.members.size()) fail_runtime("ball " + std::to_string(b.id) + " size disagrees with members");
      doc.centers.push_back(jb.value("center", std::vector<double>{}));
      g.balls.push_back(std::move(b));
    }
    for (const auto& je : j.at("edges")) {
      const auto a = je.at(0).get<BallId>(), b = je.at(1).get<BallId>();
      if (a >= b || b >= g.balls.size()) fail_runtime("invalid edge");
      g.edges.emplace_back(a, b);
    }
    for (const auto& [name, values] : j.at("colorations").items()) {
      Coloration c;
      c.name = name;
      c.values = values.get<std::vector<double>>();
      const auto colon = name.rfind(':');
      if (colon != std::string::npos) {
        try {
          c.aggregator = parse_aggregator(name.substr(colon + 1));
        } catch (const Error&) {
        }
      }
      doc.colorations.emplace(name, std::move(c));
    }
    if (j.contains("preprocessing")) {
      const auto& pre = j.at("preprocessing");
      if (pre.contains("winsorization") && !pre.at("winsorization").is_null()) {
        const auto& w = pre.at("winsorization");
        WinsorizationRecord rec;
        rec.lower_pct = w.at("lower_pct").get<double>();
        rec.upper_pct = w.at("upper_pct").get<double>();
        const auto lo = w.at("lower").get<std::vector<double>>();
        const auto hi = w.at("upper").get<std::vector<double>>();
        if (lo.size() != hi.size()) fail_runtime("winsorization bounds length mismatch");
        for (std::size_t k = 0; k < lo.size(); ++k) rec.bounds.push_back({lo[k], hi[k]});
        doc.winsorization = std::move(rec);
      }
      if (pre.contains("normalization") && !pre.at("normalization").is_null()) {
        MinMaxParams p;
        p.min = pre.at("normalization").at("min").get<std::vector<double>>();
        p.max = pre.at("normalization").at("max").get<std::vector<double>>();
        doc.normalization = std::move(p);
      }
    }
    if (j.contains("provenance")) {
      const auto& p = j.at("provenance");
      g.point_count = p.value("point_count", std::size_t{0});
      if (p.contains("order_seed") && !p.at("order_seed").is_null()) g.provenance.order_seed = p.at("order_seed").get<std::uint64_t>();
      g.provenance.cloud_hash = p.value("cloud_hash", std::string{});
    }
    if (g.point_count == 0)
      for (const auto& b : g.balls)
        if (!b.members.empty()) g.point_count = std::max(g.point_count, b.members.back() + 1);
    return doc;
  } catch (const nlohmann::json::exception& e) {
    fail_runtime(std::string("graph JSON is missing or has malformed fields: ") + e.what());
  }
}

}  // namespace bm
