// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ballmapper/altman.hpp"
#include "ballmapper/csv.hpp"
#include "ballmapper/error.hpp"

namespace bm::synth {

/// One Gaussian cluster in ratio space (x1..x5).
struct ClusterSpec {
  std::string name;
  std::array<double, 5> center{};
  std::array<double, 5> spread{};  // per-axis standard deviation
  std::size_t count = 0;
  double failure_probability = 0.0;
  std::vector<int> years{2015};    // rows cycle through these fiscal years
};

struct Scenario {
  std::vector<ClusterSpec> clusters;
  std::uint64_t seed = 7;
};

inline void validate(const std::vector<ClusterSpec>& clusters) {
  if (clusters.empty()) fail("scenario has no clusters");
  for (const auto& c : clusters) {
    const std::string who = "cluster '" + c.name + "': ";
    if (c.count == 0) fail(who + "count must be positive");
    if (!(c.failure_probability >= 0.0 && c.failure_probability <= 1.0)) fail(who + "failure probability must lie in [0, 1]");
    for (double s : c.spread)
      if (!(s > 0.0) || !std::isfinite(s)) fail(who + "spreads must be positive");
    for (double v : c.center)
      if (!std::isfinite(v)) fail(who + "center must be finite");
    if (c.years.empty()) fail(who + "needs at least one fiscal year");
  }
}

/// Two clusters: a large one deep in the distress zone (mean Z about 0.9)
/// where 15% of firms fail, and a smaller safe-zone one (mean Z about 3.6)
/// with no failures. In normalized space the two are farther apart than any
/// radius used in practice.
inline Scenario default_scenario() {
  Scenario s;
  s.seed = 7;
  s.clusters.push_back({"distress", {0.05, -0.30, -0.05, 0.8, 0.9}, {0.08, 0.20, 0.05, 0.30, 0.15}, 700, 0.15, {2015}});
  s.clusters.push_back({"safe", {0.35, 0.30, 0.12, 6.0, 3.6}, {0.08, 0.20, 0.05, 1.00, 0.15}, 300, 0.0, {2015}});
  return s;
}

struct Row {
  std::size_t firm_id = 0;
  std::size_t cluster = 0;
  altman::RatioVector ratios;
  altman::FirmRecord raw;
};

namespace detail {

// Draws are built from raw 64-bit engine output so that a seed yields the
// same rows under any standard library.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (cached_) {
      cached_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do u1 = uniform(); while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    cached_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool cached_ = false;
};

}  // namespace detail

// Chooses raw accounting fields whose ratios reproduce `x`.
inline altman::FirmRecord back_solve(const altman::RatioVector& x, detail::Draws& d) {
  altman::FirmRecord r;
  r.at = std::pow(10.0, d.uniform(2.0, 4.0));
  r.lct = r.at * d.uniform(0.1, 0.4);
  r.act = x.x1 * r.at + r.lct;
  r.re = x.x2 * r.at;
  r.xint = r.at * d.uniform(0.005, 0.03);
  r.txt = r.at * d.uniform(0.0, 0.03);
  r.ni = x.x3 * r.at - r.xint - r.txt;
  r.tl = r.at * d.uniform(0.3, 0.8);
  r.prcc_f = d.uniform(5.0, 80.0);
  r.csho = x.x4 * r.tl / r.prcc_f;
  r.sale = x.x5 * r.at;
  return r;
}

inline std::vector<Row> generate(const std::vector<ClusterSpec>& clusters, std::uint64_t seed) {
  validate(clusters);
  detail::Draws d(seed);
  std::vector<Row> rows;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& spec = clusters[c];
    for (std::size_t k = 0; k < spec.count; ++k) {
      Row row;
      row.firm_id = rows.size();
      row.cluster = c;
      std::array<double, 5> v{};
      for (std::size_t j = 0; j < 5; ++j) v[j] = spec.center[j] + spec.spread[j] * d.normal();
      row.ratios = altman::RatioVector::from(v, d.uniform() < spec.failure_probability);
      row.raw = back_solve(row.ratios, d);
      row.raw.fiscal_year = spec.years[k % spec.years.size()];
      if (row.ratios.failed) row.raw.delrsn = d.uniform() < 0.5 ? "02" : "03";
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline std::vector<Row> generate(const Scenario& s) { return generate(s.clusters, s.seed); }

/*
 * Scenario JSON:
 *   {"seed": 7,
 *    "clusters": [{"name": "distress", "center": [5 numbers], "spread": [5 numbers],
 *                  "count": 700, "failure_probability": 0.15, "years": [2015]}]}
 * "seed", "name" and "years" are optional.
 */
inline Scenario parse_scenario(const std::string& text) {
  Scenario s;
  try {
    const auto j = nlohmann::json::parse(text);
    s.seed = j.value("seed", s.seed);
    for (const auto& jc : j.at("clusters")) {
      ClusterSpec c;
      c.name = jc.value("name", "cluster" + std::to_string(s.clusters.size()));
      c.center = jc.at("center").get<std::array<double, 5>>();
      c.spread = jc.at("spread").get<std::array<double, 5>>();
      c.count = jc.at("count").get<std::size_t>();
      c.failure_probability = jc.at("failure_probability").get<double>();
      if (jc.contains("years")) c.years = jc.at("years").get<std::vector<int>>();
      s.clusters.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("invalid scenario JSON: ") + e.what());
  }
  validate(s.clusters);
  return s;
}

inline std::string scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["seed"] = s.seed;
  j["clusters"] = nlohmann::ordered_json::array();
  for (const auto& c : s.clusters) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["center"] = c.center;
    jc["spread"] = c.spread;
    jc["count"] = c.count;
    jc["failure_probability"] = c.failure_probability;
    jc["years"] = c.years;
    j["clusters"].push_back(std::move(jc));
  }
  return j.dump(2) + "\n";
}

inline std::string ratio_csv(const std::vector<Row>& rows, const std::vector<ClusterSpec>& clusters) {
  std::ostringstream o;
  o << "firm_id,fyear,x1,x2,x3,x4,x5,failed,cluster\n";
  for (const auto& r : rows) {
    o << r.firm_id << ',' << r.raw.fiscal_year;
    for (double v : r.ratios.values()) o << ',' << csv::format_number(v);
    o << ',' << (r.ratios.failed ? 1 : 0) << ',' << clusters.at(r.cluster).name << '\n';
  }
  return o.str();
}

inline std::string raw_csv(const std::vector<Row>& rows, const std::vector<ClusterSpec>& clusters) {
  std::ostringstream o;
  o << "firm_id,fyear";
  for (auto f : altman::kRawFields) o << ',' << f;
  o << ",delrsn,cluster\n";
  for (const auto& r : rows) {
    auto raw = r.raw;
    o << r.firm_id << ',' << raw.fiscal_year;
    for (auto f : altman::kRawFields) o << ',' << csv::format_number(altman::field(raw, f));
    o << ',' << raw.delrsn.value_or("") << ',' << clusters.at(r.cluster).name << '\n';
  }
  return o.str();
}

}  // namespace bm::synth
