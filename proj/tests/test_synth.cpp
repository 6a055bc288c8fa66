// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ballmapper/csv.hpp"
#include "ballmapper/synth.hpp"

using namespace bm;
using Catch::Matchers::ContainsSubstring;

namespace {

synth::ClusterSpec cluster(std::size_t count, double p) {
  return {"c", {0.1, 0.1, 0.05, 1.0, 1.0}, {0.05, 0.05, 0.02, 0.2, 0.1}, count, p, {2015}};
}

}  // namespace

TEST_CASE("failure probability extremes", "[synth]") {
  for (const auto& r : synth::generate({cluster(200, 0.0)}, 1)) {
    CHECK_FALSE(r.ratios.failed);
    CHECK_FALSE(r.raw.delrsn.has_value());
  }
  for (const auto& r : synth::generate({cluster(200, 1.0)}, 1)) {
    CHECK(r.ratios.failed);
    CHECK(altman::failure_flag(r.raw));
  }
}

TEST_CASE("default scenario shape", "[synth]") {
  const auto s = synth::default_scenario();
  const auto rows = synth::generate(s);
  REQUIRE(rows.size() == 1000);
  std::size_t distress = 0;
  for (const auto& r : rows) distress += r.cluster == 0;
  CHECK(distress == 700);
  CHECK(rows.front().firm_id == 0);
  CHECK(rows.back().firm_id == 999);
}

TEST_CASE("invalid cluster specs are rejected", "[synth]") {
  auto c = cluster(10, 0.1);
  c.spread[2] = 0.0;
  REQUIRE_THROWS_WITH(synth::generate({c}, 1), ContainsSubstring("spread"));
  c = cluster(10, 1.5);
  REQUIRE_THROWS_WITH(synth::generate({c}, 1), ContainsSubstring("probability"));
  c = cluster(0, 0.1);
  REQUIRE_THROWS_WITH(synth::generate({c}, 1), ContainsSubstring("count"));
  REQUIRE_THROWS(synth::generate(std::vector<synth::ClusterSpec>{}, 1));
  REQUIRE_THROWS_WITH(synth::parse_scenario("{\"clusters\": [{\"center\": [1, 2]}]}"), ContainsSubstring("invalid scenario"));
}

TEST_CASE("back-solved raw fields reproduce the ratios through CSV", "[synth][property]") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto s = synth::default_scenario();
    const auto rows = synth::generate(s.clusters, seed);
    const auto table = csv::parse(synth::raw_csv(rows, s.clusters));
    REQUIRE(table.rows.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      altman::FirmRecord rec;
      for (auto f : altman::kRawFields) altman::field(rec, f) = *csv::parse_number(table.rows[i][*table.column(std::string(f))]);
      const auto d = table.rows[i][*table.column("delrsn")];
      if (!d.empty()) rec.delrsn = d;
      const auto x = altman::compute_ratios(rec);
      const auto want = rows[i].ratios.values();
      const auto got = x.values();
      for (std::size_t k = 0; k < 5; ++k) REQUIRE(std::abs(got[k] - want[k]) <= 1e-9);
      REQUIRE(x.failed == rows[i].ratios.failed);
    }
  }
}

TEST_CASE("failure rate stays within three standard errors", "[synth][property]") {
  for (double p : {0.05, 0.15, 0.5}) {
    const std::size_t n = 4000;
    for (std::uint64_t seed : {11u, 12u}) {
      std::size_t failed = 0;
      for (const auto& r : synth::generate({cluster(n, p)}, seed)) failed += r.ratios.failed;
      const double rate = static_cast<double>(failed) / n;
      REQUIRE(std::abs(rate - p) <= 3.0 * std::sqrt(p * (1 - p) / n));
    }
  }
}

TEST_CASE("same seed, same rows", "[synth][property]") {
  const auto s = synth::default_scenario();
  CHECK(synth::ratio_csv(synth::generate(s), s.clusters) == synth::ratio_csv(synth::generate(s), s.clusters));
  CHECK(synth::raw_csv(synth::generate(s), s.clusters) == synth::raw_csv(synth::generate(s), s.clusters));
  CHECK(synth::ratio_csv(synth::generate(s.clusters, 8), s.clusters) != synth::ratio_csv(synth::generate(s), s.clusters));
}

TEST_CASE("planted clusters land in their zones", "[synth]") {
  const auto rows = synth::generate(synth::default_scenario());
  double z[2] = {0, 0};
  std::size_t n[2] = {0, 0};
  for (const auto& r : rows) {
    z[r.cluster] += altman::z_score(r.ratios);
    ++n[r.cluster];
  }
  CHECK(z[0] / n[0] < altman::kDistressBelow);
  CHECK(z[1] / n[1] > altman::kSafeAbove);
}

TEST_CASE("scenario JSON round trip", "[synth]") {
  const auto s = synth::default_scenario();
  const auto back = synth::parse_scenario(synth::scenario_to_json(s));
  CHECK(back.seed == s.seed);
  REQUIRE(back.clusters.size() == 2);
  CHECK(back.clusters[1].center == s.clusters[1].center);
  CHECK(back.clusters[0].count == 700);
  CHECK(synth::scenario_to_json(back) == synth::scenario_to_json(s));

  const auto minimal = synth::parse_scenario(
      R"({"clusters": [{"center": [0,0,0,1,1], "spread": [1,1,1,1,1], "count": 3, "failure_probability": 0}]})");
  CHECK(minimal.seed == 7);
  CHECK(minimal.clusters[0].years == std::vector<int>{2015});
}
