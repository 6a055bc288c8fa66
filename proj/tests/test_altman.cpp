// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <limits>
#include <random>

#include "ballmapper/altman.hpp"

using namespace bm::altman;

namespace {

FirmRecord sample_firm() {
  FirmRecord f;
  f.act = 2;
  f.lct = 1;
  f.at = 4;
  f.re = 1;
  f.ni = 0;
  f.xint = 0;
  f.txt = 0;
  f.csho = 10;
  f.prcc_f = 2;
  f.tl = 5;
  f.sale = 6;
  return f;
}

}  // namespace

TEST_CASE("ratios from raw fields", "[altman]") {
  const auto x = compute_ratios(sample_firm());
  CHECK(x.x1 == 0.25);  // (2 - 1) / 4
  CHECK(x.x2 == 0.25);
  CHECK(x.x3 == 0.0);   // zero numerator
  CHECK(x.x4 == 4.0);   // 10 * 2 / 5
  CHECK(x.x5 == 1.5);
  CHECK_FALSE(x.failed);
}

TEST_CASE("records that cannot produce ratios are rejected", "[altman]") {
  auto f = sample_firm();
  f.at = 0;
  REQUIRE_THROWS_AS(compute_ratios(f), RejectedRecord);
  f = sample_firm();
  f.tl = 0;
  REQUIRE_THROWS_AS(compute_ratios(f), RejectedRecord);
  f = sample_firm();
  f.sale = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(compute_ratios(f), RejectedRecord);
}

TEST_CASE("failure flag from deletion reason", "[altman]") {
  auto f = sample_firm();
  CHECK_FALSE(failure_flag(f));
  f.delrsn = "02";
  CHECK(failure_flag(f));
  f.delrsn = "03";
  CHECK(failure_flag(f));
  f.delrsn = "3";
  CHECK(failure_flag(f));
  f.delrsn = "01";
  CHECK_FALSE(failure_flag(f));
  f.delrsn = "09";
  CHECK_FALSE(failure_flag(f));
  CHECK(failure_flag(f, FailureCodes{{"09"}}));
  f.delrsn = "02";
  CHECK(compute_ratios(f).failed);
}

TEST_CASE("z_score", "[altman]") {
  CHECK(z_score(std::array<double, 5>{0, 0, 0, 0, 0}) == 0.0);
  CHECK(std::abs(z_score(std::array<double, 5>{1, 1, 1, 1, 1}) - 1.064) <= 1e-12);
  CHECK(z_score(std::array<double, 5>{0, 0, 0, 0, 1}) == 0.999);
  CHECK(z_score(RatioVector{0, 0, 1, 0, 0}) == 0.033);
  const double inf = std::numeric_limits<double>::infinity();
  REQUIRE_THROWS(z_score(std::array<double, 5>{inf, 0, 0, 0, 0}));
  // Percentage-scaled weights are a configuration choice.
  const ZCoefficients pct{{1.2, 1.4, 3.3, 0.6, 0.999}};
  CHECK(z_score(std::array<double, 5>{0.01, 0, 0, 0, 0}, pct) == Catch::Approx(0.012));
}

TEST_CASE("zone thresholds", "[altman]") {
  CHECK(classify_zone(3.5) == Zone::safe);
  CHECK(classify_zone(2.0) == Zone::grey);
  CHECK(classify_zone(1.0) == Zone::distress);
  CHECK(classify_zone(1.79) == Zone::distress);
  CHECK(classify_zone(1.80) == Zone::grey);
  CHECK(classify_zone(2.99) == Zone::grey);
  CHECK(classify_zone(3.00) == Zone::safe);
  CHECK(to_string(Zone::grey) == "grey");
  REQUIRE_THROWS(classify_zone(std::numeric_limits<double>::quiet_NaN()));
}

TEST_CASE("z_score is linear", "[altman][property]") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::array<double, 5> a{}, b{}, sum{}, scaled{};
    const double lambda = u(rng);
    for (std::size_t k = 0; k < 5; ++k) {
      a[k] = u(rng);
      b[k] = u(rng);
      sum[k] = a[k] + b[k];
      scaled[k] = lambda * a[k];
    }
    REQUIRE(std::abs(z_score(sum) - (z_score(a) + z_score(b))) <= 1e-12);
    REQUIRE(std::abs(z_score(scaled) - lambda * z_score(a)) <= 1e-12);
  }
}

TEST_CASE("zones are monotone and partition the line", "[altman][property]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 5000; ++trial) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    REQUIRE(static_cast<int>(classify_zone(a)) <= static_cast<int>(classify_zone(b)));
    const auto z = classify_zone(a);
    const int hits = (a < 1.8) + (a >= 1.8 && a <= 2.99) + (a > 2.99);
    REQUIRE(hits == 1);
    REQUIRE((z == Zone::distress) == (a < 1.8));
    REQUIRE((z == Zone::safe) == (a > 2.99));
  }
  CHECK(classify_zone(std::nextafter(1.8, 0.0)) == Zone::distress);
  CHECK(classify_zone(std::nextafter(2.99, 10.0)) == Zone::safe);
}

TEST_CASE("ratios times their denominators give back the numerators", "[altman][property]") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1e6, 1e6), pos(1.0, 1e7);
  auto rel = [](double got, double want) { return std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)); };
  for (int trial = 0; trial < 1000; ++trial) {
    FirmRecord f;
    f.act = u(rng);
    f.lct = u(rng);
    f.at = pos(rng);
    f.re = u(rng);
    f.ni = u(rng);
    f.xint = u(rng);
    f.txt = u(rng);
    f.csho = pos(rng);
    f.prcc_f = pos(rng) / 1e5;
    f.tl = pos(rng);
    f.sale = pos(rng);
    const auto x = compute_ratios(f);
    REQUIRE(rel(x.x1 * f.at, f.act - f.lct));
    REQUIRE(rel(x.x2 * f.at, f.re));
    REQUIRE(rel(x.x3 * f.at, f.ni + f.xint + f.txt));
    REQUIRE(rel(x.x4 * f.tl, f.csho * f.prcc_f));
    REQUIRE(rel(x.x5 * f.at, f.sale));
  }
}
