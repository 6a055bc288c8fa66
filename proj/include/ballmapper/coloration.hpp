// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ballmapper/bmgraph.hpp"
#include "ballmapper/error.hpp"

namespace bm {

enum class Aggregator { mean, count, std_dev, min, max, proportion };

inline constexpr std::array<std::string_view, 6> kAggregatorNames = {"mean", "count", "std_dev", "min", "max", "proportion"};

inline std::string_view to_string(Aggregator a) { return kAggregatorNames[static_cast<std::size_t>(a)]; }

inline Aggregator parse_aggregator(std::string_view name) {
  for (std::size_t k = 0; k < kAggregatorNames.size(); ++k)
    if (kAggregatorNames[k] == name) return static_cast<Aggregator>(k);
  fail("unknown aggregator '" + std::string(name) + "' (expected mean, count, std_dev, min, max or proportion)");
}

// Per-ball aggregate of one outcome column.
struct Coloration {
  std::string name;
  Aggregator aggregator = Aggregator::mean;
  std::vector<double> values;

  double min_value() const { return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end()); }
  double max_value() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }
};

inline std::string coloration_name(std::string_view column, Aggregator a) {
  return std::string(column) + ":" + std::string(to_string(a));
}

namespace detail {

inline double aggregate(std::span<const PointIndex> members, std::span<const double> outcome, Aggregator agg) {
  const double n = static_cast<double>(members.size());
  switch (agg) {
    case Aggregator::count:
      return n;
    case Aggregator::mean: {
      double sum = 0.0, lo = outcome[members.front()], hi = lo;
      for (auto i : members) {
        sum += outcome[i];
        lo = std::min(lo, outcome[i]);
        hi = std::max(hi, outcome[i]);
      }
      // Rounding in the sum can push the mean of a constant ball off the constant.
      return std::clamp(sum / n, lo, hi);
    }
    case Aggregator::std_dev: {
      if (members.size() < 2) return 0.0;
      double sum = 0.0;
      for (auto i : members) sum += outcome[i];
      const double mean = sum / n;
      double ss = 0.0;
      for (auto i : members) ss += (outcome[i] - mean) * (outcome[i] - mean);
      return std::sqrt(ss / (n - 1.0));
    }
    case Aggregator::min: {
      double v = outcome[members.front()];
      for (auto i : members) v = std::min(v, outcome[i]);
      return v;
    }
    case Aggregator::max: {
      double v = outcome[members.front()];
      for (auto i : members) v = std::max(v, outcome[i]);
      return v;
    }
    case Aggregator::proportion: {
      double hits = 0.0;
      for (auto i : members) hits += outcome[i];
      return hits / n;
    }
  }
  return 0.0;
}

}  // namespace detail

/// Aggregates `outcome` (one value per cloud point) over every ball's
/// members. Points in several balls contribute to each of them. The
/// proportion aggregator requires a 0/1 column.
inline Coloration compute_coloration(const BallMapperGraph& graph, std::span<const double> outcome,
                                     Aggregator aggregator = Aggregator::mean, std::string name = {}) {
  if (outcome.size() != graph.point_count)
    fail("outcome column has " + std::to_string(outcome.size()) + " values, expected " + std::to_string(graph.point_count));
  if (aggregator == Aggregator::proportion) {
    for (double v : outcome)
      if (v != 0.0 && v != 1.0) fail("proportion aggregator requires a 0/1 column");
  }

  Coloration c;
  c.name = name.empty() ? std::string(to_string(aggregator)) : std::move(name);
  c.aggregator = aggregator;
  c.values.reserve(graph.vertex_count());
  for (const auto& b : graph.balls) {
    if (b.members.empty()) fail("ball " + std::to_string(b.id) + " has no members");
    c.values.push_back(detail::aggregate(b.members, outcome, aggregator));
  }
  return c;
}

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;

  std::string hex() const {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
  }
};

/// Five-stop low-to-high gradient: red, yellow-orange, green, blue, purple.
struct ColorScale {
  std::array<Rgb, 5> stops{{{215, 48, 39}, {253, 174, 97}, {102, 189, 99}, {49, 130, 189}, {117, 63, 160}}};

  Rgb at(double t) const {
    t = std::clamp(t, 0.0, 1.0);
    const double pos = t * static_cast<double>(stops.size() - 1);
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(pos), stops.size() - 2);
    const double f = pos - static_cast<double>(k);
    auto mix = [f](std::uint8_t a, std::uint8_t b) {
      return static_cast<std::uint8_t>(std::lround(static_cast<double>(a) + f * (static_cast<double>(b) - static_cast<double>(a))));
    };
    const Rgb& lo = stops[k];
    const Rgb& hi = stops[k + 1];
    return {mix(lo.r, hi.r), mix(lo.g, hi.g), mix(lo.b, hi.b)};
  }

  Rgb low() const { return stops.front(); }
  Rgb mid() const { return at(0.5); }
  Rgb high() const { return stops.back(); }
};

struct ColorMapping {
  std::vector<Rgb> colors;      // one per ball
  std::vector<double> position; // each ball's place on the gradient, in [0, 1]
  double range_min = 0.0;
  double range_max = 0.0;
};

// Linear map of [min value, max value] onto the gradient. A constant
// coloration maps every ball to the midpoint.
inline ColorMapping color_scale_map(const Coloration& coloration, const ColorScale& scale = {}) {
  ColorMapping m;
  if (coloration.values.empty()) return m;
  m.range_min = coloration.min_value();
  m.range_max = coloration.max_value();
  const double span = m.range_max - m.range_min;
  for (double v : coloration.values) {
    const double t = span > 0.0 ? (v - m.range_min) / span : 0.5;
    m.position.push_back(t);
    m.colors.push_back(scale.at(t));
  }
  return m;
}

}  // namespace bm
