// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ballmapper/error.hpp"

namespace bm {

/**
 * A finite cloud of d-dimensional points stored row-major.
 *
 * Index i always refers to the i-th input row; no operation in this module
 * reorders points.
 */
class PointCloud {
 public:
  PointCloud() = default;

  explicit PointCloud(std::vector<std::string> axis_names) : axis_names_(std::move(axis_names)) {}

  PointCloud(std::vector<std::string> axis_names, std::vector<double> flat, bool normalized = false)
      : axis_names_(std::move(axis_names)), coords_(std::move(flat)), normalized_(normalized) {
    if (dim() == 0 && !coords_.empty()) fail("point cloud has coordinates but no axes");
    if (dim() != 0 && coords_.size() % dim() != 0) fail("coordinate count is not a multiple of dimension");
  }

  // Convenience for tests and small inputs: one vector per point.
  static PointCloud from_rows(const std::vector<std::vector<double>>& rows, std::vector<std::string> axis_names = {}) {
    const std::size_t d = rows.empty() ? axis_names.size() : rows.front().size();
    if (axis_names.empty()) {
      for (std::size_t j = 0; j < d; ++j) axis_names.push_back("x" + std::to_string(j + 1));
    }
    PointCloud cloud(std::move(axis_names));
    for (const auto& r : rows) cloud.push_back(r);
    return cloud;
  }

  void push_back(std::span<const double> point) {
    if (point.size() != dim()) fail("point has " + std::to_string(point.size()) + " coordinates, expected " + std::to_string(dim()));
    coords_.insert(coords_.end(), point.begin(), point.end());
  }

  std::size_t size() const noexcept { return dim() == 0 ? 0 : coords_.size() / dim(); }
  std::size_t dim() const noexcept { return axis_names_.size(); }
  bool empty() const noexcept { return size() == 0; }
  bool normalized() const noexcept { return normalized_; }
  void set_normalized(bool v) noexcept { normalized_ = v; }

  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim(), dim()}; }
  std::span<double> point(std::size_t i) { return {coords_.data() + i * dim(), dim()}; }
  double at(std::size_t i, std::size_t axis) const { return coords_[i * dim() + axis]; }
  double& at(std::size_t i, std::size_t axis) { return coords_[i * dim() + axis]; }

  std::vector<double> axis(std::size_t j) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = at(i, j);
    return out;
  }

  const std::vector<std::string>& axis_names() const noexcept { return axis_names_; }
  const std::vector<double>& flat() const noexcept { return coords_; }

  PointCloud subset(std::span<const std::size_t> rows) const {
    PointCloud out(axis_names_);
    out.normalized_ = normalized_;
    out.coords_.reserve(rows.size() * dim());
    for (std::size_t r : rows) out.push_back(point(r));
    return out;
  }

 private:
  std::vector<std::string> axis_names_;
  std::vector<double> coords_;
  bool normalized_ = false;
};

struct AxisStats {
  double mean = 0.0;
  double std_dev = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail("dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

// Nearest-rank percentile: the value at 1-indexed rank ceil(pct/100 * n) of
// the sorted sample, with rank clamped to [1, n].
inline double percentile_nearest_rank(std::vector<double> values, double pct) {
  if (values.empty()) fail("empty input");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  auto rank = static_cast<std::ptrdiff_t>(std::ceil(pct * n / 100.0));
  rank = std::clamp<std::ptrdiff_t>(rank, 1, static_cast<std::ptrdiff_t>(values.size()));
  return values[static_cast<std::size_t>(rank - 1)];
}

// Per-axis clamp interval.
struct AxisBounds {
  double lower = 0.0;
  double upper = 0.0;
};

inline std::vector<AxisBounds> winsorize_bounds(const PointCloud& cloud, double lower_pct, double upper_pct) {
  if (cloud.empty()) fail("empty input");
  if (!(lower_pct >= 0.0 && lower_pct < upper_pct && upper_pct <= 100.0)) fail("invalid bounds");
  std::vector<AxisBounds> bounds(cloud.dim());
  for (std::size_t j = 0; j < cloud.dim(); ++j) {
    auto column = cloud.axis(j);
    bounds[j].lower = percentile_nearest_rank(column, lower_pct);
    bounds[j].upper = percentile_nearest_rank(std::move(column), upper_pct);
  }
  return bounds;
}

inline PointCloud clamp_to_bounds(PointCloud cloud, std::span<const AxisBounds> bounds) {
  if (bounds.size() != cloud.dim()) fail("bounds dimension mismatch");
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t j = 0; j < cloud.dim(); ++j) {
      double& v = cloud.at(i, j);
      v = std::clamp(v, bounds[j].lower, bounds[j].upper);
    }
  }
  return cloud;
}

// Two-sided winsorization at nearest-rank percentiles of each axis.
inline PointCloud winsorize(const PointCloud& cloud, double lower_pct, double upper_pct) {
  const auto bounds = winsorize_bounds(cloud, lower_pct, upper_pct);
  return clamp_to_bounds(cloud, bounds);
}

/// Affine parameters of a min-max normalization, kept so the identical map
/// can be applied to points that were not part of the fitted sample.
struct MinMaxParams {
  std::vector<double> min;
  std::vector<double> max;

  std::vector<std::size_t> constant_axes() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < min.size(); ++j)
      if (!(max[j] > min[j])) out.push_back(j);
    return out;
  }

  double apply(std::size_t axis, double v) const {
    const double range = max[axis] - min[axis];
    if (!(range > 0.0)) return 0.0;
    return (v - min[axis]) / range;
  }

  std::vector<double> apply(std::span<const double> point) const {
    if (point.size() != min.size()) fail("dimension mismatch: " + std::to_string(point.size()) + " vs " + std::to_string(min.size()));
    std::vector<double> out(point.size());
    for (std::size_t j = 0; j < point.size(); ++j) out[j] = apply(j, point[j]);
    return out;
  }
};

inline MinMaxParams fit_minmax(const PointCloud& cloud) {
  if (cloud.empty()) fail("empty input");
  MinMaxParams p;
  p.min.assign(cloud.dim(), 0.0);
  p.max.assign(cloud.dim(), 0.0);
  for (std::size_t j = 0; j < cloud.dim(); ++j) {
    p.min[j] = p.max[j] = cloud.at(0, j);
    for (std::size_t i = 1; i < cloud.size(); ++i) {
      p.min[j] = std::min(p.min[j], cloud.at(i, j));
      p.max[j] = std::max(p.max[j], cloud.at(i, j));
    }
  }
  return p;
}

inline PointCloud apply_minmax(PointCloud cloud, const MinMaxParams& params) {
  if (params.min.size() != cloud.dim()) fail("normalization dimension mismatch");
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (std::size_t j = 0; j < cloud.dim(); ++j) cloud.at(i, j) = params.apply(j, cloud.at(i, j));
  cloud.set_normalized(true);
  return cloud;
}

// Maps every axis onto [0, 1]. Constant axes become 0 for every point; callers
// that want to warn about them can inspect fit_minmax(cloud).constant_axes().
inline PointCloud normalize_minmax(const PointCloud& cloud) { return apply_minmax(cloud, fit_minmax(cloud)); }

inline AxisStats describe(std::span<const double> values) {
  if (values.empty()) fail("empty input");
  AxisStats s;
  s.count = values.size();
  s.min = s.max = values.front();
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(values.size());
  // The mean of a constant column can round away from the constant.
  s.mean = std::clamp(s.mean, s.min, s.max);
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std_dev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

// Sample (n - 1) standard deviation; a single row has std_dev 0.
inline std::vector<AxisStats> summary_stats(const PointCloud& cloud) {
  if (cloud.empty()) fail("empty input");
  std::vector<AxisStats> out;
  out.reserve(cloud.dim());
  for (std::size_t j = 0; j < cloud.dim(); ++j) {
    const auto column = cloud.axis(j);
    out.push_back(describe(column));
  }
  return out;
}

struct LabeledColumn {
  std::string name;
  std::vector<double> values;
};

/// Pearson correlations over the cloud's axes followed by any extra columns.
/// Entries involving a zero-variance column are std::nullopt.
struct CorrelationMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<std::optional<double>>> values;

  std::size_t size() const noexcept { return labels.size(); }
  const std::optional<double>& operator()(std::size_t i, std::size_t j) const { return values[i][j]; }
};

inline CorrelationMatrix correlation_matrix(const PointCloud& cloud, std::span<const LabeledColumn> extra_columns = {}) {
  if (cloud.size() < 2) fail("correlation needs at least 2 points");
  std::vector<std::vector<double>> columns;
  CorrelationMatrix m;
  for (std::size_t j = 0; j < cloud.dim(); ++j) {
    columns.push_back(cloud.axis(j));
    m.labels.push_back(cloud.axis_names()[j]);
  }
  for (const auto& c : extra_columns) {
    if (c.values.size() != cloud.size()) fail("column '" + c.name + "' has " + std::to_string(c.values.size()) + " values, expected " + std::to_string(cloud.size()));
    columns.push_back(c.values);
    m.labels.push_back(c.name);
  }

  const std::size_t k = columns.size();
  const double n = static_cast<double>(cloud.size());
  std::vector<std::vector<double>> centered(k);
  std::vector<double> norm(k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    const auto [lo, hi] = std::minmax_element(columns[a].begin(), columns[a].end());
    if (*lo == *hi) continue;  // zero variance: leave norm at 0
    double mean = 0.0;
    for (double v : columns[a]) mean += v;
    mean /= n;
    centered[a].resize(columns[a].size());
    for (std::size_t i = 0; i < columns[a].size(); ++i) {
      centered[a][i] = columns[a][i] - mean;
      norm[a] += centered[a][i] * centered[a][i];
    }
    norm[a] = std::sqrt(norm[a]);
  }

  m.values.assign(k, std::vector<std::optional<double>>(k));
  for (std::size_t a = 0; a < k; ++a) {
    if (!(norm[a] > 0.0)) continue;
    m.values[a][a] = 1.0;
    for (std::size_t b = a + 1; b < k; ++b) {
      if (!(norm[b] > 0.0)) continue;
      double dot = 0.0;
      for (std::size_t i = 0; i < centered[a].size(); ++i) dot += centered[a][i] * centered[b][i];
      const double r = std::clamp(dot / (norm[a] * norm[b]), -1.0, 1.0);
      m.values[a][b] = r;
      m.values[b][a] = r;
    }
  }
  return m;
}

}  // namespace bm
