// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "ballmapper/error.hpp"

namespace bm::altman {

/// Raw accounting fields of one firm-year, named after the Compustat
/// mnemonics they come from.
struct FirmRecord {
  double act = 0.0;     // current assets
  double lct = 0.0;     // current liabilities
  double at = 0.0;      // total assets
  double re = 0.0;      // retained earnings
  double ni = 0.0;      // net income
  double xint = 0.0;    // interest paid
  double txt = 0.0;     // tax paid
  double csho = 0.0;    // shares outstanding
  double prcc_f = 0.0;  // fiscal-year-end share price
  double tl = 0.0;      // total liabilities
  double sale = 0.0;    // total sales
  std::optional<std::string> delrsn;
  int fiscal_year = 0;
};

inline constexpr std::array<std::string_view, 11> kRawFields = {"act", "lct", "at", "re", "ni", "xint", "txt", "csho", "prcc_f", "tl", "sale"};
inline constexpr std::array<std::string_view, 5> kRatioNames = {"x1", "x2", "x3", "x4", "x5"};

inline double& field(FirmRecord& r, std::string_view name) {
  if (name == "act") return r.act;
  if (name == "lct") return r.lct;
  if (name == "at") return r.at;
  if (name == "re") return r.re;
  if (name == "ni") return r.ni;
  if (name == "xint") return r.xint;
  if (name == "txt") return r.txt;
  if (name == "csho") return r.csho;
  if (name == "prcc_f") return r.prcc_f;
  if (name == "tl") return r.tl;
  if (name == "sale") return r.sale;
  fail("unknown accounting field '" + std::string(name) + "'");
}

// x1 liquidity, x2 profitability, x3 productivity, x4 leverage, x5 asset
// turnover.
struct RatioVector {
  double x1 = 0.0, x2 = 0.0, x3 = 0.0, x4 = 0.0, x5 = 0.0;
  bool failed = false;

  std::array<double, 5> values() const { return {x1, x2, x3, x4, x5}; }
  static RatioVector from(const std::array<double, 5>& v, bool failed = false) { return {v[0], v[1], v[2], v[3], v[4], failed}; }
};

/// Thrown when a record cannot produce ratios; ingestion drops such rows.
class RejectedRecord : public Error {
 public:
  using Error::Error;
};

struct FailureCodes {
  std::set<std::string> codes{"02", "03"};

  // Codes compare numerically when both sides parse as integers, so "2"
  // matches "02".
  bool contains(std::string_view code) const {
    auto as_int = [](std::string_view s) -> std::optional<long> {
      if (s.empty()) return std::nullopt;
      long v = 0;
      for (char ch : s) {
        if (ch < '0' || ch > '9') return std::nullopt;
        v = v * 10 + (ch - '0');
      }
      return v;
    };
    const auto n = as_int(code);
    for (const auto& c : codes) {
      if (c == code) return true;
      if (n && as_int(c) == n) return true;
    }
    return false;
  }
};

inline bool failure_flag(const FirmRecord& record, const FailureCodes& codes = {}) {
  return record.delrsn && codes.contains(*record.delrsn);
}

inline RatioVector compute_ratios(const FirmRecord& r, const FailureCodes& codes = {}) {
  for (double v : {r.act, r.lct, r.at, r.re, r.ni, r.xint, r.txt, r.csho, r.prcc_f, r.tl, r.sale})
    if (!std::isfinite(v)) throw RejectedRecord("non-finite accounting field");
  if (r.at == 0.0) throw RejectedRecord("zero total assets (at)");
  if (r.tl == 0.0) throw RejectedRecord("zero total liabilities (tl)");
  RatioVector x;
  x.x1 = (r.act - r.lct) / r.at;
  x.x2 = r.re / r.at;
  x.x3 = (r.ni + r.xint + r.txt) / r.at;
  x.x4 = (r.csho * r.prcc_f) / r.tl;
  x.x5 = r.sale / r.at;
  x.failed = failure_flag(r, codes);
  return x;
}

/// Discriminant weights. The defaults are the original five-ratio model
/// applied to decimal ratios; pass rescaled weights to use percentage ratios.
struct ZCoefficients {
  std::array<double, 5> w{0.012, 0.014, 0.033, 0.006, 0.999};
};

inline double z_score(const std::array<double, 5>& x, const ZCoefficients& c = {}) {
  for (double v : x)
    if (!std::isfinite(v)) fail("z_score needs finite ratios");
  double z = 0.0;
  for (std::size_t k = 0; k < 5; ++k) z += c.w[k] * x[k];
  return z;
}

inline double z_score(const RatioVector& r, const ZCoefficients& c = {}) { return z_score(r.values(), c); }

enum class Zone { distress, grey, safe };

inline constexpr double kDistressBelow = 1.8;
inline constexpr double kSafeAbove = 2.99;

inline std::string_view to_string(Zone z) {
  switch (z) {
    case Zone::distress: return "distress";
    case Zone::grey: return "grey";
    case Zone::safe: return "safe";
  }
  return "?";
}

// Both boundaries belong to the grey zone.
inline Zone classify_zone(double z) {
  if (std::isnan(z)) fail("classify_zone needs a number");
  if (z < kDistressBelow) return Zone::distress;
  if (z > kSafeAbove) return Zone::safe;
  return Zone::grey;
}

}  // namespace bm::altman
