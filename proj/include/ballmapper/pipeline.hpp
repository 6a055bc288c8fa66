// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "ballmapper/altman.hpp"
#include "ballmapper/bmgraph.hpp"
#include "ballmapper/coloration.hpp"
#include "ballmapper/cover.hpp"
#include "ballmapper/csv.hpp"
#include "ballmapper/error.hpp"
#include "ballmapper/graph_json.hpp"
#include "ballmapper/parallel.hpp"
#include "ballmapper/pointcloud.hpp"

namespace bm {

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) fail_runtime("SHA-256 failed");
  std::string out;
  char buf[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(buf, sizeof buf, "%02x", digest[k]);
    out += buf;
  }
  return out;
}

// Hash of the coordinates as shortest round-trip decimal text, so it does not
// depend on the host's byte order.
inline std::string cloud_hash(const PointCloud& cloud) {
  std::string text;
  for (const auto& name : cloud.axis_names()) text += name + ",";
  text += "\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (double v : cloud.point(i)) text += csv::format_number(v) + ",";
    text += "\n";
  }
  return sha256_hex(text);
}

inline constexpr const char* kZScoreColumn = "z_score";
inline constexpr const char* kFailedColumn = "failed";

struct ColorRequest {
  std::string column;
  Aggregator aggregator = Aggregator::mean;
};

/**
 * Everything that determines a build. Serialized verbatim into the run
 * manifest so the run can be replayed.
 */
struct RunConfig {
  std::string input;
  bool raw_fields = false;
  std::vector<std::string> axes{"x1", "x2", "x3", "x4", "x5"};  // ratio-mode columns
  std::map<std::string, std::string> raw_columns;              // raw field -> CSV column (identity when absent)
  std::string failure_column = "failed";                       // ratio mode, 0/1
  std::string delrsn_column = "delrsn";                        // raw mode
  std::string year_column = "fyear";
  std::optional<int> year;
  bool winsorize = true;
  double lower_pct = 1.0;
  double upper_pct = 99.0;
  bool normalize = true;
  double epsilon = 0.4;
  std::optional<std::uint64_t> order_seed;
  std::vector<ColorRequest> colorations;  // empty: z_score:mean and failed:proportion when available
  std::set<std::string> failure_codes{"02", "03"};
  std::array<double, 5> z_weights = altman::ZCoefficients{}.w;
  std::string output;    // graph JSON path; empty = do not write
  std::string manifest;  // manifest path; empty = do not write

  std::string raw_column(std::string_view field) const {
    const auto it = raw_columns.find(std::string(field));
    return it == raw_columns.end() ? std::string(field) : it->second;
  }

  void validate() const {
    if (input.empty()) fail("no input path given");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail("epsilon must be positive");
    if (!raw_fields && axes.empty()) fail("no axis columns selected");
    if (winsorize && !(lower_pct >= 0.0 && lower_pct < upper_pct && upper_pct <= 100.0)) fail("invalid bounds");
  }
};

inline nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["input"] = c.input;
  j["raw_fields"] = c.raw_fields;
  j["axes"] = c.axes;
  j["raw_columns"] = c.raw_columns;
  j["failure_column"] = c.failure_column;
  j["delrsn_column"] = c.delrsn_column;
  j["year_column"] = c.year_column;
  j["year"] = c.year ? nlohmann::ordered_json(*c.year) : nlohmann::ordered_json(nullptr);
  j["winsorize"] = c.winsorize;
  j["lower_pct"] = c.lower_pct;
  j["upper_pct"] = c.upper_pct;
  j["normalize"] = c.normalize;
  j["epsilon"] = c.epsilon;
  j["order_seed"] = c.order_seed ? nlohmann::ordered_json(*c.order_seed) : nlohmann::ordered_json(nullptr);
  auto colors = nlohmann::ordered_json::array();
  for (const auto& r : c.colorations) colors.push_back({{"column", r.column}, {"aggregate", std::string(to_string(r.aggregator))}});
  j["colorations"] = std::move(colors);
  j["failure_codes"] = c.failure_codes;
  j["z_weights"] = c.z_weights;
  j["output"] = c.output;
  j["manifest"] = c.manifest;
  return j;
}

inline RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    c.input = j.at("input").get<std::string>();
    c.raw_fields = j.value("raw_fields", c.raw_fields);
    c.axes = j.value("axes", c.axes);
    c.raw_columns = j.value("raw_columns", c.raw_columns);
    c.failure_column = j.value("failure_column", c.failure_column);
    c.delrsn_column = j.value("delrsn_column", c.delrsn_column);
    c.year_column = j.value("year_column", c.year_column);
    if (j.contains("year") && !j.at("year").is_null()) c.year = j.at("year").get<int>();
    c.winsorize = j.value("winsorize", c.winsorize);
    c.lower_pct = j.value("lower_pct", c.lower_pct);
    c.upper_pct = j.value("upper_pct", c.upper_pct);
    c.normalize = j.value("normalize", c.normalize);
    c.epsilon = j.at("epsilon").get<double>();
    if (j.contains("order_seed") && !j.at("order_seed").is_null()) c.order_seed = j.at("order_seed").get<std::uint64_t>();
    if (j.contains("colorations"))
      for (const auto& r : j.at("colorations"))
        c.colorations.push_back({r.at("column").get<std::string>(), parse_aggregator(r.at("aggregate").get<std::string>())});
    c.failure_codes = j.value("failure_codes", c.failure_codes);
    c.z_weights = j.value("z_weights", c.z_weights);
    c.output = j.value("output", c.output);
    c.manifest = j.value("manifest", c.manifest);
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("invalid run configuration: ") + e.what());
  }
  return c;
}

/// The ingested, preprocessed sample.
struct Dataset {
  PointCloud ratios;  // winsorized and year-filtered, before normalization
  PointCloud cloud;   // what the cover is built on (normalized when requested)
  std::map<std::string, std::vector<double>> outcomes;  // per-point columns
  std::vector<std::optional<int>> years;
  std::size_t rows_read = 0;
  std::size_t dropped_rows = 0;   // incomplete or unusable
  std::size_t filtered_rows = 0;  // excluded by the year filter
  std::optional<WinsorizationRecord> winsorization;
  std::optional<MinMaxParams> normalization;
  std::string input_sha256;
  std::vector<std::string> warnings;

  bool has_z_score() const { return outcomes.count(kZScoreColumn) != 0; }
  bool has_failed() const { return outcomes.count(kFailedColumn) != 0; }
};

inline Dataset ingest_text(const RunConfig& config, const std::string& text) {
  const auto table = csv::parse(text);
  Dataset data;
  data.input_sha256 = sha256_hex(text);
  data.rows_read = table.rows.size();

  auto require = [&](const std::string& name) {
    const auto k = table.column(name);
    if (!k) fail("missing required column '" + name + "'");
    return *k;
  };

  std::vector<std::string> axis_names;
  std::vector<std::size_t> axis_cols;
  std::array<std::size_t, altman::kRawFields.size()> raw_cols{};
  std::optional<std::size_t> failure_col, delrsn_col, year_col;
  if (config.raw_fields) {
    for (std::size_t f = 0; f < altman::kRawFields.size(); ++f) raw_cols[f] = require(config.raw_column(altman::kRawFields[f]));
    for (auto n : altman::kRatioNames) axis_names.emplace_back(n);
    delrsn_col = table.column(config.delrsn_column);
  } else {
    for (const auto& a : config.axes) {
      axis_cols.push_back(require(a));
      axis_names.push_back(a);
    }
    failure_col = table.column(config.failure_column);
  }
  if (config.year) year_col = require(config.year_column);
  else year_col = table.column(config.year_column);

  std::set<std::size_t> used(axis_cols.begin(), axis_cols.end());
  if (config.raw_fields) used.insert(raw_cols.begin(), raw_cols.end());
  for (auto c : {failure_col, delrsn_col, year_col})
    if (c) used.insert(*c);

  const altman::FailureCodes codes{config.failure_codes};
  PointCloud all(axis_names);
  std::vector<double> failed;
  std::vector<std::optional<int>> years;
  std::vector<std::size_t> kept_rows;
  std::vector<double> point(axis_names.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    auto cell = [&](std::size_t c) -> std::string_view { return c < row.size() ? std::string_view(row[c]) : std::string_view{}; };
    bool ok = true;
    double fail_value = 0.0;
    if (config.raw_fields) {
      altman::FirmRecord rec;
      for (std::size_t f = 0; f < altman::kRawFields.size() && ok; ++f) {
        const auto v = csv::parse_number(cell(raw_cols[f]));
        if (!v) ok = false;
        else altman::field(rec, altman::kRawFields[f]) = *v;
      }
      if (ok && delrsn_col) {
        const auto d = csv::trim(cell(*delrsn_col));
        if (!d.empty()) rec.delrsn = std::string(d);
      }
      if (ok) {
        try {
          const auto x = altman::compute_ratios(rec, codes);
          const auto v = x.values();
          std::copy(v.begin(), v.end(), point.begin());
          fail_value = x.failed ? 1.0 : 0.0;
        } catch (const altman::RejectedRecord&) {
          ok = false;
        }
      }
    } else {
      for (std::size_t a = 0; a < axis_cols.size() && ok; ++a) {
        const auto v = csv::parse_number(cell(axis_cols[a]));
        if (!v) ok = false;
        else point[a] = *v;
      }
      if (ok && failure_col) {
        const auto v = csv::parse_number(cell(*failure_col));
        if (!v || (*v != 0.0 && *v != 1.0)) ok = false;
        else fail_value = *v;
      }
    }
    std::optional<int> year;
    if (ok && year_col) {
      const auto v = csv::parse_number(cell(*year_col));
      if (!v || *v != std::floor(*v)) ok = false;
      else year = static_cast<int>(*v);
    }
    if (!ok) {
      ++data.dropped_rows;
      continue;
    }
    all.push_back(point);
    failed.push_back(fail_value);
    years.push_back(year);
    kept_rows.push_back(r);
  }
  if (all.empty()) fail("empty input: no usable rows after dropping " + std::to_string(data.dropped_rows));

  // Winsorize over the whole sample, then split by year.
  if (config.winsorize) {
    WinsorizationRecord rec;
    rec.lower_pct = config.lower_pct;
    rec.upper_pct = config.upper_pct;
    rec.bounds = winsorize_bounds(all, config.lower_pct, config.upper_pct);
    all = clamp_to_bounds(std::move(all), rec.bounds);
    data.winsorization = std::move(rec);
  }

  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (config.year && years[i] != config.year) {
      ++data.filtered_rows;
      continue;
    }
    selected.push_back(i);
  }
  if (selected.empty()) fail("empty input: no rows for year " + std::to_string(*config.year));

  data.ratios = all.subset(selected);
  for (auto i : selected) data.years.push_back(years[i]);
  if (config.raw_fields || failure_col) {
    auto& f = data.outcomes[kFailedColumn];
    for (auto i : selected) f.push_back(failed[i]);
  }
  if (data.ratios.dim() == 5) {
    const altman::ZCoefficients w{config.z_weights};
    auto& z = data.outcomes[kZScoreColumn];
    for (std::size_t i = 0; i < data.ratios.size(); ++i) {
      const auto p = data.ratios.point(i);
      z.push_back(altman::z_score(std::array<double, 5>{p[0], p[1], p[2], p[3], p[4]}, w));
    }
  }
  for (std::size_t a = 0; a < data.ratios.dim(); ++a) data.outcomes[data.ratios.axis_names()[a]] = data.ratios.axis(a);
  // Any other numeric column can serve as an outcome; non-numeric cells are NaN.
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (used.count(c) || data.outcomes.count(table.header[c])) continue;
    std::vector<double> col;
    bool any = false;
    for (auto i : selected) {
      const auto& row = table.rows[kept_rows[i]];
      const auto v = c < row.size() ? csv::parse_number(row[c]) : std::nullopt;
      any = any || v.has_value();
      col.push_back(v.value_or(std::nan("")));
    }
    if (any) data.outcomes[table.header[c]] = std::move(col);
  }

  if (config.normalize) {
    data.normalization = fit_minmax(data.ratios);
    for (auto a : data.normalization->constant_axes())
      data.warnings.push_back("axis '" + data.ratios.axis_names()[a] + "' is constant; normalized to 0");
    data.cloud = apply_minmax(data.ratios, *data.normalization);
  } else {
    data.cloud = data.ratios;
  }
  return data;
}

inline Dataset ingest(const RunConfig& config) {
  config.validate();
  return ingest_text(config, csv::read_file(config.input));
}

inline Coloration coloration_for(const BallMapperGraph& graph, const Dataset& data, const ColorRequest& req) {
  const auto it = data.outcomes.find(req.column);
  if (it == data.outcomes.end()) fail("missing required column '" + req.column + "' for coloration");
  for (double v : it->second)
    if (std::isnan(v)) fail("column '" + req.column + "' has non-numeric values in the build sample");
  return compute_coloration(graph, it->second, req.aggregator, coloration_name(req.column, req.aggregator));
}

inline std::vector<ColorRequest> effective_colorations(const RunConfig& config, const Dataset& data) {
  if (!config.colorations.empty()) return config.colorations;
  std::vector<ColorRequest> out;
  if (data.has_z_score()) out.push_back({kZScoreColumn, Aggregator::mean});
  if (data.has_failed()) out.push_back({kFailedColumn, Aggregator::proportion});
  return out;
}

struct BuildResult {
  Dataset data;
  EpsilonNet net;
  GraphDocument document;
  std::string graph_json;
  std::string manifest_json;
};

inline std::string manifest_text(const RunConfig& config, const Dataset& data, const GraphDocument& doc, const std::string& graph_json) {
  nlohmann::ordered_json m;
  m["version"] = kVersion;
  m["config"] = to_json(config);
  m["input_sha256"] = data.input_sha256;
  m["rows_read"] = data.rows_read;
  m["dropped_rows"] = data.dropped_rows;
  m["filtered_rows"] = data.filtered_rows;
  m["points"] = data.cloud.size();
  m["balls"] = doc.graph.vertex_count();
  m["edges"] = doc.graph.edge_count();
  m["graph_sha256"] = sha256_hex(graph_json);
  m["warnings"] = data.warnings;
  return m.dump(2) + "\n";
}

inline BuildResult run_build_on(const RunConfig& config, Dataset data) {
  BuildResult out;
  CoverOptions opts;
  opts.search = NeighborSearch::sorted_axis;
  opts.threads = thread_count();
  const auto order = config.order_seed ? shuffled_order(data.cloud.size(), *config.order_seed) : natural_order(data.cloud.size());
  out.net = build_epsilon_net(data.cloud, config.epsilon, order, opts);
  auto graph = build_graph(out.net);
  graph.provenance.order_seed = config.order_seed;
  graph.provenance.cloud_hash = cloud_hash(data.cloud);

  std::vector<Coloration> colors;
  for (const auto& req : effective_colorations(config, data)) colors.push_back(coloration_for(graph, data, req));

  out.document = make_document(std::move(graph), data.cloud);
  for (auto& c : colors) out.document.colorations[c.name] = std::move(c);
  out.document.winsorization = data.winsorization;
  out.document.normalization = data.normalization;
  out.graph_json = to_json_text(out.document);
  out.manifest_json = manifest_text(config, data, out.document, out.graph_json);
  out.data = std::move(data);

  if (!config.output.empty()) csv::write_file(config.output, out.graph_json);
  if (!config.manifest.empty()) csv::write_file(config.manifest, out.manifest_json);
  return out;
}

/// Ingest, preprocess, cover, build the graph and color it; writes the graph
/// JSON and manifest when their paths are set.
inline BuildResult cmd_build(const RunConfig& config) { return run_build_on(config, ingest(config)); }

/// Reads a manifest written by cmd_build. The recorded input hash must match
/// the file on disk.
inline RunConfig config_from_manifest(const std::string& manifest_text_in, bool check_input = true) {
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(manifest_text_in);
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!m.contains("config")) fail("manifest has no config");
  auto config = config_from_json(m.at("config"));
  if (check_input && m.contains("input_sha256")) {
    const auto actual = sha256_hex(csv::read_file(config.input));
    if (actual != m.at("input_sha256").get<std::string>()) fail_runtime("input '" + config.input + "' changed since the manifest was written");
  }
  return config;
}

/// Adds colorations to an existing build, recovering the per-point outcome
/// columns by re-ingesting with the build's configuration.
inline GraphDocument cmd_color(GraphDocument doc, const RunConfig& build_config, const std::vector<ColorRequest>& requests) {
  const auto data = ingest(build_config);
  if (data.cloud.size() != doc.graph.point_count) fail_runtime("re-ingested sample does not match the graph's point count");
  if (!doc.graph.provenance.cloud_hash.empty() && cloud_hash(data.cloud) != doc.graph.provenance.cloud_hash)
    fail_runtime("re-ingested sample does not match the graph's cloud hash");
  for (const auto& req : requests) {
    auto c = coloration_for(doc.graph, data, req);
    doc.colorations[c.name] = std::move(c);
  }
  return doc;
}

// ---------------------------------------------------------------------------
// stats

struct YearFailure {
  int year = 0;
  std::size_t firms = 0;
  std::size_t failed = 0;
  double percent() const { return firms == 0 ? 0.0 : 100.0 * static_cast<double>(failed) / static_cast<double>(firms); }
};

struct StatsReport {
  std::vector<std::string> labels;
  std::vector<AxisStats> stats;  // axes, then the failure dummy when present
  std::optional<CorrelationMatrix> correlations;
  std::vector<YearFailure> by_year;
  std::optional<YearFailure> overall;  // year field is 0
  std::size_t rows_read = 0;
  std::size_t dropped_rows = 0;
};

inline StatsReport stats_for(const Dataset& data) {
  StatsReport r;
  r.rows_read = data.rows_read;
  r.dropped_rows = data.dropped_rows;
  r.labels = data.ratios.axis_names();
  r.stats = summary_stats(data.ratios);
  std::vector<LabeledColumn> extra;
  if (data.has_failed()) {
    const auto& f = data.outcomes.at(kFailedColumn);
    r.labels.push_back(kFailedColumn);
    r.stats.push_back(describe(f));
    extra.push_back({kFailedColumn, f});
    std::map<int, YearFailure> years;
    YearFailure all;
    for (std::size_t i = 0; i < f.size(); ++i) {
      ++all.firms;
      all.failed += f[i] != 0.0;
      if (data.years[i]) {
        auto& y = years[*data.years[i]];
        y.year = *data.years[i];
        ++y.firms;
        y.failed += f[i] != 0.0;
      }
    }
    for (const auto& [_, y] : years) r.by_year.push_back(y);
    r.overall = all;
  }
  if (data.ratios.size() >= 2) r.correlations = correlation_matrix(data.ratios, extra);
  return r;
}

/// Summary statistics over the preprocessed (not normalized) sample.
inline StatsReport cmd_stats(const RunConfig& config) { return stats_for(ingest(config)); }

inline std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

inline std::string render_stats_text(const StatsReport& r) {
  std::ostringstream o;
  o << "rows read: " << r.rows_read << ", dropped: " << r.dropped_rows << "\n\n";
  o << "summary statistics\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %10s %10s %10s %10s %8s\n", "variable", "mean", "s.d.", "min", "max", "n");
  o << line;
  for (std::size_t k = 0; k < r.stats.size(); ++k) {
    const auto& s = r.stats[k];
    std::snprintf(line, sizeof line, "%-12s %10s %10s %10s %10s %8zu\n", r.labels[k].c_str(), format_fixed(s.mean, 3).c_str(),
                  format_fixed(s.std_dev, 3).c_str(), format_fixed(s.min, 3).c_str(), format_fixed(s.max, 3).c_str(), s.count);
    o << line;
  }
  if (r.correlations) {
    o << "\ncorrelations\n";
    std::snprintf(line, sizeof line, "%-12s", "");
    o << line;
    for (const auto& l : r.correlations->labels) {
      std::snprintf(line, sizeof line, " %10s", l.c_str());
      o << line;
    }
    o << "\n";
    for (std::size_t a = 0; a < r.correlations->size(); ++a) {
      std::snprintf(line, sizeof line, "%-12s", r.correlations->labels[a].c_str());
      o << line;
      for (std::size_t b = 0; b < r.correlations->size(); ++b) {
        const auto& v = (*r.correlations)(a, b);
        std::snprintf(line, sizeof line, " %10s", v ? format_fixed(*v, 3).c_str() : "undefined");
        o << line;
      }
      o << "\n";
    }
  }
  if (r.overall) {
    o << "\nfailure percentage\n";
    for (const auto& y : r.by_year) {
      std::snprintf(line, sizeof line, "%-12d %8zu firms %8zu failed %8s%%\n", y.year, y.firms, y.failed, format_fixed(y.percent(), 2).c_str());
      o << line;
    }
    std::snprintf(line, sizeof line, "%-12s %8zu firms %8zu failed %8s%%\n", "all", r.overall->firms, r.overall->failed,
                  format_fixed(r.overall->percent(), 2).c_str());
    o << line;
  }
  return o.str();
}

// Three CSV sections separated by blank lines: statistics, correlations,
// failure by year.
inline std::string render_stats_csv(const StatsReport& r) {
  std::ostringstream o;
  o << "variable,mean,sd,min,max,n\n";
  for (std::size_t k = 0; k < r.stats.size(); ++k) {
    const auto& s = r.stats[k];
    o << r.labels[k] << ',' << csv::format_number(s.mean) << ',' << csv::format_number(s.std_dev) << ',' << csv::format_number(s.min)
      << ',' << csv::format_number(s.max) << ',' << s.count << '\n';
  }
  if (r.correlations) {
    o << "\nvariable";
    for (const auto& l : r.correlations->labels) o << ',' << l;
    o << '\n';
    for (std::size_t a = 0; a < r.correlations->size(); ++a) {
      o << r.correlations->labels[a];
      for (std::size_t b = 0; b < r.correlations->size(); ++b) {
        const auto& v = (*r.correlations)(a, b);
        o << ',' << (v ? csv::format_number(*v) : "undefined");
      }
      o << '\n';
    }
  }
  if (r.overall) {
    o << "\nyear,firms,failed,percent\n";
    for (const auto& y : r.by_year) o << y.year << ',' << y.firms << ',' << y.failed << ',' << csv::format_number(y.percent()) << '\n';
    o << "all," << r.overall->firms << ',' << r.overall->failed << ',' << csv::format_number(r.overall->percent()) << '\n';
  }
  return o.str();
}

// ---------------------------------------------------------------------------
// locate

struct LocatedBall {
  BallId id = 0;
  double distance = 0.0;  // in the build's (normalized) coordinates
  std::size_t size = 0;
  std::optional<double> failure_proportion;
  std::optional<double> mean_z_score;
};

struct LocateReport {
  std::vector<double> point;       // firm after the build's preprocessing
  std::vector<LocatedBall> balls;  // containing balls, nearest first
  std::vector<LocatedBall> safer_neighbors;  // adjacent balls with lower failure proportion
  bool covered() const { return !balls.empty(); }
};

namespace detail {

inline const Coloration* find_coloration(const GraphDocument& doc, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    const auto it = doc.colorations.find(n);
    if (it != doc.colorations.end()) return &it->second;
  }
  return nullptr;
}

}  // namespace detail

/// Places a point given in raw axis units (ratios) into the build's space
/// and reports the balls whose centers lie within epsilon of it.
inline LocateReport locate_point(const GraphDocument& doc, std::span<const double> raw_point) {
  if (raw_point.size() != doc.axis_names.size())
    fail("firm has " + std::to_string(raw_point.size()) + " coordinates, graph has " + std::to_string(doc.axis_names.size()) + " axes");
  std::vector<double> p(raw_point.begin(), raw_point.end());
  if (doc.winsorization) {
    if (doc.winsorization->bounds.size() != p.size()) fail_runtime("graph winsorization bounds do not match its axes");
    for (std::size_t j = 0; j < p.size(); ++j)
      p[j] = std::clamp(p[j], doc.winsorization->bounds[j].lower, doc.winsorization->bounds[j].upper);
  }
  if (doc.normalization) p = doc.normalization->apply(p);

  const auto* failure = detail::find_coloration(doc, {"failed:proportion", "failed:mean"});
  const auto* zscore = detail::find_coloration(doc, {"z_score:mean"});
  auto describe_ball = [&](BallId id, double dist) {
    LocatedBall b;
    b.id = id;
    b.distance = dist;
    b.size = doc.graph.balls[id].size();
    if (failure) b.failure_proportion = failure->values.at(id);
    if (zscore) b.mean_z_score = zscore->values.at(id);
    return b;
  };

  LocateReport r;
  r.point = p;
  for (BallId id = 0; id < doc.graph.vertex_count(); ++id) {
    if (id >= doc.centers.size() || doc.centers[id].size() != p.size()) fail_runtime("graph JSON lacks center coordinates");
    const double d = euclidean_distance(doc.centers[id], p);
    if (d <= doc.epsilon()) r.balls.push_back(describe_ball(id, d));
  }
  std::stable_sort(r.balls.begin(), r.balls.end(), [](const auto& a, const auto& b) { return a.distance < b.distance; });

  if (failure && !r.balls.empty()) {
    std::set<BallId> containing;
    for (const auto& b : r.balls) containing.insert(b.id);
    const auto adj = doc.graph.adjacency();
    std::map<BallId, LocatedBall> safer;
    for (const auto& b : r.balls)
      for (BallId nb : adj[b.id]) {
        if (containing.count(nb) || failure->values[nb] >= *b.failure_proportion) continue;
        safer.try_emplace(nb, describe_ball(nb, euclidean_distance(doc.centers[nb], p)));
      }
    for (auto& [_, b] : safer) r.safer_neighbors.push_back(std::move(b));
    std::stable_sort(r.safer_neighbors.begin(), r.safer_neighbors.end(),
                     [](const auto& a, const auto& b) { return *a.failure_proportion < *b.failure_proportion; });
  }
  return r;
}

inline LocateReport locate_firm(const GraphDocument& doc, const altman::FirmRecord& firm) {
  if (doc.axis_names.size() != 5) fail("graph was not built on the five ratios");
  const auto x = altman::compute_ratios(firm).values();
  return locate_point(doc, x);
}

inline std::string render_locate_text(const LocateReport& r) {
  std::ostringstream o;
  auto opt = [](const std::optional<double>& v, int digits) { return v ? format_fixed(*v, digits) : std::string("n/a"); };
  o << "normalized point:";
  for (double v : r.point) o << ' ' << format_fixed(v, 4);
  o << '\n';
  if (!r.covered()) {
    o << "uncovered - outlier relative to build sample\n";
    return o.str();
  }
  o << "containing balls:\n";
  for (const auto& b : r.balls)
    o << "  ball " << b.id << "  distance " << format_fixed(b.distance, 4) << "  size " << b.size << "  failure proportion "
      << opt(b.failure_proportion, 4) << "  mean z-score " << opt(b.mean_z_score, 3) << '\n';
  if (!r.safer_neighbors.empty()) {
    o << "adjacent balls with lower failure proportion:\n";
    for (const auto& b : r.safer_neighbors)
      o << "  ball " << b.id << "  failure proportion " << opt(b.failure_proportion, 4) << "  mean z-score " << opt(b.mean_z_score, 3)
        << '\n';
  }
  return o.str();
}

}  // namespace bm
