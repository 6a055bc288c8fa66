// SPDX-License-Identifier: Apache-2.0
//
// bm: command-line front end for the Ball Mapper pipeline.
//
//   bm synth  [--spec s.json] [--seed N] --out data.csv [--raw-fields]
//   bm stats  data.csv [mapping flags] [--format text|csv]
//   bm build  data.csv [mapping flags] --epsilon E --out graph.json [--manifest m.json]
//   bm build  --from-manifest m.json
//   bm color  graph.json --manifest m.json --color-by COL [--aggregate FN] --out graph.json
//   bm render graph.json --format svg|dot|graphml [--seed N] [--iterations N] [--legend]
//   bm locate graph.json (--point v1,v2,... | --firm act=..,lct=..,...)
//
// Exit codes: 0 success, 1 runtime failure, 2 configuration or input error.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ballmapper/ballmapper.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct MappingFlags {
  std::string input;
  std::string axes = "x1,x2,x3,x4,x5";
  bool raw_fields = false;
  std::map<std::string, std::string> raw_columns;
  std::string failure_column = "failed";
  std::string delrsn_column = "delrsn";
  std::string year_column = "fyear";
  std::optional<int> year;
  bool no_winsorize = false;
  double lower_pct = 1.0;
  double upper_pct = 99.0;
  bool no_normalize = false;
  std::string failure_codes = "02,03";
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

void add_mapping_flags(CLI::App* cmd, MappingFlags& m, bool input_required) {
  auto* in = cmd->add_option("input", m.input, "Input CSV with a header row");
  if (input_required) in->required();
  cmd->add_option("--axes", m.axes, "Comma-separated ratio columns (ratio mode)")->capture_default_str();
  cmd->add_flag("--raw-fields", m.raw_fields, "Input holds raw accounting fields; ratios are computed");
  for (auto f : bm::altman::kRawFields) {
    const std::string field(f);
    cmd->add_option_function<std::string>("--col-" + field, [&m, field](const std::string& v) { m.raw_columns[field] = v; },
                                          "CSV column holding '" + field + "'");
  }
  cmd->add_option("--col-failed", m.failure_column, "0/1 failure column (ratio mode)")->capture_default_str();
  cmd->add_option("--col-delrsn", m.delrsn_column, "Deletion-reason column (raw mode)")->capture_default_str();
  cmd->add_option("--col-year", m.year_column, "Fiscal-year column")->capture_default_str();
  cmd->add_option("--year", m.year, "Keep only this fiscal year (after winsorizing the full sample)");
  cmd->add_flag("--no-winsorize", m.no_winsorize, "Skip winsorization");
  cmd->add_option("--winsorize-lower", m.lower_pct, "Lower winsorization percentile")->capture_default_str();
  cmd->add_option("--winsorize-upper", m.upper_pct, "Upper winsorization percentile")->capture_default_str();
  cmd->add_flag("--no-normalize", m.no_normalize, "Skip min-max normalization");
  cmd->add_option("--failure-codes", m.failure_codes, "Deletion reasons counted as failure")->capture_default_str();
}

bm::RunConfig to_config(const MappingFlags& m) {
  bm::RunConfig c;
  c.input = m.input;
  c.raw_fields = m.raw_fields;
  c.axes = split(m.axes, ',');
  c.raw_columns = m.raw_columns;
  c.failure_column = m.failure_column;
  c.delrsn_column = m.delrsn_column;
  c.year_column = m.year_column;
  c.year = m.year;
  c.winsorize = !m.no_winsorize;
  c.lower_pct = m.lower_pct;
  c.upper_pct = m.upper_pct;
  c.normalize = !m.no_normalize;
  const auto codes = split(m.failure_codes, ',');
  c.failure_codes = {codes.begin(), codes.end()};
  return c;
}

std::vector<bm::ColorRequest> color_requests(const std::vector<std::string>& columns, const std::vector<std::string>& aggregates) {
  if (aggregates.size() > columns.size()) bm::fail("--aggregate given more often than --color-by");
  std::vector<bm::ColorRequest> out;
  for (std::size_t k = 0; k < columns.size(); ++k)
    out.push_back({columns[k], k < aggregates.size() ? bm::parse_aggregator(aggregates[k]) : bm::Aggregator::mean});
  return out;
}

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") std::cout << content;
  else bm::csv::write_file(path, content);
}

void print_warnings(const bm::Dataset& data) {
  for (const auto& w : data.warnings) std::cerr << "warning: " << w << '\n';
  if (data.dropped_rows) std::cerr << "dropped " << data.dropped_rows << " incomplete rows of " << data.rows_read << '\n';
}

bm::altman::FirmRecord parse_firm(const std::string& spec) {
  bm::altman::FirmRecord f;
  std::set<std::string> seen;
  for (const auto& kv : split(spec, ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) bm::fail("firm field '" + kv + "' is not name=value");
    const auto name = kv.substr(0, eq);
    const auto v = bm::csv::parse_number(kv.substr(eq + 1));
    if (!v) bm::fail("firm field '" + name + "' is not a number");
    bm::altman::field(f, name) = *v;
    seen.insert(name);
  }
  for (auto need : bm::altman::kRawFields)
    if (!seen.count(std::string(need))) bm::fail("firm is missing field '" + std::string(need) + "'");
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ball Mapper graphs of point clouds, with an Altman Z-score layer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", bm::kVersion);

  // synth
  std::string synth_spec, synth_out = "-";
  std::optional<std::uint64_t> synth_seed;
  bool synth_raw = false;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic clustered firm sample");
  synth->add_option("--spec", synth_spec, "Scenario JSON (default: built-in two-cluster scenario)");
  synth->add_option("--seed", synth_seed, "Override the scenario seed");
  synth->add_option("--out", synth_out, "Output CSV ('-' for stdout)");
  synth->add_flag("--raw-fields", synth_raw, "Write raw accounting fields instead of ratios");

  // stats
  MappingFlags stats_map;
  std::string stats_format = "text", stats_out = "-";
  auto* stats = app.add_subcommand("stats", "Summary statistics, correlations and failure rates");
  add_mapping_flags(stats, stats_map, true);
  stats->add_option("--format", stats_format, "text or csv")->check(CLI::IsMember({"text", "csv"}))->capture_default_str();
  stats->add_option("--out", stats_out, "Output path ('-' for stdout)");

  // build
  MappingFlags build_map;
  double build_eps = 0.4;
  std::optional<std::uint64_t> build_seed;
  std::vector<std::string> build_color_by, build_aggregate;
  std::string build_out, build_manifest, build_from_manifest;
  auto* build = app.add_subcommand("build", "Build and color a Ball Mapper graph");
  add_mapping_flags(build, build_map, false);
  build->add_option("--epsilon", build_eps, "Ball radius in the (normalized) cloud")->capture_default_str();
  build->add_option("--seed", build_seed, "Shuffle the cover order with this seed (default: row order)");
  build->add_option("--color-by", build_color_by, "Outcome column to color by (repeatable)");
  build->add_option("--aggregate", build_aggregate, "mean|count|std_dev|min|max|proportion, paired with --color-by");
  build->add_option("--out", build_out, "Graph JSON output path");
  build->add_option("--manifest", build_manifest, "Run manifest output path");
  build->add_option("--from-manifest", build_from_manifest, "Replay the run recorded in a manifest");

  // color
  std::string color_graph, color_manifest, color_out;
  std::vector<std::string> color_by, color_aggregate;
  auto* color = app.add_subcommand("color", "Add colorations to a built graph");
  color->add_option("graph", color_graph, "Graph JSON")->required();
  color->add_option("--manifest", color_manifest, "Manifest of the build that produced the graph")->required();
  color->add_option("--color-by", color_by, "Outcome column (repeatable)")->required();
  color->add_option("--aggregate", color_aggregate, "Aggregator paired with --color-by");
  color->add_option("--out", color_out, "Output path (default: overwrite the graph)");

  // render
  std::string render_graph, render_format = "svg", render_out = "-", render_color;
  std::uint64_t render_seed = 1;
  int render_iterations = 300;
  bool render_legend = false;
  std::size_t render_label_limit = 200;
  auto* render = app.add_subcommand("render", "Render a graph as SVG, DOT or GraphML");
  render->add_option("graph", render_graph, "Graph JSON")->required();
  render->add_option("--format", render_format, "svg, dot or graphml")->check(CLI::IsMember({"svg", "dot", "graphml"}))->capture_default_str();
  render->add_option("--seed", render_seed, "Layout seed")->capture_default_str();
  render->add_option("--iterations", render_iterations, "Layout iterations")->capture_default_str();
  render->add_flag("--legend", render_legend, "Draw the color legend (SVG)");
  render->add_option("--color", render_color, "Coloration name (default: first stored)");
  render->add_option("--label-limit", render_label_limit, "Omit ball labels above this many balls")->capture_default_str();
  render->add_option("--out", render_out, "Output path ('-' for stdout)");

  // locate
  std::string locate_graph, locate_point, locate_firm;
  auto* locate = app.add_subcommand("locate", "Place a firm on a built graph");
  locate->add_option("graph", locate_graph, "Graph JSON")->required();
  auto* point_opt = locate->add_option("--point", locate_point, "Comma-separated axis values in raw (pre-normalization) units");
  auto* firm_opt = locate->add_option("--firm", locate_firm, "Raw fields: act=..,lct=..,at=..,re=..,ni=..,xint=..,txt=..,csho=..,prcc_f=..,tl=..,sale=..");
  point_opt->excludes(firm_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (synth->parsed()) {
      auto scenario = synth_spec.empty() ? bm::synth::default_scenario() : bm::synth::parse_scenario(bm::csv::read_file(synth_spec));
      if (synth_seed) scenario.seed = *synth_seed;
      const auto rows = bm::synth::generate(scenario);
      write_or_print(synth_out, synth_raw ? bm::synth::raw_csv(rows, scenario.clusters) : bm::synth::ratio_csv(rows, scenario.clusters));
    } else if (stats->parsed()) {
      auto config = to_config(stats_map);
      const auto data = bm::ingest(config);
      print_warnings(data);
      const auto report = bm::stats_for(data);
      write_or_print(stats_out, stats_format == "csv" ? bm::render_stats_csv(report) : bm::render_stats_text(report));
    } else if (build->parsed()) {
      bm::RunConfig config;
      if (!build_from_manifest.empty()) {
        config = bm::config_from_manifest(bm::csv::read_file(build_from_manifest));
        if (!build_out.empty()) config.output = build_out;
        if (!build_manifest.empty()) config.manifest = build_manifest;
      } else {
        if (build_map.input.empty()) bm::fail("build needs an input CSV or --from-manifest");
        config = to_config(build_map);
        config.epsilon = build_eps;
        config.order_seed = build_seed;
        config.colorations = color_requests(build_color_by, build_aggregate);
        config.output = build_out;
        config.manifest = build_manifest;
      }
      if (config.output.empty()) bm::fail("build needs --out");
      const auto data = bm::ingest(config);
      print_warnings(data);
      const auto result = bm::run_build_on(config, data);
      const auto s = bm::graph_stats(result.document.graph);
      std::cerr << "points " << result.data.cloud.size() << ", balls " << s.vertices << ", edges " << s.edges << ", components "
                << s.components << '\n';
    } else if (color->parsed()) {
      auto doc = bm::from_json_text(bm::csv::read_file(color_graph));
      const auto config = bm::config_from_manifest(bm::csv::read_file(color_manifest));
      doc = bm::cmd_color(std::move(doc), config, color_requests(color_by, color_aggregate));
      bm::csv::write_file(color_out.empty() ? color_graph : color_out, bm::to_json_text(doc));
    } else if (render->parsed()) {
      const auto doc = bm::from_json_text(bm::csv::read_file(render_graph));
      const bm::Coloration* coloration = nullptr;
      if (!render_color.empty()) {
        const auto it = doc.colorations.find(render_color);
        if (it == doc.colorations.end()) bm::fail("graph has no coloration '" + render_color + "'");
        coloration = &it->second;
      } else if (!doc.colorations.empty()) {
        coloration = &doc.colorations.begin()->second;
      }
      std::string out;
      if (render_format == "svg") {
        if (doc.graph.vertex_count() == 0) bm::fail("graph has no balls");
        const auto layout = bm::layout_force_directed(doc.graph, render_seed, render_iterations);
        bm::SvgOptions opts;
        opts.legend = render_legend;
        opts.label_limit = render_label_limit;
        out = bm::emit_svg(doc.graph, layout, coloration, opts);
      } else if (render_format == "dot") {
        out = bm::emit_dot(doc.graph, coloration);
      } else {
        out = bm::emit_graphml(doc.graph, coloration);
      }
      write_or_print(render_out, out);
    } else if (locate->parsed()) {
      const auto doc = bm::from_json_text(bm::csv::read_file(locate_graph));
      bm::LocateReport report;
      if (!locate_firm.empty()) {
        report = bm::locate_firm(doc, parse_firm(locate_firm));
      } else if (!locate_point.empty()) {
        std::vector<double> p;
        for (const auto& s : split(locate_point, ',')) {
          const auto v = bm::csv::parse_number(s);
          if (!v) bm::fail("--point value '" + s + "' is not a number");
          p.push_back(*v);
        }
        report = bm::locate_point(doc, p);
      } else {
        bm::fail("locate needs --point or --firm");
      }
      std::cout << bm::render_locate_text(report);
    }
  } catch (const bm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == bm::ErrorKind::config ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
