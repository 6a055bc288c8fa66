// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "ballmapper/bmgraph.hpp"
#include "ballmapper/coloration.hpp"
#include "ballmapper/error.hpp"
#include "ballmapper/layout.hpp"

namespace bm {

namespace detail {

inline std::string fmt(double v, const char* spec = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline void check_coloration(const BallMapperGraph& graph, const Coloration* coloration) {
  if (coloration && coloration->values.size() != graph.vertex_count())
    fail("coloration '" + coloration->name + "' has " + std::to_string(coloration->values.size()) + " values for " + std::to_string(graph.vertex_count()) + " balls");
}

inline const char* kNeutralFill = "#bdbdbd";

}  // namespace detail

struct SvgOptions {
  bool legend = false;
  double width = 800.0;   // plot area, excluding legend
  double margin = 30.0;
  std::size_t label_limit = 200;  // no ball labels above this many balls
};

/**
 * Renders a colored graph as a standalone SVG 1.1 document.
 *
 * Element order is fixed (edges, balls, labels, legend) and every number is
 * printed with a fixed precision, so equal inputs give byte-equal output.
 */
inline std::string emit_svg(const BallMapperGraph& graph, const Layout& layout, const Coloration* coloration,
                            const SvgOptions& opts = {}) {
  detail::check_coloration(graph, coloration);
  if (layout.position.size() != graph.vertex_count()) fail("layout does not match graph");
  const std::size_t n = graph.vertex_count();

  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const auto& p = layout.position[v];
    const double r = layout.radius[v];
    if (v == 0 || p.x - r < min_x) min_x = p.x - r;
    if (v == 0 || p.x + r > max_x) max_x = p.x + r;
    if (v == 0 || p.y - r < min_y) min_y = p.y - r;
    if (v == 0 || p.y + r > max_y) max_y = p.y + r;
  }
  const double span_x = std::max(max_x - min_x, 1e-9);
  const double span_y = std::max(max_y - min_y, 1e-9);
  const double inner = opts.width - 2.0 * opts.margin;
  const double scale = inner / std::max(span_x, span_y);
  const double plot_h = std::max(span_y * scale + 2.0 * opts.margin, 240.0);
  const bool legend = opts.legend && coloration != nullptr;
  const double total_w = opts.width + (legend ? 120.0 : 0.0);

  auto sx = [&](double x) { return opts.margin + (x - min_x) * scale; };
  auto sy = [&](double y) { return opts.margin + (max_y - y) * scale; };

  std::optional<ColorMapping> mapping;
  if (coloration) mapping = color_scale_map(*coloration);

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << detail::fmt(total_w) << "\" height=\""
    << detail::fmt(plot_h) << "\" viewBox=\"0 0 " << detail::fmt(total_w) << ' ' << detail::fmt(plot_h) << "\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << detail::fmt(total_w) << "\" height=\"" << detail::fmt(plot_h) << "\" fill=\"#ffffff\"/>\n";

  o << "<g class=\"edges\" stroke=\"#555555\" stroke-width=\"1.5\">\n";
  for (const auto& [a, b] : graph.edges) {
    o << "<line x1=\"" << detail::fmt(sx(layout.position[a].x)) << "\" y1=\"" << detail::fmt(sy(layout.position[a].y))
      << "\" x2=\"" << detail::fmt(sx(layout.position[b].x)) << "\" y2=\"" << detail::fmt(sy(layout.position[b].y)) << "\"/>\n";
  }
  o << "</g>\n";

  o << "<g class=\"balls\" stroke=\"#333333\" stroke-width=\"1\">\n";
  for (std::size_t v = 0; v < n; ++v) {
    const std::string fill = mapping ? mapping->colors[v].hex() : detail::kNeutralFill;
    o << "<circle cx=\"" << detail::fmt(sx(layout.position[v].x)) << "\" cy=\"" << detail::fmt(sy(layout.position[v].y))
      << "\" r=\"" << detail::fmt(layout.radius[v] * scale) << "\" fill=\"" << fill << "\"/>\n";
  }
  o << "</g>\n";

  if (n <= opts.label_limit) {
    o << "<g class=\"labels\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" dominant-baseline=\"central\">\n";
    for (std::size_t v = 0; v < n; ++v) {
      o << "<text x=\"" << detail::fmt(sx(layout.position[v].x)) << "\" y=\"" << detail::fmt(sy(layout.position[v].y)) << "\">"
        << graph.balls[v].id << "</text>\n";
    }
    o << "</g>\n";
  }

  if (legend) {
    const ColorScale scale_stops;
    const double lx = opts.width + 20.0;
    const double ly = opts.margin;
    const double lh = plot_h - 2.0 * opts.margin;
    o << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"10\">\n";
    o << "<defs><linearGradient id=\"bm-scale\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">";
    for (std::size_t k = 0; k < scale_stops.stops.size(); ++k) {
      o << "<stop offset=\"" << detail::fmt(static_cast<double>(k) / static_cast<double>(scale_stops.stops.size() - 1))
        << "\" stop-color=\"" << scale_stops.stops[k].hex() << "\"/>";
    }
    o << "</linearGradient></defs>\n";
    o << "<rect x=\"" << detail::fmt(lx) << "\" y=\"" << detail::fmt(ly) << "\" width=\"18\" height=\"" << detail::fmt(lh)
      << "\" fill=\"url(#bm-scale)\" stroke=\"#333333\"/>\n";
    constexpr int ticks = 5;
    for (int t = 0; t < ticks; ++t) {
      const double f = static_cast<double>(t) / (ticks - 1);
      const double value = mapping->range_min + f * (mapping->range_max - mapping->range_min);
      const double y = ly + (1.0 - f) * lh;
      o << "<text x=\"" << detail::fmt(lx + 24.0) << "\" y=\"" << detail::fmt(y) << "\" dominant-baseline=\"central\">"
        << detail::fmt(value, "%.4g") << "</text>\n";
    }
    o << "<text x=\"" << detail::fmt(lx) << "\" y=\"" << detail::fmt(ly - 10.0) << "\">"
      << detail::xml_escape(coloration->name) << "</text>\n";
    o << "</g>\n";
  }
  o << "</svg>\n";
  return o.str();
}

/// Undirected DOT. One statement per node (size, color, value) and one per
/// edge, nodes in id order and edges lexicographic.
inline std::string emit_dot(const BallMapperGraph& graph, const Coloration* coloration) {
  detail::check_coloration(graph, coloration);
  std::optional<ColorMapping> mapping;
  if (coloration) mapping = color_scale_map(*coloration);
  std::ostringstream o;
  o << "graph ballmapper {\n";
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    const auto& b = graph.balls[v];
    o << "  " << b.id << " [shape=circle, style=filled, size=" << b.size() << ", center_index=" << b.center_index
      << ", fillcolor=\"" << (mapping ? mapping->colors[v].hex() : std::string(detail::kNeutralFill)) << "\"";
    if (coloration) o << ", value=" << detail::fmt(coloration->values[v], "%.17g");
    o << "];\n";
  }
  for (const auto& [a, b] : graph.edges) o << "  " << graph.balls[a].id << " -- " << graph.balls[b].id << ";\n";
  o << "}\n";
  return o.str();
}

/// GraphML with `size` and `color` node data keys (plus `value` when a
/// coloration is given).
inline std::string emit_graphml(const BallMapperGraph& graph, const Coloration* coloration) {
  detail::check_coloration(graph, coloration);
  std::optional<ColorMapping> mapping;
  if (coloration) mapping = color_scale_map(*coloration);
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
  o << "  <key id=\"size\" for=\"node\" attr.name=\"size\" attr.type=\"int\"/>\n";
  o << "  <key id=\"color\" for=\"node\" attr.name=\"color\" attr.type=\"string\"/>\n";
  o << "  <key id=\"center_index\" for=\"node\" attr.name=\"center_index\" attr.type=\"long\"/>\n";
  if (coloration)
    o << "  <key id=\"value\" for=\"node\" attr.name=\"" << detail::xml_escape(coloration->name) << "\" attr.type=\"double\"/>\n";
  o << "  <graph id=\"ballmapper\" edgedefault=\"undirected\">\n";
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    const auto& b = graph.balls[v];
    o << "    <node id=\"" << b.id << "\"><data key=\"size\">" << b.size() << "</data><data key=\"color\">"
      << (mapping ? mapping->colors[v].hex() : std::string(detail::kNeutralFill)) << "</data><data key=\"center_index\">"
      << b.center_index << "</data>";
    if (coloration) o << "<data key=\"value\">" << detail::fmt(coloration->values[v], "%.17g") << "</data>";
    o << "</node>\n";
  }
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto& [a, b] = graph.edges[e];
    o << "    <edge id=\"e" << e << "\" source=\"" << graph.balls[a].id << "\" target=\"" << graph.balls[b].id << "\"/>\n";
  }
  o << "  </graph>\n</graphml>\n";
  return o.str();
}

/// Structure recovered from an exported document: ids, sizes and edges.
struct ExportedGraph {
  std::vector<std::pair<BallId, std::size_t>> nodes;  // (id, size)
  std::vector<Edge> edges;
};

// Reads back documents written by emit_dot.
inline ExportedGraph read_dot(const std::string& text) {
  ExportedGraph g;
  static const std::regex node_re(R"(^\s*(\d+)\s*\[[^\]]*\bsize=(\d+))");
  static const std::regex edge_re(R"(^\s*(\d+)\s*--\s*(\d+)\s*;)");
  std::istringstream in(text);
  std::string line;
  std::smatch m;
  while (std::getline(in, line)) {
    if (std::regex_search(line, m, edge_re)) {
      g.edges.emplace_back(std::stoull(m[1]), std::stoull(m[2]));
    } else if (std::regex_search(line, m, node_re)) {
      g.nodes.emplace_back(std::stoull(m[1]), std::stoull(m[2]));
    }
  }
  return g;
}

// Reads back documents written by emit_graphml.
inline ExportedGraph read_graphml(const std::string& text) {
  ExportedGraph g;
  static const std::regex node_re(R"re(<node id="(\d+)"><data key="size">(\d+)</data>)re");
  static const std::regex edge_re(R"re(<edge id="e\d+" source="(\d+)" target="(\d+)"/>)re");
  const std::sregex_iterator done;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), node_re); it != done; ++it)
    g.nodes.emplace_back(std::stoull((*it)[1]), std::stoull((*it)[2]));
  for (auto it = std::sregex_iterator(text.begin(), text.end(), edge_re); it != done; ++it)
    g.edges.emplace_back(std::stoull((*it)[1]), std::stoull((*it)[2]));
  return g;
}

}  // namespace bm
