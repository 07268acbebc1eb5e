#include "fcdl/export.hpp"

#include <cmath>
#include <cstdio>

#include "fcdl/error.hpp"

namespace fcdl {

namespace {

std::string fixed6(double w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", std::round(w * 1e6) / 1e6);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::string to_graphml(const FcdlGraph& g) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      "  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n"
      "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
      "  <key id=\"color\" for=\"node\" attr.name=\"color\" attr.type=\"string\"/>\n"
      "  <key id=\"edge_kind\" for=\"edge\" attr.name=\"kind\" attr.type=\"string\"/>\n"
      "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
      "  <graph id=\"fcdl\" edgedefault=\"undirected\">\n";
  for (const auto& [id, n] : g.nodes()) {
    out += "    <node id=\"" + xml_escape(id) + "\">\n";
    out += "      <data key=\"kind\">" + std::string(to_string(n.kind)) + "</data>\n";
    out += "      <data key=\"label\">" + xml_escape(n.label) + "</data>\n";
    out += "      <data key=\"color\">" + std::string(color_of(n.kind)) + "</data>\n";
    out += "    </node>\n";
  }
  for (const auto& e : g.edges()) {
    out += "    <edge source=\"" + xml_escape(e.source) + "\" target=\"" + xml_escape(e.target) + "\">\n";
    out += "      <data key=\"edge_kind\">" + std::string(to_string(e.kind)) + "</data>\n";
    out += "      <data key=\"weight\">" + fixed6(e.weight) + "</data>\n";
    out += "    </edge>\n";
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

// `weight` is an integer layout hint in Graphviz, so the distance goes into
// its own attribute.
std::string to_dot(const FcdlGraph& g) {
  std::string out = "graph fcdl {\n";
  for (const auto& [id, n] : g.nodes()) {
    out += "  " + dot_quote(id) + " [kind=" + dot_quote(to_string(n.kind)) + ", label=" + dot_quote(n.label) +
           ", color=" + std::string(color_of(n.kind)) + "];\n";
  }
  for (const auto& e : g.edges()) {
    out += "  " + dot_quote(e.source) + " -- " + dot_quote(e.target) + " [kind=" + dot_quote(to_string(e.kind)) +
           ", distance=" + fixed6(e.weight);
    if (e.kind == EdgeKind::kCross) out += ", style=dashed";
    out += "];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace

ExportFormat parse_export_format(std::string_view name) {
  if (name == "json") return ExportFormat::kJson;
  if (name == "graphml") return ExportFormat::kGraphml;
  if (name == "dot") return ExportFormat::kDot;
  throw Error(ErrorKind::kUnsupportedFormat, "unsupported export format '" + std::string(name) + "'");
}

std::string_view extension(ExportFormat format) {
  switch (format) {
    case ExportFormat::kJson: return "json";
    case ExportFormat::kGraphml: return "graphml";
    case ExportFormat::kDot: return "dot";
  }
  return "json";
}

std::string_view content_type(ExportFormat format) {
  switch (format) {
    case ExportFormat::kJson: return "application/json";
    case ExportFormat::kGraphml: return "application/graphml+xml";
    case ExportFormat::kDot: return "text/vnd.graphviz";
  }
  return "application/octet-stream";
}

std::string export_graph(const FcdlGraph& graph, ExportFormat format) {
  switch (format) {
    case ExportFormat::kJson: return to_canonical_json(graph);
    case ExportFormat::kGraphml: return to_graphml(graph);
    case ExportFormat::kDot: return to_dot(graph);
  }
  throw Error(ErrorKind::kUnsupportedFormat, "unsupported export format");
}

}  // namespace fcdl
