#pragma once

#include <string>
#include <string_view>

#include "fcdl/fcgraph.hpp"

namespace fcdl {

enum class ExportFormat { kJson, kGraphml, kDot };

/// "json" | "graphml" | "dot"; throws UnsupportedFormat otherwise.
ExportFormat parse_export_format(std::string_view name);
std::string_view extension(ExportFormat format);
std::string_view content_type(ExportFormat format);

/// Pure function of the graph value. Node and edge order follows the canonical
/// JSON. segment/fc nodes are blue and dl/fc_dl nodes green; cross edges are
/// dashed in DOT.
std::string export_graph(const FcdlGraph& graph, ExportFormat format);

}  // namespace fcdl
