#pragma once

#include <string>

#include "fcdl/fcgraph.hpp"

namespace fcdl::detail {

void refresh_cluster_node(const Workspace& ws, FcdlGraph& g, const std::string& id, bool keep_label);
void refresh_cross_edges_of(const Workspace& ws, FcdlGraph& g, const std::string& id);

}  // namespace fcdl::detail
