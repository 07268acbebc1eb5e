#pragma once

// Human steering of a built graph. Every edit returns a new graph that still
// satisfies the structural invariants.

#include <string>
#include <variant>

#include <json.hpp>

#include "fcdl/fcgraph.hpp"

namespace fcdl {

/// Moves an existing dl node's membership to another fc_dl node.
struct AttachDl {
  std::string leaf_id;  // "dl-001" or "dl:dl-001"
  std::string fc_dl_id;
};

/// Removes a dl node; an fc_dl left without members goes with it.
struct DetachDl {
  std::string leaf_id;
};

struct RenameFc {
  std::string fc_id;
  std::string label;
};

/// Folds `fc_id_b` into `fc_id_a`; a keeps its id, b disappears.
struct MergeFc {
  std::string fc_id_a;
  std::string fc_id_b;
};

/// Re-runs the green phase over the current blue part.
struct SetDelta {
  double delta;
};

/// Re-runs both phases from the workspace.
struct SetTau {
  double tau;
};

using Edit = std::variant<AttachDl, DetachDl, RenameFc, MergeFc, SetDelta, SetTau>;

/// Throws UnknownNode, KindMismatch, SelfMerge or InvalidArgument. The
/// revision counter is carried over unchanged.
FcdlGraph apply_edit(const Workspace& ws, const FcdlGraph& graph, const Edit& edit);

/// {"op": "attach_dl", "leaf_id": ..., "fc_dl_id": ...}, {"op": "set_delta",
/// "delta": ...}, and so on; field names follow the structs above.
Edit edit_from_json(const nlohmann::json& j);
nlohmann::ordered_json edit_to_json(const Edit& edit);

}  // namespace fcdl
