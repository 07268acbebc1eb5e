#include "fcdl/edit.hpp"

#include "fcdl/error.hpp"
#include "graph_detail.hpp"

namespace fcdl {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const Node& expect(const FcdlGraph& g, const std::string& id, NodeKind kind) {
  const Node& n = g.at(id);
  if (n.kind != kind) {
    throw Error(ErrorKind::kKindMismatch, "node '" + id + "' is " + std::string(to_string(n.kind)) +
                                              ", expected " + std::string(to_string(kind)));
  }
  return n;
}

std::string resolve_dl(const FcdlGraph& g, const std::string& leaf_id) {
  if (g.find(dl_node_id(leaf_id)) != nullptr) return dl_node_id(leaf_id);
  if (leaf_id.rfind("dl:", 0) == 0 && g.find(leaf_id) != nullptr) return leaf_id;
  throw Error(ErrorKind::kUnknownNode, "leaf '" + leaf_id + "' is not in the graph");
}

// Drops the fc_dl node if it lost its last member, else refreshes it.
void settle_fc_dl(const Workspace& ws, FcdlGraph& g, const std::string& id) {
  if (g.members(id).empty()) {
    g.remove_node(id);
    return;
  }
  detail::refresh_cluster_node(ws, g, id, false);
  detail::refresh_cross_edges_of(ws, g, id);
}

FcdlGraph attach(const Workspace& ws, FcdlGraph g, const AttachDl& e) {
  const std::string dl = resolve_dl(g, e.leaf_id);
  expect(g, dl, NodeKind::kDl);
  expect(g, e.fc_dl_id, NodeKind::kFcDl);
  const std::string old = g.parent(dl);
  if (old == e.fc_dl_id) return g;
  g.remove_edge(dl, old, EdgeKind::kMembership);
  g.put_edge({dl, e.fc_dl_id, EdgeKind::kMembership, 0.0});
  settle_fc_dl(ws, g, e.fc_dl_id);
  settle_fc_dl(ws, g, old);
  return g;
}

FcdlGraph detach(const Workspace& ws, FcdlGraph g, const DetachDl& e) {
  const std::string dl = resolve_dl(g, e.leaf_id);
  expect(g, dl, NodeKind::kDl);
  const std::string old = g.parent(dl);
  g.remove_node(dl);
  settle_fc_dl(ws, g, old);
  return g;
}

FcdlGraph rename(FcdlGraph g, const RenameFc& e) {
  Node n = expect(g, e.fc_id, NodeKind::kFc);
  if (e.label.empty()) throw Error(ErrorKind::kInvalidArgument, "label must not be empty");
  n.label = e.label;
  g.put_node(std::move(n));
  return g;
}

FcdlGraph merge(const Workspace& ws, FcdlGraph g, const MergeFc& e) {
  expect(g, e.fc_id_a, NodeKind::kFc);
  expect(g, e.fc_id_b, NodeKind::kFc);
  if (e.fc_id_a == e.fc_id_b) throw Error(ErrorKind::kSelfMerge, "cannot merge '" + e.fc_id_a + "' with itself");
  const auto moved = g.members(e.fc_id_b);
  g.remove_node(e.fc_id_b);
  for (const auto& m : moved) g.put_edge({m, e.fc_id_a, EdgeKind::kMembership, 0.0});
  detail::refresh_cluster_node(ws, g, e.fc_id_a, false);
  detail::refresh_cross_edges_of(ws, g, e.fc_id_a);
  return g;
}

double number(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw Error(ErrorKind::kParseError, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::string text(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw Error(ErrorKind::kParseError, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

FcdlGraph apply_edit(const Workspace& ws, const FcdlGraph& graph, const Edit& edit) {
  return std::visit(
      Overloaded{
          [&](const AttachDl& e) { return attach(ws, graph, e); },
          [&](const DetachDl& e) { return detach(ws, graph, e); },
          [&](const RenameFc& e) { return rename(graph, e); },
          [&](const MergeFc& e) { return merge(ws, graph, e); },
          [&](const SetDelta& e) { return collect_connect_dls(ws, graph, e.delta); },
          [&](const SetTau& e) {
            GraphParams p = graph.params;
            p.tau = e.tau;
            FcdlGraph g = build_graph(ws, p);
            g.revision = graph.revision;
            return g;
          },
      },
      edit);
}

Edit edit_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorKind::kParseError, "edit must be an object");
    const std::string op = text(j, "op");
    if (op == "attach_dl") return AttachDl{text(j, "leaf_id"), text(j, "fc_dl_id")};
    if (op == "detach_dl") return DetachDl{text(j, "leaf_id")};
    if (op == "rename_fc") return RenameFc{text(j, "fc_id"), text(j, "label")};
    if (op == "merge_fc") return MergeFc{text(j, "fc_id_a"), text(j, "fc_id_b")};
    if (op == "set_delta") return SetDelta{number(j, "delta")};
    if (op == "set_tau") return SetTau{number(j, "tau")};
    throw Error(ErrorKind::kParseError, "unknown edit op '" + op + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("edit: ") + e.what());
  }
}

nlohmann::ordered_json edit_to_json(const Edit& edit) {
  nlohmann::ordered_json j;
  std::visit(Overloaded{
                 [&](const AttachDl& e) {
                   j["op"] = "attach_dl";
                   j["leaf_id"] = e.leaf_id;
                   j["fc_dl_id"] = e.fc_dl_id;
                 },
                 [&](const DetachDl& e) {
                   j["op"] = "detach_dl";
                   j["leaf_id"] = e.leaf_id;
                 },
                 [&](const RenameFc& e) {
                   j["op"] = "rename_fc";
                   j["fc_id"] = e.fc_id;
                   j["label"] = e.label;
                 },
                 [&](const MergeFc& e) {
                   j["op"] = "merge_fc";
                   j["fc_id_a"] = e.fc_id_a;
                   j["fc_id_b"] = e.fc_id_b;
                 },
                 [&](const SetDelta& e) {
                   j["op"] = "set_delta";
                   j["delta"] = e.delta;
                 },
                 [&](const SetTau& e) {
                   j["op"] = "set_tau";
                   j["tau"] = e.tau;
                 },
             },
             edit);
  return j;
}

}  // namespace fcdl
