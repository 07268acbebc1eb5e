#include "fcdl/fcgraph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <tuple>

#include <openssl/evp.h>

#include "fcdl/cluster.hpp"
#include "fcdl/error.hpp"
#include "graph_detail.hpp"

namespace fcdl {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::size_t kLabelTerms = 3;

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> head(const std::vector<std::string>& v, std::size_t n) {
  return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min(n, v.size()))};
}

auto edge_key(const Edge& e) { return std::make_tuple(std::string_view(e.source), std::string_view(e.target), to_string(e.kind)); }

bool edge_less(const Edge& a, const Edge& b) { return edge_key(a) < edge_key(b); }

double round6(double w) { return std::round(w * 1e6) / 1e6; }

// "s12" -> 12 when `id` is `prefix` followed by decimal digits only.
bool has_numeric_suffix(std::string_view id, std::string_view prefix) {
  if (id.size() <= prefix.size() || id.substr(0, prefix.size()) != prefix) return false;
  auto rest = id.substr(prefix.size());
  if (rest.size() > 1 && rest[0] == '0') return false;
  return std::all_of(rest.begin(), rest.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::size_t numeric_suffix(std::string_view id, std::string_view prefix) {
  std::size_t v = 0;
  auto rest = id.substr(prefix.size());
  std::from_chars(rest.data(), rest.data() + rest.size(), v);
  return v;
}

std::string_view leaf_id_of(std::string_view dl_node_id) { return dl_node_id.substr(3); }

TermVector member_centroid(const Workspace& ws, const FcdlGraph& g, std::string_view cluster_id) {
  std::vector<TermVector> vs;
  for (const auto& m : g.members(cluster_id)) vs.push_back(node_vector(ws, g, m));
  if (vs.empty()) return {};
  return centroid(vs);
}

}  // namespace

// --- kinds and ids ---

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kSegment: return "segment";
    case NodeKind::kFc: return "fc";
    case NodeKind::kDl: return "dl";
    case NodeKind::kFcDl: return "fc_dl";
  }
  return "segment";
}

std::string_view to_string(EdgeKind kind) {
  return kind == EdgeKind::kMembership ? "membership" : "cross";
}

NodeKind parse_node_kind(std::string_view name) {
  if (name == "segment") return NodeKind::kSegment;
  if (name == "fc") return NodeKind::kFc;
  if (name == "dl") return NodeKind::kDl;
  if (name == "fc_dl") return NodeKind::kFcDl;
  throw Error(ErrorKind::kParseError, "unknown node kind '" + std::string(name) + "'");
}

EdgeKind parse_edge_kind(std::string_view name) {
  if (name == "membership") return EdgeKind::kMembership;
  if (name == "cross") return EdgeKind::kCross;
  throw Error(ErrorKind::kParseError, "unknown edge kind '" + std::string(name) + "'");
}

bool is_green(NodeKind kind) { return kind == NodeKind::kDl || kind == NodeKind::kFcDl; }

std::string_view color_of(NodeKind kind) { return is_green(kind) ? "green" : "blue"; }

void GraphParams::validate() const {
  if (!(delta >= 0.0 && delta <= 1.0)) throw Error(ErrorKind::kInvalidArgument, "delta must lie in [0, 1]");
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorKind::kInvalidArgument, "tau must lie in [0, 1]");
  if (k == 0) throw Error(ErrorKind::kInvalidArgument, "k must be at least 1");
}

std::string segment_node_id(std::size_t index) { return "s" + std::to_string(index); }
std::string fc_node_id(std::size_t j) { return "f" + std::to_string(j); }
std::string dl_node_id(std::string_view leaf_id) { return "dl:" + std::string(leaf_id); }
std::string fc_dl_node_id(std::size_t j) { return "fdl" + std::to_string(j); }

// --- FcdlGraph ---

const Node* FcdlGraph::find(std::string_view id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const Node& FcdlGraph::at(std::string_view id) const {
  const Node* n = find(id);
  if (n == nullptr) throw Error(ErrorKind::kUnknownNode, "no node '" + std::string(id) + "'");
  return *n;
}

std::vector<const Node*> FcdlGraph::nodes_of(NodeKind kind) const {
  std::vector<const Node*> out;
  for (const auto& [_, n] : nodes_) {
    if (n.kind == kind) out.push_back(&n);
  }
  return out;
}

std::vector<std::string> FcdlGraph::members(std::string_view cluster_id) const {
  std::vector<std::string> out;
  for (const auto& e : edges_) {
    if (e.kind == EdgeKind::kMembership && e.target == cluster_id) out.push_back(e.source);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string FcdlGraph::parent(std::string_view member_id) const {
  for (const auto& e : edges_) {
    if (e.kind == EdgeKind::kMembership && e.source == member_id) return e.target;
  }
  return {};
}

void FcdlGraph::put_node(Node node) {
  auto id = node.id;
  nodes_.insert_or_assign(std::move(id), std::move(node));
}

void FcdlGraph::remove_node(std::string_view id) {
  if (auto it = nodes_.find(id); it != nodes_.end()) nodes_.erase(it);
  std::erase_if(edges_, [&](const Edge& e) { return e.source == id || e.target == id; });
}

void FcdlGraph::put_edge(Edge edge) {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), edge, edge_less);
  if (it != edges_.end() && edge_key(*it) == edge_key(edge)) {
    it->weight = edge.weight;
  } else {
    edges_.insert(it, std::move(edge));
  }
}

void FcdlGraph::remove_edge(std::string_view source, std::string_view target, EdgeKind kind) {
  std::erase_if(edges_, [&](const Edge& e) { return e.source == source && e.target == target && e.kind == kind; });
}

// --- serialization ---

std::string to_canonical_json(const FcdlGraph& graph) {
  ordered_json j;
  auto& meta = j["meta"];
  meta["delta"] = graph.params.delta;
  meta["tau"] = graph.params.tau;
  meta["k"] = graph.params.k;
  meta["source_hash"] = graph.provenance.source_hash;
  meta["base_hash"] = graph.provenance.base_hash;
  meta["revision"] = graph.revision;
  auto& nodes = j["nodes"] = ordered_json::array();
  for (const auto& [id, n] : graph.nodes()) {
    ordered_json node;
    node["id"] = id;
    node["kind"] = to_string(n.kind);
    node["label"] = n.label;
    node["text"] = n.text;
    node["abstract"] = n.abstract;
    nodes.push_back(std::move(node));
  }
  auto& edges = j["edges"] = ordered_json::array();
  for (const auto& e : graph.edges()) {
    ordered_json edge;
    edge["source"] = e.source;
    edge["target"] = e.target;
    edge["kind"] = to_string(e.kind);
    edge["weight"] = round6(e.weight);
    edges.push_back(std::move(edge));
  }
  return j.dump(2) + "\n";
}

FcdlGraph graph_from_json(std::string_view json_text) {
  FcdlGraph g;
  try {
    auto j = json::parse(json_text.begin(), json_text.end());
    const auto& meta = j.at("meta");
    g.params.delta = meta.at("delta").get<double>();
    g.params.tau = meta.at("tau").get<double>();
    g.params.k = meta.at("k").get<std::size_t>();
    g.provenance.source_hash = meta.at("source_hash").get<std::string>();
    g.provenance.base_hash = meta.at("base_hash").get<std::string>();
    g.revision = meta.at("revision").get<std::uint64_t>();
    for (const auto& n : j.at("nodes")) {
      Node node;
      node.id = n.at("id").get<std::string>();
      node.kind = parse_node_kind(n.at("kind").get<std::string>());
      node.label = n.at("label").get<std::string>();
      node.text = n.at("text").get<std::string>();
      node.abstract = n.at("abstract").get<std::vector<std::string>>();
      if (g.find(node.id) != nullptr) throw Error(ErrorKind::kParseError, "duplicate node id '" + node.id + "'");
      g.put_node(std::move(node));
    }
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    for (const auto& e : j.at("edges")) {
      Edge edge;
      edge.source = e.at("source").get<std::string>();
      edge.target = e.at("target").get<std::string>();
      edge.kind = parse_edge_kind(e.at("kind").get<std::string>());
      edge.weight = e.at("weight").get<double>();
      if (!seen.emplace(edge.source, edge.target, std::string(to_string(edge.kind))).second) {
        throw Error(ErrorKind::kParseError, "duplicate edge " + edge.source + " -> " + edge.target);
      }
      g.put_edge(std::move(edge));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("graph JSON: ") + e.what());
  }
  g.params.validate();
  if (auto bad = invariant_violations(g); !bad.empty()) {
    throw Error(ErrorKind::kParseError, "graph JSON violates invariants: " + bad.front());
  }
  return g;
}

bool operator==(const FcdlGraph& a, const FcdlGraph& b) {
  return to_canonical_json(a) == to_canonical_json(b);
}

std::vector<std::string> invariant_violations(const FcdlGraph& g) {
  std::vector<std::string> bad;
  for (const auto& [id, n] : g.nodes()) {
    bool ok = false;
    switch (n.kind) {
      case NodeKind::kSegment: ok = has_numeric_suffix(id, "s"); break;
      case NodeKind::kFc: ok = has_numeric_suffix(id, "f"); break;
      case NodeKind::kFcDl: ok = has_numeric_suffix(id, "fdl"); break;
      case NodeKind::kDl: ok = id.size() > 3 && id.compare(0, 3, "dl:") == 0; break;
    }
    if (!ok) bad.push_back("node id '" + id + "' does not match kind " + std::string(to_string(n.kind)));
  }

  std::map<std::string, int, std::less<>> out_membership;
  std::map<std::string, int, std::less<>> in_membership;
  std::set<std::tuple<std::string_view, std::string_view, std::string_view>> triples;
  for (const auto& e : g.edges()) {
    const Node* s = g.find(e.source);
    const Node* t = g.find(e.target);
    const std::string name = e.source + " -> " + e.target;
    if (s == nullptr || t == nullptr) {
      bad.push_back("dangling edge " + name);
      continue;
    }
    if (e.source == e.target) bad.push_back("self-loop on " + e.source);
    if (!triples.emplace(e.source, e.target, to_string(e.kind)).second) bad.push_back("duplicate edge " + name);
    if (e.kind == EdgeKind::kMembership) {
      const bool ok = (s->kind == NodeKind::kSegment && t->kind == NodeKind::kFc) ||
                      (s->kind == NodeKind::kDl && t->kind == NodeKind::kFcDl);
      if (!ok) bad.push_back("membership edge between wrong kinds: " + name);
      ++out_membership[e.source];
      ++in_membership[e.target];
    } else if (!(s->kind == NodeKind::kFc && t->kind == NodeKind::kFcDl)) {
      bad.push_back("cross edge between wrong kinds: " + name);
    }
  }
  for (const auto& [id, n] : g.nodes()) {
    if (n.kind == NodeKind::kSegment || n.kind == NodeKind::kDl) {
      auto it = out_membership.find(id);
      int count = it == out_membership.end() ? 0 : it->second;
      if (count != 1) bad.push_back(id + " has " + std::to_string(count) + " membership edges");
    } else if (in_membership.find(id) == in_membership.end()) {
      bad.push_back(id + " has no members");
    }
  }
  return bad;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::kIoError, "SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

// --- Workspace ---

Workspace::Workspace(std::string text, DlBase base, Granularity granularity)
    : text_(std::move(text)), base_(std::move(base)), granularity_(granularity) {
  segments_ = segment(text_, granularity_);
  if (segments_.empty()) throw Error(ErrorKind::kEmptyText, "requirement text has no segments");

  std::vector<TokenList> corpus;
  corpus.reserve(segments_.size() + base_.size());
  for (const auto& s : segments_) corpus.push_back(tokenize(s.text));
  for (const auto& l : base_.leaves()) corpus.push_back(leaf_tokens(l));
  space_ = VectorSpace::build(corpus);

  for (std::size_t i = 0; i < segments_.size(); ++i) segment_vectors_.push_back(space_.embed(corpus[i]));
  for (std::size_t i = 0; i < base_.size(); ++i) {
    leaf_vectors_.emplace(base_.leaves()[i].id, space_.embed(corpus[segments_.size() + i]));
  }
  source_hash_ = sha256_hex(text_);
  base_hash_ = sha256_hex(serialize_dl_base(base_, BaseFormat::kJson));
}

const TermVector& Workspace::segment_vector(std::size_t index) const {
  if (index >= segment_vectors_.size()) {
    throw Error(ErrorKind::kUnknownNode, "no segment " + std::to_string(index));
  }
  return segment_vectors_[index];
}

const TermVector& Workspace::leaf_vector(std::string_view leaf_id) const {
  auto it = leaf_vectors_.find(leaf_id);
  if (it == leaf_vectors_.end()) {
    throw Error(ErrorKind::kUnknownNode, "leaf '" + std::string(leaf_id) + "' is not in the DL base");
  }
  return it->second;
}

TermVector node_vector(const Workspace& ws, const FcdlGraph& graph, std::string_view id) {
  const Node& n = graph.at(id);
  switch (n.kind) {
    case NodeKind::kSegment: return ws.segment_vector(numeric_suffix(id, "s"));
    case NodeKind::kDl: return ws.leaf_vector(leaf_id_of(id));
    case NodeKind::kFc:
    case NodeKind::kFcDl: return member_centroid(ws, graph, id);
  }
  return {};
}

// --- phases ---

namespace {

// Recomputes label, abstract, text and member edge weights of an fc or fc_dl
// node from its current members.
void refresh_cluster(const Workspace& ws, FcdlGraph& g, const std::string& id, bool keep_label = false) {
  Node node = g.at(id);
  const auto member_ids = g.members(id);
  std::vector<TermVector> vs;
  std::vector<std::string> texts;
  for (const auto& m : member_ids) {
    vs.push_back(node_vector(ws, g, m));
    const Node& mn = g.at(m);
    texts.push_back(mn.kind == NodeKind::kSegment ? mn.text : mn.label);
  }
  const TermVector cen = centroid(vs);
  if (!keep_label) node.label = join(cen.top_terms(kLabelTerms), ", ");
  node.abstract = cen.top_terms(g.params.k);
  node.text = join(texts, node.kind == NodeKind::kFc ? " " : "; ");
  g.put_node(std::move(node));
  for (std::size_t i = 0; i < member_ids.size(); ++i) {
    g.put_edge({member_ids[i], id, EdgeKind::kMembership, cosine_distance(vs[i], cen)});
  }
}

// Rebuilds every cross edge touching `id` (an fc or fc_dl node).
void refresh_cross_edges(const Workspace& ws, FcdlGraph& g, const std::string& id) {
  const Node& node = g.at(id);
  const bool is_fc = node.kind == NodeKind::kFc;
  g.remove_edges_if([&](const Edge& e) {
    return e.kind == EdgeKind::kCross && (e.source == id || e.target == id);
  });
  const TermVector self = node_vector(ws, g, id);
  for (const Node* other : g.nodes_of(is_fc ? NodeKind::kFcDl : NodeKind::kFc)) {
    const double d = cosine_distance(self, node_vector(ws, g, other->id));
    if (d < g.params.delta) {
      g.put_edge({is_fc ? id : other->id, is_fc ? other->id : id, EdgeKind::kCross, d});
    }
  }
}

}  // namespace

FcdlGraph create_fc_graph(const Workspace& ws, const GraphParams& params) {
  params.validate();
  FcdlGraph g;
  g.params = params;
  g.provenance = {ws.source_hash(), ws.base_hash()};

  std::vector<ClusterItem> items;
  for (const auto& seg : ws.segments()) {
    Node node;
    node.id = segment_node_id(seg.index);
    node.kind = NodeKind::kSegment;
    node.text = seg.text;
    node.abstract = make_abstract(seg, ws.space(), params.k);
    node.label = join(head(node.abstract, kLabelTerms), ", ");
    g.put_node(std::move(node));
    items.push_back({seg.index, ws.segment_vector(seg.index)});
  }

  const auto clusters = agglomerate(items, params.tau);
  for (std::size_t j = 0; j < clusters.size(); ++j) {
    const std::string fid = fc_node_id(j);
    g.put_node({fid, NodeKind::kFc, {}, {}, {}});
    for (auto idx : clusters[j].member_ids) {
      g.put_edge({segment_node_id(idx), fid, EdgeKind::kMembership, 0.0});
    }
    refresh_cluster(ws, g, fid);
  }
  return g;
}

FcdlGraph create_fc_graph(std::string_view text, const DlBase& base, const GraphParams& params) {
  return create_fc_graph(Workspace(std::string(text), base), params);
}

FcdlGraph strip_green(const FcdlGraph& graph) {
  FcdlGraph g = graph;
  for (const auto& [id, n] : graph.nodes()) {
    if (is_green(n.kind)) g.remove_node(id);
  }
  return g;
}

FcdlGraph collect_connect_dls(const Workspace& ws, const FcdlGraph& graph, double delta) {
  FcdlGraph g = strip_green(graph);
  g.params.delta = delta;
  g.params.validate();

  std::vector<FcVector> fcs;
  for (const Node* fc : g.nodes_of(NodeKind::kFc)) fcs.emplace_back(fc->id, node_vector(ws, g, fc->id));
  if (fcs.empty()) throw Error(ErrorKind::kInvalidArgument, "graph has no fc nodes");

  const auto delta_set = collect(ws.base(), fcs, ws.space(), delta);
  if (delta_set.empty()) return g;

  std::vector<ClusterItem> items;
  for (std::size_t i = 0; i < delta_set.size(); ++i) {
    const auto& leaf_id = delta_set[i].leaf_id;
    const DataLeaf* leaf = ws.base().find(leaf_id);
    Node node;
    node.id = dl_node_id(leaf_id);
    node.kind = NodeKind::kDl;
    node.label = leaf->name;
    node.text = leaf->summary;
    node.abstract = ws.leaf_vector(leaf_id).top_terms(g.params.k);
    g.put_node(std::move(node));
    items.push_back({i, ws.leaf_vector(leaf_id)});
  }

  const auto clusters = agglomerate(items, g.params.tau);
  for (std::size_t j = 0; j < clusters.size(); ++j) {
    const std::string gid = fc_dl_node_id(j);
    g.put_node({gid, NodeKind::kFcDl, {}, {}, {}});
    for (auto i : clusters[j].member_ids) {
      g.put_edge({dl_node_id(delta_set[i].leaf_id), gid, EdgeKind::kMembership, 0.0});
    }
    refresh_cluster(ws, g, gid);
    refresh_cross_edges(ws, g, gid);
  }
  return g;
}

FcdlGraph build_graph(const Workspace& ws, const GraphParams& params) {
  return collect_connect_dls(ws, create_fc_graph(ws, params), params.delta);
}

double coverage_score(const Workspace& ws, const FcdlGraph& graph, std::string_view fc_id) {
  const Node* fc = graph.find(fc_id);
  if (fc == nullptr || fc->kind != NodeKind::kFc) {
    throw Error(ErrorKind::kUnknownNode, "no fc node '" + std::string(fc_id) + "'");
  }
  std::set<Term> fc_vocab;
  for (const auto& m : graph.members(fc_id)) {
    for (auto& t : tokenize(graph.at(m).text)) fc_vocab.insert(std::move(t));
  }
  if (fc_vocab.empty()) return 0.0;

  std::set<Term> dl_vocab;
  for (const auto& e : graph.edges()) {
    if (e.kind != EdgeKind::kCross || e.source != fc_id) continue;
    for (const auto& dl : graph.members(e.target)) {
      const DataLeaf* leaf = ws.base().find(leaf_id_of(dl));
      if (leaf == nullptr) continue;
      for (auto& t : leaf_tokens(*leaf)) dl_vocab.insert(std::move(t));
    }
  }
  std::size_t shared = 0;
  for (const auto& t : fc_vocab) shared += dl_vocab.count(t);
  return static_cast<double>(shared) / static_cast<double>(fc_vocab.size());
}

// Exposed to edit.cpp.
namespace detail {
void refresh_cluster_node(const Workspace& ws, FcdlGraph& g, const std::string& id, bool keep_label) {
  refresh_cluster(ws, g, id, keep_label);
}
void refresh_cross_edges_of(const Workspace& ws, FcdlGraph& g, const std::string& id) {
  refresh_cross_edges(ws, g, id);
}
}  // namespace detail

}  // namespace fcdl
