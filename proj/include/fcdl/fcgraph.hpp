#pragma once

// The FC/DL graph and the two construction phases:
//   blue  - segments of the requirement text clustered into feature concepts;
//   green - data leaves collected near those concepts, clustered, and
//           cross-linked back to them.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fcdl/dlbase.hpp"
#include "fcdl/semvec.hpp"
#include "fcdl/textseg.hpp"

namespace fcdl {

enum class NodeKind { kSegment, kFc, kDl, kFcDl };
enum class EdgeKind { kMembership, kCross };

std::string_view to_string(NodeKind kind);
std::string_view to_string(EdgeKind kind);
NodeKind parse_node_kind(std::string_view name);
EdgeKind parse_edge_kind(std::string_view name);

/// Blue for the requirement side, green for the data-leaf side.
std::string_view color_of(NodeKind kind);
bool is_green(NodeKind kind);

struct Node {
  std::string id;
  NodeKind kind = NodeKind::kSegment;
  std::string label;
  std::string text;
  std::vector<Term> abstract;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  std::string source;
  std::string target;
  EdgeKind kind = EdgeKind::kMembership;
  double weight = 0.0;  // a distance, not a similarity
};

struct GraphParams {
  double delta = 0.95;
  double tau = 0.8;
  std::size_t k = 5;

  /// Throws InvalidArgument unless delta, tau in [0, 1] and k >= 1.
  void validate() const;
};

struct Provenance {
  std::string source_hash;
  std::string base_hash;
};

/// Node ids: s{index}, f{j}, dl:{leaf id}, fdl{j}.
std::string segment_node_id(std::size_t index);
std::string fc_node_id(std::size_t j);
std::string dl_node_id(std::string_view leaf_id);
std::string fc_dl_node_id(std::size_t j);

class FcdlGraph {
 public:
  GraphParams params;
  Provenance provenance;
  std::uint64_t revision = 0;

  /// Ordered by id.
  const std::map<std::string, Node, std::less<>>& nodes() const noexcept { return nodes_; }
  /// Ordered by (source, target, kind name).
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  const Node* find(std::string_view id) const;
  /// Throws UnknownNode.
  const Node& at(std::string_view id) const;
  std::vector<const Node*> nodes_of(NodeKind kind) const;
  /// Sources of membership edges into `cluster_id`, ascending.
  std::vector<std::string> members(std::string_view cluster_id) const;
  /// Target of the membership edge leaving `member_id`, or empty.
  std::string parent(std::string_view member_id) const;

  void put_node(Node node);
  /// Removes the node and every incident edge.
  void remove_node(std::string_view id);
  /// Inserts or overwrites the (source, target, kind) edge.
  void put_edge(Edge edge);
  void remove_edge(std::string_view source, std::string_view target, EdgeKind kind);
  template <class Pred>
  void remove_edges_if(Pred pred) {
    std::erase_if(edges_, pred);
  }

 private:
  std::map<std::string, Node, std::less<>> nodes_;
  std::vector<Edge> edges_;
};

/// Canonical JSON: keys meta, nodes, edges; 2-space indent, LF, trailing
/// newline, weights rounded to 6 decimals.
std::string to_canonical_json(const FcdlGraph& graph);
/// Accepts canonical JSON; throws ParseError on malformed input or when the
/// structural invariants do not hold.
FcdlGraph graph_from_json(std::string_view json_text);

/// Graph equality is equality of canonical serializations.
bool operator==(const FcdlGraph& a, const FcdlGraph& b);

/// Structural invariant violations, empty when the graph is well formed.
std::vector<std::string> invariant_violations(const FcdlGraph& graph);

std::string sha256_hex(std::string_view bytes);

/// Everything fixed at pipeline start: the requirement text, the DL base, the
/// segments, and the TF-IDF space over segments plus leaf texts.
class Workspace {
 public:
  /// Throws EmptyText if the text has no segments.
  Workspace(std::string text, DlBase base, Granularity granularity = Granularity::kSentence);

  const std::string& text() const noexcept { return text_; }
  const DlBase& base() const noexcept { return base_; }
  Granularity granularity() const noexcept { return granularity_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  const VectorSpace& space() const noexcept { return space_; }
  const std::string& source_hash() const noexcept { return source_hash_; }
  const std::string& base_hash() const noexcept { return base_hash_; }

  const TermVector& segment_vector(std::size_t index) const;
  /// Throws UnknownNode for ids not in the base.
  const TermVector& leaf_vector(std::string_view leaf_id) const;

 private:
  std::string text_;
  DlBase base_;
  Granularity granularity_;
  std::vector<Segment> segments_;
  VectorSpace space_;
  std::vector<TermVector> segment_vectors_;
  std::map<std::string, TermVector, std::less<>> leaf_vectors_;
  std::string source_hash_;
  std::string base_hash_;
};

/// Vector behind a node: the TF-IDF embedding for segments and leaves, the
/// member centroid for fc and fc_dl nodes.
TermVector node_vector(const Workspace& ws, const FcdlGraph& graph, std::string_view id);

/// Blue phase: segment nodes, clusters at tau, one fc node per cluster.
FcdlGraph create_fc_graph(const Workspace& ws, const GraphParams& params);
FcdlGraph create_fc_graph(std::string_view text, const DlBase& base, const GraphParams& params);

/// Green phase, replacing any existing green part: collect leaves within delta
/// of an fc centroid, cluster them at tau into fc_dl nodes, cross-link every
/// (fc, fc_dl) pair closer than delta. Records delta in the graph params.
FcdlGraph collect_connect_dls(const Workspace& ws, const FcdlGraph& graph, double delta);

/// Both phases with `params`.
FcdlGraph build_graph(const Workspace& ws, const GraphParams& params);

/// Drops dl and fc_dl nodes together with their edges.
FcdlGraph strip_green(const FcdlGraph& graph);

/// Share of the fc node's segment vocabulary also found in the leaves of the
/// fc_dl nodes cross-linked to it. Throws UnknownNode unless `fc_id` is an fc.
double coverage_score(const Workspace& ws, const FcdlGraph& graph, std::string_view fc_id);

}  // namespace fcdl
