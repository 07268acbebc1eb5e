#include "fcdl/fcgraph.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fcdl/error.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace fcdl {
namespace {

using testing::read_file;
using testing::source_path;

const std::string& sample_text() {
  static const std::string t = read_file(source_path("data/sample/requirement.txt"));
  return t;
}

const DlBase& small_base() {
  static const DlBase b = load_dl_base_file(source_path("data/sample/leaves_small.json").string());
  return b;
}

const DlBase& full_base() {
  static const DlBase b = load_dl_base_file(source_path("data/sample/leaves.json").string());
  return b;
}

std::size_t count_edges(const FcdlGraph& g, EdgeKind kind) {
  std::size_t n = 0;
  for (const auto& e : g.edges()) n += e.kind == kind;
  return n;
}

std::set<std::string> ids_of(const FcdlGraph& g, NodeKind kind) {
  std::set<std::string> out;
  for (const auto* n : g.nodes_of(kind)) out.insert(n->id);
  return out;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kIoError;
}

TEST(NodeKinds, NamesAndColors) {
  EXPECT_EQ(to_string(NodeKind::kFcDl), "fc_dl");
  EXPECT_EQ(parse_node_kind("segment"), NodeKind::kSegment);
  EXPECT_EQ(to_string(EdgeKind::kCross), "cross");
  EXPECT_EQ(color_of(NodeKind::kSegment), "blue");
  EXPECT_EQ(color_of(NodeKind::kFc), "blue");
  EXPECT_EQ(color_of(NodeKind::kDl), "green");
  EXPECT_EQ(color_of(NodeKind::kFcDl), "green");
  EXPECT_THROW(parse_node_kind("leaf"), Error);
}

TEST(GraphParams, Validate) {
  GraphParams{}.validate();
  EXPECT_THROW((GraphParams{1.2, 0.8, 5}.validate()), Error);
  EXPECT_THROW((GraphParams{0.9, -0.1, 5}.validate()), Error);
  EXPECT_THROW((GraphParams{0.9, 0.8, 0}.validate()), Error);
}

TEST(Workspace, EmptyTextThrows) {
  EXPECT_EQ(kind_of([] { Workspace(" ... \n\n", small_base()); }), ErrorKind::kEmptyText);
}

TEST(Workspace, HashesAreSha256) {
  Workspace ws("abc.", DlBase{});
  EXPECT_EQ(ws.source_hash(), sha256_hex("abc."));
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(CreateFcGraph, SingleSentence) {
  auto g = create_fc_graph("Monitor crowding in restaurants.", small_base(), GraphParams{});
  EXPECT_EQ(g.nodes().size(), 2u);
  ASSERT_EQ(g.edges().size(), 1u);
  EXPECT_EQ(g.edges()[0].source, "s0");
  EXPECT_EQ(g.edges()[0].target, "f0");
  EXPECT_NEAR(g.edges()[0].weight, 0.0, 1e-12);
  EXPECT_TRUE(invariant_violations(g).empty());
}

TEST(CreateFcGraph, SampleTextClusters) {
  auto g = create_fc_graph(sample_text(), small_base(), GraphParams{0.95, 0.8, 5});
  EXPECT_EQ(ids_of(g, NodeKind::kSegment), (std::set<std::string>{"s0", "s1", "s2"}));
  EXPECT_EQ(ids_of(g, NodeKind::kFc), (std::set<std::string>{"f0", "f1"}));
  EXPECT_EQ(g.members("f0"), (std::vector<std::string>{"s0", "s1"}));
  EXPECT_EQ(g.members("f1"), (std::vector<std::string>{"s2"}));
  EXPECT_EQ(g.edges().size(), 3u);
  EXPECT_EQ(g.at("s0").text, "Reduce infection risks in each school.");
  EXPECT_LE(g.at("f0").abstract.size(), 5u);
  EXPECT_TRUE(invariant_violations(g).empty());
}

TEST(CreateFcGraph, FcLabelIsTopThreeCentroidTerms) {
  Workspace ws(sample_text(), small_base());
  auto g = create_fc_graph(ws, GraphParams{});
  auto top = node_vector(ws, g, "f0").top_terms(3);
  EXPECT_EQ(g.at("f0").label, top[0] + ", " + top[1] + ", " + top[2]);
}

TEST(CollectConnect, SmallBaseExample) {
  Workspace ws(sample_text(), small_base());
  auto g = build_graph(ws, GraphParams{0.95, 0.8, 5});
  EXPECT_EQ(ids_of(g, NodeKind::kDl), (std::set<std::string>{"dl:dl-001", "dl:dl-002"}));
  for (const auto& id : ids_of(g, NodeKind::kDl)) EXPECT_FALSE(g.parent(id).empty());
  EXPECT_TRUE(invariant_violations(g).empty());
}

TEST(CollectConnect, DeltaZeroLeavesGraphUnchanged) {
  Workspace ws(sample_text(), full_base());
  auto blue = create_fc_graph(ws, GraphParams{0.0, 0.8, 5});
  EXPECT_EQ(collect_connect_dls(ws, blue, 0.0), blue);
}

TEST(CollectConnect, IdempotentAtFixedDelta) {
  Workspace ws(sample_text(), full_base());
  auto once = build_graph(ws, GraphParams{});
  EXPECT_EQ(collect_connect_dls(ws, once, once.params.delta), once);
}

TEST(CollectConnect, FullBaseCrossEdges) {
  Workspace ws(sample_text(), full_base());
  auto g = build_graph(ws, GraphParams{});
  EXPECT_EQ(ids_of(g, NodeKind::kDl), (std::set<std::string>{"dl:dl-001", "dl:dl-002", "dl:dl-004", "dl:dl-005",
                                                              "dl:dl-009", "dl:dl-010", "dl:dl-014"}));
  EXPECT_EQ(ids_of(g, NodeKind::kFcDl), (std::set<std::string>{"fdl0", "fdl1", "fdl2", "fdl3"}));
  for (const auto& e : g.edges()) {
    if (e.kind != EdgeKind::kCross) continue;
    EXPECT_EQ(g.at(e.source).kind, NodeKind::kFc);
    EXPECT_EQ(g.at(e.target).kind, NodeKind::kFcDl);
    EXPECT_LT(e.weight, g.params.delta);
    EXPECT_NEAR(e.weight, cosine_distance(node_vector(ws, g, e.source), node_vector(ws, g, e.target)), 1e-12);
  }
}

TEST(CollectConnect, TwinBaseCrossLinksAtZeroDistance) {
  auto segs = segment(sample_text());
  std::vector<DataLeaf> leaves;
  for (const auto& s : segs) leaves.push_back({"tw-" + std::to_string(s.index), s.text, s.text, {}, "", {}});
  Workspace ws(sample_text(), DlBase(leaves));
  auto g = build_graph(ws, GraphParams{0.95, 0.8, 5});
  EXPECT_EQ(g.nodes_of(NodeKind::kDl).size(), segs.size());
  EXPECT_EQ(g.nodes_of(NodeKind::kFcDl).size(), g.nodes_of(NodeKind::kFc).size());
  std::size_t twins = 0;
  for (const auto& e : g.edges()) {
    if (e.kind == EdgeKind::kCross && e.weight <= 1e-9) ++twins;
  }
  EXPECT_EQ(twins, g.nodes_of(NodeKind::kFc).size());
}

TEST(Coverage, Examples) {
  DlBase base({small_base().leaves()[0]});
  Workspace ws("Reduce infection risks in school.", base);
  auto g = build_graph(ws, GraphParams{0.95, 0.8, 5});
  ASSERT_EQ(g.nodes_of(NodeKind::kDl).size(), 1u);
  EXPECT_DOUBLE_EQ(coverage_score(ws, g, "f0"), 0.2);

  auto blue = create_fc_graph(ws, GraphParams{});
  EXPECT_EQ(coverage_score(ws, blue, "f0"), 0.0);

  DlBase same({DataLeaf{"x", "Reduce infection risks", "in school", {}, "", {}}});
  Workspace ws2("Reduce infection risks in school.", same);
  EXPECT_EQ(coverage_score(ws2, build_graph(ws2, GraphParams{}), "f0"), 1.0);

  EXPECT_EQ(kind_of([&] { coverage_score(ws, g, "s0"); }), ErrorKind::kUnknownNode);
  EXPECT_EQ(kind_of([&] { coverage_score(ws, g, "f7"); }), ErrorKind::kUnknownNode);
}

TEST(CanonicalJson, RoundTripAndDeterminism) {
  Workspace ws(sample_text(), full_base());
  auto g = build_graph(ws, GraphParams{});
  auto json = to_canonical_json(g);
  EXPECT_EQ(to_canonical_json(build_graph(ws, GraphParams{})), json);
  auto back = graph_from_json(json);
  EXPECT_EQ(back, g);
  EXPECT_EQ(to_canonical_json(back), json);
  EXPECT_EQ(json.back(), '\n');
  EXPECT_EQ(json.find('\r'), std::string::npos);
  EXPECT_LT(json.find("\"meta\""), json.find("\"nodes\""));
  EXPECT_LT(json.find("\"nodes\""), json.find("\"edges\""));
}

TEST(CanonicalJson, RejectsBrokenGraphs) {
  EXPECT_EQ(kind_of([] { graph_from_json("{"); }), ErrorKind::kParseError);
  EXPECT_EQ(kind_of([] { graph_from_json(R"({"meta":{}})"); }), ErrorKind::kParseError);
  auto g = create_fc_graph("One sentence here.", DlBase{}, GraphParams{});
  auto json = to_canonical_json(g);
  // A dangling edge target.
  auto broken = json;
  broken.replace(broken.find("\"target\": \"f0\""), 14, "\"target\": \"f9\"");
  EXPECT_EQ(kind_of([&] { graph_from_json(broken); }), ErrorKind::kParseError);
}

TEST(Invariants, DetectsViolations) {
  FcdlGraph g;
  g.put_node({"s0", NodeKind::kSegment, "a", "a", {}});
  EXPECT_FALSE(invariant_violations(g).empty());  // segment without membership
  g.put_node({"f0", NodeKind::kFc, "a", "a", {}});
  g.put_edge({"s0", "f0", EdgeKind::kMembership, 0.0});
  EXPECT_TRUE(invariant_violations(g).empty());
  g.put_edge({"s0", "f0", EdgeKind::kCross, 0.0});
  EXPECT_FALSE(invariant_violations(g).empty());
  g.remove_edge("s0", "f0", EdgeKind::kCross);
  g.put_node({"f1", NodeKind::kFc, "b", "b", {}});
  EXPECT_FALSE(invariant_violations(g).empty());  // empty cluster
  g.remove_node("f0");
  EXPECT_TRUE(g.edges().empty());
}

// Random pipeline runs: the counting law, separation, determinism and
// delta-monotonicity of the dl node set.
TEST(Pipeline, PropertiesOnRandomInputs) {
  std::mt19937 rng(1234);
  const auto vocab = testing::small_vocabulary(12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<std::size_t> sentences(1, 6), leaves(0, 8);
    auto text = testing::random_text(rng, vocab, sentences(rng));
    auto base = testing::random_base(rng, vocab, leaves(rng));
    Workspace ws(text, base);
    GraphParams p{unit(rng), unit(rng), static_cast<std::size_t>(1 + trial % 5)};
    auto g = build_graph(ws, p);
    ASSERT_TRUE(invariant_violations(g).empty());

    auto m = g.nodes_of(NodeKind::kSegment).size(), n = g.nodes_of(NodeKind::kFc).size();
    auto dl = g.nodes_of(NodeKind::kDl).size(), n2 = g.nodes_of(NodeKind::kFcDl).size();
    ASSERT_EQ(m, ws.segments().size());
    ASSERT_EQ(g.nodes().size(), m + n + dl + n2);
    ASSERT_EQ(count_edges(g, EdgeKind::kMembership), m + dl);

    auto blue = create_fc_graph(ws, p);
    blue.params.delta = g.params.delta;
    ASSERT_EQ(strip_green(g), blue);
    ASSERT_EQ(to_canonical_json(build_graph(ws, p)), to_canonical_json(g));

    double d2 = p.delta + (1.0 - p.delta) * unit(rng);
    auto wider = collect_connect_dls(ws, g, d2);
    auto a = ids_of(g, NodeKind::kDl), b = ids_of(wider, NodeKind::kDl);
    ASSERT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  }
}

}  // namespace
}  // namespace fcdl
