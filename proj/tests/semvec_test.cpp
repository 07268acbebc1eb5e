#include "fcdl/semvec.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fcdl/error.hpp"
#include "oracles.hpp"

namespace fcdl {
namespace {

using testing::oracle_distance;

std::vector<TokenList> three_docs() {
  return {{"school", "infection"}, {"hospital", "infection"}, {"restaurant", "crowding"}};
}

TEST(Tokenize, EmptyInput) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenize, SplitsOnPunctuationAndLowercases) {
  EXPECT_EQ(tokenize("Well-being, AI!"), (TokenList{"well", "being", "ai"}));
  EXPECT_EQ(tokenize("COVID-19 spread"), (TokenList{"covid", "19", "spread"}));
}

TEST(Tokenize, UnderscoreIsASeparator) { EXPECT_EQ(tokenize("school_id"), (TokenList{"school", "id"})); }

TEST(Tokenize, NormalizesToNfcBeforeSplitting) {
  // "Café" with a combining acute accent vs the precomposed form.
  EXPECT_EQ(tokenize("Cafe\xCC\x81"), tokenize("Caf\xC3\xA9"));
  EXPECT_EQ(tokenize("Cafe\xCC\x81"), (TokenList{"caf\xC3\xA9"}));
}

TEST(Tokenize, KeepsNonLatinRuns) {
  // 東京の感染。 -> one run of ideographs/kana, the ideographic stop splits.
  EXPECT_EQ(tokenize("\xE6\x9D\xB1\xE4\xBA\xAC\xE3\x81\xAE\xE6\x84\x9F\xE6\x9F\x93\xE3\x80\x82").size(), 1u);
}

TEST(VectorSpace, SingleDocument) {
  std::vector<TokenList> corpus{{"a"}};
  auto s = VectorSpace::build(corpus);
  EXPECT_EQ(s.doc_count(), 1u);
  EXPECT_EQ(s.doc_freq("a"), 1u);
}

TEST(VectorSpace, DocumentFrequencies) {
  auto docs = three_docs();
  auto s = VectorSpace::build(docs);
  EXPECT_EQ(s.doc_count(), 3u);
  EXPECT_EQ(s.doc_freq("infection"), 2u);
  EXPECT_EQ(s.doc_freq("school"), 1u);
  EXPECT_EQ(s.doc_freq("crowding"), 1u);
  EXPECT_EQ(s.vocabulary(), (std::vector<Term>{"crowding", "hospital", "infection", "restaurant", "school"}));
}

TEST(VectorSpace, DuplicateDocuments) {
  std::vector<TokenList> corpus{{"a"}, {"a"}};
  auto s = VectorSpace::build(corpus);
  EXPECT_EQ(s.doc_count(), 2u);
  EXPECT_EQ(s.doc_freq("a"), 2u);
}

TEST(VectorSpace, EmptyCorpusThrows) {
  std::vector<TokenList> corpus{{}, {}};
  try {
    VectorSpace::build(corpus);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyCorpus);
  }
  EXPECT_THROW(VectorSpace::build(std::vector<TokenList>{}), Error);
}

TEST(VectorSpace, JsonRoundTripIsByteStable) {
  auto docs = three_docs();
  auto s = VectorSpace::build(docs);
  auto again = VectorSpace::build(docs);
  EXPECT_EQ(s.to_json().dump(), again.to_json().dump());
  EXPECT_EQ(VectorSpace::from_json(nlohmann::json::parse(s.to_json().dump())), s);
}

TEST(Embed, HandComputedWeights) {
  auto docs = three_docs();
  auto s = VectorSpace::build(docs);
  auto v = s.embed(TokenList{"school", "infection"});
  // 1 + ln 3 and 1 + ln 1.5
  EXPECT_NEAR(v.weight("school"), 2.0986122886681098, 1e-12);
  EXPECT_NEAR(v.weight("infection"), 1.4054651081081644, 1e-12);
  EXPECT_EQ(v.size(), 2u);
}

TEST(Embed, EmptyAndOutOfVocabulary) {
  auto docs = three_docs();
  auto s = VectorSpace::build(docs);
  EXPECT_TRUE(s.embed(TokenList{}).empty());
  EXPECT_TRUE(s.embed(TokenList{"weather", "rain"}).empty());
}

TEST(Embed, CountsMultiplyIdf) {
  auto docs = three_docs();
  auto s = VectorSpace::build(docs);
  auto v = s.embed(TokenList{"school", "school", "school"});
  EXPECT_DOUBLE_EQ(v.weight("school"), 3 * s.idf("school"));
}

TEST(Distance, HandOracleValues) {
  auto docs = three_docs();
  auto s = VectorSpace::build(docs);
  auto d1 = s.embed(docs[0]), d2 = s.embed(docs[1]), d3 = s.embed(docs[2]);
  // 1 - 1.4055^2 / 2.5257^2, frozen from an independent script.
  EXPECT_NEAR(cosine_distance(d1, d2), 0.6903628179919303, 1e-12);
  EXPECT_EQ(cosine_distance(d1, d3), 1.0);
  EXPECT_NEAR(cosine_distance(d1, d1), 0.0, 1e-12);
}

TEST(Distance, EmptyConventions) {
  TermVector empty;
  TermVector v({{"a", 1.0}});
  EXPECT_EQ(cosine_distance(empty, empty), 0.0);
  EXPECT_EQ(cosine_distance(empty, v), 1.0);
  EXPECT_EQ(cosine_distance(v, empty), 1.0);
}

TEST(Distance, PropertiesOnRandomDocuments) {
  std::mt19937 rng(7);
  const auto vocab = testing::small_vocabulary(12);
  std::vector<TokenList> docs;
  for (int i = 0; i < 300; ++i) docs.push_back(testing::random_doc(rng, vocab, 1, 8));
  auto space = VectorSpace::build(docs);
  std::uniform_int_distribution<std::size_t> pick(0, docs.size() - 1);
  std::uniform_int_distribution<int> factor(2, 5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto& a = docs[pick(rng)];
    const auto& b = docs[pick(rng)];
    auto va = space.embed(a), vb = space.embed(b);
    double d = cosine_distance(va, vb);
    ASSERT_EQ(d, cosine_distance(vb, va));
    ASSERT_GE(d, 0.0);
    ASSERT_LE(d, 1.0);
    ASSERT_LE(cosine_distance(va, va), 1e-12);
    ASSERT_NEAR(d, oracle_distance(va, vb), 1e-12);

    TokenList scaled;
    int f = factor(rng);
    for (int k = 0; k < f; ++k) scaled.insert(scaled.end(), a.begin(), a.end());
    ASSERT_NEAR(cosine_distance(space.embed(scaled), vb), d, 1e-9);
  }
}

TEST(TermVector, TopTermsBreakTiesLexicographically) {
  TermVector v({{"b", 1.0}, {"a", 1.0}, {"c", 2.0}});
  EXPECT_EQ(v.top_terms(2), (std::vector<Term>{"c", "a"}));
  EXPECT_EQ(v.top_terms(10), (std::vector<Term>{"c", "a", "b"}));
}

TEST(TermVector, DropsNonPositiveWeights) {
  TermVector v({{"a", 0.0}, {"b", -1.0}, {"c", 0.5}});
  EXPECT_EQ(v.size(), 1u);
}

TEST(Centroid, SingleVectorIsNormalized) {
  TermVector v({{"a", 3.0}, {"b", 4.0}});
  std::vector<TermVector> vs{v};
  auto c = centroid(vs);
  EXPECT_NEAR(c.weight("a"), 0.6, 1e-15);
  EXPECT_NEAR(c.weight("b"), 0.8, 1e-15);
}

TEST(Centroid, IdenticalVectorsKeepDirection) {
  TermVector v({{"a", 3.0}, {"b", 4.0}});
  std::vector<TermVector> vs{v, v};
  EXPECT_NEAR(cosine_distance(centroid(vs), v), 0.0, 1e-12);
}

TEST(Centroid, EquidistantFromTwoSymmetricDocuments) {
  auto docs = three_docs();
  auto s = VectorSpace::build(docs);
  std::vector<TermVector> vs{s.embed(docs[0]), s.embed(docs[1])};
  auto c = centroid(vs);
  EXPECT_NEAR(cosine_distance(c, vs[0]), cosine_distance(c, vs[1]), 1e-9);
}

TEST(Centroid, SkipsEmptyInputs) {
  TermVector v({{"a", 2.0}});
  std::vector<TermVector> vs{TermVector{}, v};
  EXPECT_NEAR(centroid(vs).weight("a"), 1.0, 1e-15);
  std::vector<TermVector> empties{TermVector{}, TermVector{}};
  EXPECT_TRUE(centroid(empties).empty());
}

TEST(Centroid, EmptyListThrows) {
  try {
    centroid(std::vector<TermVector>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyList);
  }
}

}  // namespace
}  // namespace fcdl
