#include <random>

#include <gtest/gtest.h>

#include "celllit/scoring.hpp"
#include "test_support.hpp"

namespace celllit {
namespace {

EntityMention mention(const std::string& id, int start, int end, const std::string& doc = "d") {
  EntityMention m;
  m.doc_id = doc;
  m.entity_id = id;
  m.token_span = {start, end};
  return m;
}

Document filler(int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += "w ";
  return Document("d", "", s);
}

TEST(Scoring, ClosedFormDistances) {
  EXPECT_EQ(token_distance({0, 1}, {1, 2}), 1);
  EXPECT_EQ(token_distance({1, 2}, {0, 1}), 1);
  EXPECT_EQ(token_distance({0, 1}, {3, 4}), 3);
  EXPECT_EQ(token_distance({0, 3}, {1, 2}), 1);
  EXPECT_EQ(distance_weight(1), 1.0);
  EXPECT_EQ(distance_weight(3), 0.5);
  EXPECT_EQ(distance_weight(7), 1.0 / 3.0);
}

TEST(Scoring, AdjacentMentionsScoreOne) {
  Document d = filler(10);
  std::vector<EntityMention> a = {mention("x", 2, 3)}, b = {mention("y", 3, 4)};
  EXPECT_EQ(pair_score(d, a, b), 1.0);
  std::vector<EntityMention> c = {mention("y", 5, 6)};
  EXPECT_EQ(pair_score(d, a, c), 0.5);
}

TEST(Scoring, EmptySidesScoreZero) {
  Document d = filler(5);
  std::vector<EntityMention> a = {mention("x", 0, 1)}, none;
  EXPECT_EQ(pair_score(d, a, none), 0.0);
}

TEST(Scoring, MatchesQuadraticOracle) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    auto s = testing::synthetic_doc(rng, i);
    for (const auto& ps : score_document(s.doc, s.mentions, s.triples)) {
      double expected = testing::brute_force_pair_score(testing::spans_of(s.mentions, ps.entity_a),
                                                        testing::spans_of(s.mentions, ps.entity_b));
      EXPECT_NEAR(ps.distance_score, expected, 1e-9);
      EXPECT_EQ(ps.triple_bonus, testing::brute_force_bonus(s.triples, ps.entity_a, ps.entity_b));
      EXPECT_EQ(ps.total, ps.distance_score + ps.triple_bonus);
    }
  }
}

TEST(Scoring, SymmetricInArguments) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    auto s = testing::synthetic_doc(rng, i);
    std::vector<EntityMention> a, b;
    for (const auto& m : s.mentions) (m.entity_id == "hgnc:0" ? a : b).push_back(m);
    if (b.empty()) continue;
    EXPECT_EQ(pair_score(s.doc, a, b), pair_score(s.doc, b, a));
    std::shuffle(a.begin(), a.end(), rng);
    std::vector<EntityMention> rb(b.rbegin(), b.rend());
    EXPECT_EQ(pair_score(s.doc, a, b), pair_score(s.doc, rb, a));
  }
}

TEST(Scoring, MonotoneInDistanceAndMentions) {
  Document d = filler(40);
  std::vector<EntityMention> a = {mention("x", 0, 1)};
  double prev = 2.0;
  for (int start = 1; start < 40; ++start) {
    std::vector<EntityMention> b = {mention("y", start, start + 1)};
    double s = pair_score(d, a, b);
    EXPECT_LT(s, prev);
    prev = s;
  }
  std::vector<EntityMention> b = {mention("y", 10, 11)};
  double one = pair_score(d, a, b);
  b.push_back(mention("y", 30, 31));
  EXPECT_GT(pair_score(d, a, b), one);
}

TEST(Scoring, TripleBonusAddsOnePerSupportingTriple) {
  Document d("d", "", "HeLa cells overexpress EGFR. HeLa cells express EGFR.");
  std::vector<EntityMention> ms = {mention("cellosaurus:CVCL_0030", 0, 1), mention("hgnc:3236", 3, 4),
                                   mention("cellosaurus:CVCL_0030", 5, 6), mention("hgnc:3236", 8, 9)};
  Triple t1, t2, t3;
  t1.sentence_index = 0;
  t1.predicate.head = "OVEREXPRESS";
  t1.subject_entities = {"cellosaurus:CVCL_0030"};
  t1.object_entities = {"hgnc:3236"};
  t2 = t1;
  t2.sentence_index = 1;
  t2.predicate.head = "EXPRESS";
  t3 = t1;
  t3.object_entities = {};
  auto scores = score_document(d, ms, std::vector<Triple>{t1, t2, t3});
  ASSERT_EQ(scores.size(), 1u);
  EXPECT_EQ(scores[0].triple_bonus, 2);
  EXPECT_EQ(scores[0].total - scores[0].distance_score, 2.0);
  EXPECT_EQ(scores[0].predicates, (std::vector<std::string>{"EXPRESS", "OVEREXPRESS"}));
  EXPECT_EQ(scores[0].primary_sentence, 0);
}

TEST(Scoring, PrimaryEvidencePrefersTripleSentence) {
  Document d("d", "", "HeLa and EGFR. Unrelated words here. HeLa cells overexpress EGFR strongly today.");
  std::vector<EntityMention> ms = {mention("c", 0, 1), mention("g", 2, 3), mention("c", 8, 9),
                                   mention("g", 11, 12)};
  EXPECT_EQ(select_primary_evidence(d, "c", "g", {}, ms), 0);
  Triple t;
  t.sentence_index = 2;
  t.subject_entities = {"c"};
  t.object_entities = {"g"};
  std::vector<Triple> ts = {t};
  EXPECT_EQ(select_primary_evidence(d, "c", "g", ts, ms), 2);
}

TEST(Scoring, PrimaryEvidencePrefersCoSententialPair) {
  Document d("d", "", "Gene g. Cell c and the gene g are far apart in this long sentence.");
  // Cross-sentence pair at distance 2 versus a same-sentence pair at distance 4.
  std::vector<EntityMention> ms = {mention("g", 1, 2), mention("c", 4, 5), mention("g", 8, 9)};
  EXPECT_EQ(select_primary_evidence(d, "c", "g", {}, ms), 1);
}

TEST(Scoring, OnlyMentionedEntitiesArePaired) {
  Document d = filler(10);
  std::vector<EntityMention> ms = {mention("a", 0, 1), mention("b", 2, 3), mention("c", 4, 5)};
  auto scores = score_document(d, ms, {});
  EXPECT_EQ(scores.size(), 3u);
  for (const auto& s : scores) EXPECT_LT(s.entity_a, s.entity_b);
  EXPECT_TRUE(score_document(d, std::vector<EntityMention>{mention("a", 0, 1)}, {}).empty());
}

TEST(Aggregate, SumsAndOrders) {
  PairScore p1{"d1", "a", "b", 0.5, 1, 1.5, 0, {"BIND"}};
  PairScore p2{"d2", "a", "b", 0.25, 0, 0.25, 2, {}};
  PairScore p3{"d1", "a", "c", 2.0, 0, 2.0, 0, {}};
  auto rel = aggregate(std::vector<PairScore>{p2, p3, p1});
  ASSERT_EQ(rel.size(), 2u);
  EXPECT_EQ(rel[0].entity_b, "c");
  EXPECT_EQ(rel[1].corpus_score, 1.75);
  ASSERT_EQ(rel[1].evidence.size(), 2u);
  EXPECT_EQ(rel[1].evidence[0].doc_id, "d1");
  EXPECT_TRUE(rel[1].evidence[0].has_triple);
  EXPECT_EQ(rel[1].predicates, (std::vector<std::string>{"BIND"}));
}

TEST(Aggregate, OrderIndependent) {
  std::mt19937_64 rng(8);
  std::vector<PairScore> scores;
  for (int i = 0; i < 50; ++i) {
    auto s = testing::synthetic_doc(rng, i);
    auto ps = score_document(s.doc, s.mentions, s.triples);
    scores.insert(scores.end(), ps.begin(), ps.end());
  }
  auto expected = aggregate(scores);
  std::shuffle(scores.begin(), scores.end(), rng);
  EXPECT_EQ(aggregate(scores), expected);
  for (const auto& r : expected) {
    double sum = 0.0;
    for (const auto& e : r.evidence) sum += e.total;
    EXPECT_EQ(r.corpus_score, sum);
  }
}

TEST(Aggregate, JsonRoundTrip) {
  PairScore p{"d1", "a", "b", 0.5, 1, 1.5, 0, {"BIND"}};
  EXPECT_EQ(pair_score_from_json(to_json(p)).total, 1.5);
  auto rel = aggregate(std::vector<PairScore>{p});
  EXPECT_EQ(relation_from_json(to_json(rel[0])), rel[0]);
}

}  // namespace
}  // namespace celllit
