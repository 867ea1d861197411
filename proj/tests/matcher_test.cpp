#include <random>

#include <gtest/gtest.h>

#include "celllit/matcher.hpp"
#include "test_support.hpp"

namespace celllit {
namespace {

using testing::entity;

std::vector<std::string> ids(const std::vector<EntityMention>& ms) {
  std::vector<std::string> out;
  for (const auto& m : ms) out.push_back(m.entity_id);
  return out;
}

TEST(Matcher, CellLineInParentheses) {
  Document d("1", "", "A small-cell lung cancer cell line (NCI-H209) expresses RB1.");
  auto ms = match_document(d, testing::fixture_dictionary());
  const EntityMention* h209 = nullptr;
  for (const auto& m : ms) {
    if (m.entity_id == "cellosaurus:CVCL_1525") h209 = &m;
  }
  ASSERT_NE(h209, nullptr);
  EXPECT_EQ(h209->form_kind, FormKind::RawExact);
  EXPECT_EQ(d.span_text(h209->token_span), "NCI-H209");
}

TEST(Matcher, GeneCaseSensitivity) {
  const auto& dict = testing::fixture_dictionary();
  Document lower("1", "", "In a first step, lysates were cleared.");
  EXPECT_TRUE(match_document(lower, dict).empty());
  Document upper("2", "", "STEP dephosphorylates ERK.");
  EXPECT_EQ(ids(match_document(upper, dict)), (std::vector<std::string>{"hgnc:9657"}));
  Document lower_rb("3", "", "rb1 was absent.");
  EXPECT_TRUE(match_document(lower_rb, dict).empty());
}

TEST(Matcher, LongestMatchWithinCategory) {
  Document d("1", "", "HeLa S3 cells and HeLa cells.");
  auto ms = match_document(d, testing::fixture_dictionary());
  EXPECT_EQ(ids(ms), (std::vector<std::string>{"cellosaurus:CVCL_0058", "cellosaurus:CVCL_0030"}));
}

TEST(Matcher, OverlapAcrossCategoriesKept) {
  Document d("1", "", "small-cell lung cancer");
  auto ms = match_document(d, testing::fixture_dictionary());
  EXPECT_EQ(ids(ms), (std::vector<std::string>{"ncit:C4917", "uberon:0002048"}));
}

TEST(Matcher, LemmaLayerMatchesInflection) {
  Document d("1", "", "Most breast carcinomas respond.");
  auto diseases = [](const std::vector<EntityMention>& all) {
    std::vector<EntityMention> out;
    for (const auto& m : all) {
      if (m.category == Category::Disease) out.push_back(m);
    }
    return out;
  };
  auto ms = diseases(match_document(d, testing::fixture_dictionary()));
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].entity_id, "ncit:C4872");
  EXPECT_EQ(ms[0].form_kind, FormKind::CaseNormalized);
  Document d2("2", "", "Breast carcinomata aside, breast cancers were studied.");
  auto ms2 = diseases(match_document(d2, testing::fixture_dictionary()));
  ASSERT_EQ(ms2.size(), 2u);
  for (const auto& m : ms2) {
    EXPECT_EQ(m.entity_id, "ncit:C4872");
    EXPECT_EQ(m.form_kind, FormKind::LemmaTokens);
  }
}

TEST(Matcher, AmbiguousSurfaceReportsAllEntities) {
  auto dict = build_dictionary({entity("hgnc:1", Category::Gene, "ABC"), entity("hgnc:2", Category::Gene, "XYZ", {"ABC"})});
  Document d("1", "", "ABC binds.");
  auto ms = match_document(d, dict);
  ASSERT_EQ(ms.size(), 2u);
  EXPECT_EQ(ms[0].ambiguous_with, (std::vector<std::string>{"hgnc:2"}));
  EXPECT_EQ(ms[1].ambiguous_with, (std::vector<std::string>{"hgnc:1"}));
}

TEST(Matcher, DoesNotCrossSentences) {
  auto dict = build_dictionary({entity("ncit:1", Category::Disease, "lung cancer")});
  EXPECT_TRUE(match_document(Document("1", "", "It spread to the lung. Cancer returned."), dict).empty());
  EXPECT_EQ(match_document(Document("1", "", "It spread to the lung cancer."), dict).size(), 1u);
}

TEST(Matcher, EmptyDocumentAndDictionary) {
  EXPECT_TRUE(match_document(Document("1", "", ""), testing::fixture_dictionary()).empty());
  EXPECT_TRUE(match_document(Document("1", "", "RB1 is deleted."), build_dictionary({})).empty());
}

TEST(Matcher, MatchSpanUsesTokenIndices) {
  Document d("1", "Title here", "The retinoblastoma protein RB1 is lost.");
  auto toks = std::span<const Token>(d.tokens()).subspan(2, 5);
  auto ms = match_span(toks, testing::fixture_dictionary());
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].token_span, (TokenSpan{5, 6}));
}

TEST(Matcher, AgreesWithBruteForceOnRandomDocuments) {
  std::mt19937_64 rng(20240601);
  for (int iter = 0; iter < 200; ++iter) {
    auto world = testing::random_world(rng);
    auto dict = build_dictionary(world.entities);
    Document d("d" + std::to_string(iter), "", testing::random_text(rng, world, 120));
    auto expected = testing::brute_force_match(d, world.entities);
    auto got = testing::as_oracle(match_document(d, dict));
    ASSERT_EQ(got, expected) << d.text();
  }
}

TEST(Matcher, AgreesWithBruteForceOnFixtureOntology) {
  std::mt19937_64 rng(99);
  testing::RandomWorld world;
  world.entities = testing::fixture_dictionary().entities();
  for (const auto& e : world.entities) {
    world.phrases.push_back(e.canonical_name);
    for (const auto& s : e.synonyms) world.phrases.push_back(s);
  }
  for (int iter = 0; iter < 100; ++iter) {
    Document d("d", "", testing::random_text(rng, world, 150));
    ASSERT_EQ(testing::as_oracle(match_document(d, testing::fixture_dictionary())),
              testing::brute_force_match(d, world.entities))
        << d.text();
  }
}

TEST(Matcher, JsonRoundTrip) {
  Document d("7", "", "HeLa S3 and NCI-H209 cells lack RB1.");
  for (const auto& m : match_document(d, testing::fixture_dictionary())) {
    auto back = mention_from_json(to_json(m));
    EXPECT_EQ(back.entity_id, m.entity_id);
    EXPECT_EQ(back.token_span, m.token_span);
    EXPECT_EQ(back.form_kind, m.form_kind);
    EXPECT_EQ(back.category, m.category);
  }
}

}  // namespace
}  // namespace celllit
