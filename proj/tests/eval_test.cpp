#include <sstream>

#include <gtest/gtest.h>

#include "celllit/eval.hpp"
#include "celllit/jsonl.hpp"
#include "test_support.hpp"

namespace celllit {
namespace {

GoldLoad mini_gold() { return load_gold(testing::data_dir() / "gold" / "mini_gold.jsonl"); }

TEST(Metrics, Arithmetic) {
  Metrics m{11, 2, 2};
  EXPECT_DOUBLE_EQ(m.precision(), 11.0 / 13.0);
  EXPECT_DOUBLE_EQ(m.recall(), 11.0 / 13.0);
  EXPECT_DOUBLE_EQ(m.f1(), 11.0 / 13.0);
  Metrics zero;
  EXPECT_EQ(zero.precision(), 0.0);
  EXPECT_EQ(zero.recall(), 0.0);
  EXPECT_EQ(zero.f1(), 0.0);
  Metrics fp_only{0, 3, 0};
  EXPECT_EQ(fp_only.f1(), 0.0);
}

TEST(Gold, MiniGoldLoads) {
  auto gold = mini_gold();
  EXPECT_TRUE(gold.errors.empty());
  ASSERT_EQ(gold.documents.size(), 10u);
  for (const auto& g : gold.documents) {
    for (const auto& s : g.spans) EXPECT_LE(s.end, g.text().size());
  }
  const auto& first = gold.documents[0];
  EXPECT_EQ(first.text().substr(first.spans[1].start, first.spans[1].end - first.spans[1].start), "NCI-H209");
}

TEST(Gold, RejectsOutOfBoundsSpan) {
  std::istringstream in(
      R"({"doc_id":"1","title":"T","abstract":"RB1.","annotations":[{"start":2,"end":40,"category":"Gene","entity_id":"hgnc:9884"}]})"
      "\n"
      R"({"doc_id":"2","title":"T","abstract":"RB1.","annotations":[{"start":2,"end":5,"category":"Gene","entity_id":"hgnc:9884"}]})"
      "\n");
  auto load = load_gold_stream(in);
  EXPECT_EQ(load.documents.size(), 1u);
  ASSERT_EQ(load.errors.size(), 1u);
  EXPECT_NE(load.errors[0].find("line 1"), std::string::npos);
}

TEST(Eval, MiniGoldMatchesHandComputedTable) {
  const auto& dict = testing::fixture_dictionary();
  auto gold = mini_gold();
  auto excluded = map_gold_ids(gold.documents, dict, {});
  auto report = evaluate_pipeline(gold.documents, dict, excluded);
  auto expected = nlohmann::json::parse(read_file(testing::data_dir() / "gold" / "expected_confusion.json"));
  for (const char* cat : {"Gene", "CellLine"}) {
    const auto& m = report.ner.at(cat);
    const auto& e = expected["ner"][cat];
    EXPECT_EQ(m.tp, e["tp"].get<std::size_t>()) << cat;
    EXPECT_EQ(m.fp, e["fp"].get<std::size_t>()) << cat;
    EXPECT_EQ(m.fn, e["fn"].get<std::size_t>()) << cat;
  }
  EXPECT_EQ(report.pairs.tp, expected["pairs"]["tp"].get<std::size_t>());
  EXPECT_EQ(report.pairs.fp, expected["pairs"]["fp"].get<std::size_t>());
  EXPECT_EQ(report.pairs.fn, expected["pairs"]["fn"].get<std::size_t>());
  EXPECT_EQ(report.excluded_gold_entities, expected["excluded_gold_entities"].get<std::size_t>());
  EXPECT_DOUBLE_EQ(report.pairs.f1(), 11.0 / 13.0);
  EXPECT_DOUBLE_EQ(report.ner.at("Gene").precision(), 17.0 / 18.0);
  EXPECT_DOUBLE_EQ(report.ner.at("Gene").recall(), 17.0 / 19.0);
}

TEST(Eval, PerDocumentBreakdownSumsToTotal) {
  const auto& dict = testing::fixture_dictionary();
  auto gold = mini_gold();
  map_gold_ids(gold.documents, dict, {});
  auto report = evaluate_pipeline(gold.documents, dict);
  Metrics sum;
  for (const auto& d : report.per_document) {
    sum.tp += d.pairs.tp;
    sum.fp += d.pairs.fp;
    sum.fn += d.pairs.fn;
  }
  EXPECT_EQ(sum.tp, report.pairs.tp);
  EXPECT_EQ(sum.fp, report.pairs.fp);
  EXPECT_EQ(sum.fn, report.pairs.fn);
}

// Gold built from the pipeline's own output must score perfectly.
TEST(Eval, SelfEvaluationIsPerfect) {
  const auto& dict = testing::fixture_dictionary();
  auto corpus = ingest_corpus(testing::data_dir() / "demo" / "corpus.jsonl");
  std::vector<GoldAnnotation> gold;
  for (const auto& doc : corpus.documents) {
    GoldAnnotation g{doc.doc_id(), doc.title(), doc.abstract(), {}};
    for (const auto& s : ner_spans(doc, match_document(doc, dict))) {
      std::string id;
      for (const auto& m : match_document(doc, dict)) {
        const auto& t = doc.tokens();
        if (t[m.token_span.start].char_start == s.start && t[m.token_span.end - 1].char_end == s.end &&
            m.category == s.category) {
          id = m.entity_id;
        }
      }
      g.spans.push_back({s.start, s.end, s.category, id, true});
    }
    gold.push_back(std::move(g));
  }
  auto report = evaluate_pipeline(gold, dict);
  EXPECT_EQ(report.pairs.f1(), 1.0);
  EXPECT_GT(report.pairs.tp, 0u);
  EXPECT_EQ(report.ner.at("Gene").f1(), 1.0);
  EXPECT_EQ(report.ner.at("CellLine").f1(), 1.0);
}

TEST(Eval, UnknownDocumentPredictionsAreFalsePositives) {
  std::vector<GoldAnnotation> gold = {{"1", "T", "x", {}}};
  std::set<PredictedPair> predicted = {{"99", "hgnc:1", "cellosaurus:X"}};
  auto report = evaluate_pairs(predicted, gold);
  EXPECT_EQ(report.pairs.fp, 1u);
  EXPECT_EQ(report.warnings.size(), 1u);
}

TEST(Eval, IdMapAndUnmappedSpans) {
  const auto& dict = testing::fixture_dictionary();
  std::vector<GoldAnnotation> gold = {{"1", "RB1 in HeLa", "", {{0, 3, Category::Gene, "ncbigene:5925", true},
                                                              {7, 11, Category::CellLine, "cellosaurus:CVCL_0030", true},
                                                              {0, 3, Category::Gene, "ncbigene:1", true}}}};
  auto unmapped = map_gold_ids(gold, dict, {{"ncbigene:5925", "hgnc:9884"}});
  EXPECT_EQ(unmapped, 1u);
  EXPECT_EQ(gold[0].spans[0].entity_id, "hgnc:9884");
  EXPECT_TRUE(gold[0].spans[1].mapped);
  EXPECT_FALSE(gold[0].spans[2].mapped);
  EXPECT_EQ(gold[0].pairs().size(), 1u);
}

TEST(Eval, PubtatorReader) {
  std::istringstream in(
      "111|t|RB1 in NCI-H209\n"
      "111|a|NCI-H209 cells lack RB1.\n"
      "111\t0\t3\tRB1\tGeneOrGeneProduct\t5925\n"
      "111\t7\t15\tNCI-H209\tCellLine\tCVCL_1525\n"
      "111\t16\t24\tNCI-H209\tCellLine\tCVCL_1525\n"
      "111\t36\t39\tRB1\tGeneOrGeneProduct\t5925\n"
      "111\tAssociation\t5925\tCVCL_1525\tNovel\n"
      "\n"
      "222|t|Bad\n"
      "222|a|x\n"
      "222\t0\t50\tx\tCellLine\tCVCL_1\n");
  auto load = load_pubtator_stream(in);
  ASSERT_EQ(load.documents.size(), 1u);
  EXPECT_EQ(load.errors.size(), 1u);
  const auto& d = load.documents[0];
  ASSERT_EQ(d.spans.size(), 4u);
  EXPECT_EQ(d.text().substr(d.spans[3].start, 3), "RB1");
  EXPECT_EQ(d.spans[1].entity_id, "cellosaurus:CVCL_1525");

  const auto& dict = testing::fixture_dictionary();
  auto docs = load.documents;
  map_gold_ids(docs, dict, {{"ncbigene:5925", "hgnc:9884"}});
  auto report = evaluate_pipeline(docs, dict);
  EXPECT_EQ(report.pairs.f1(), 1.0);
  EXPECT_EQ(report.ner.at("CellLine").tp, 2u);
}

TEST(Eval, ReportRendering) {
  const auto& dict = testing::fixture_dictionary();
  auto gold = mini_gold();
  map_gold_ids(gold.documents, dict, {});
  auto report = evaluate_pipeline(gold.documents, dict, 1);
  auto j = report.to_json();
  EXPECT_EQ(j["pairs"]["tp"], 11);
  EXPECT_EQ(j["per_document"].size(), 10u);
  EXPECT_NE(report.table().find("Gene-CellLine"), std::string::npos);
}

}  // namespace
}  // namespace celllit
