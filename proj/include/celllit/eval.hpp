#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "celllit/corpus.hpp"
#include "celllit/dictionary.hpp"
#include "celllit/matcher.hpp"
#include "celllit/scoring.hpp"
#include "json.hpp"

namespace celllit {

struct GoldSpan {
  std::size_t start = 0;  // character offsets into title + " " + abstract
  std::size_t end = 0;
  Category category = Category::Gene;
  std::string entity_id;
  bool mapped = true;  // false when the id has no counterpart in the dictionary

  bool operator==(const GoldSpan&) const = default;
};

struct GoldAnnotation {
  std::string doc_id;
  std::string title;
  std::string abstract;
  std::vector<GoldSpan> spans;

  std::string text() const;
  // (gene_id, cell_line_id) for every gene and cell line annotated together.
  std::set<std::pair<std::string, std::string>> pairs() const;
};

struct GoldLoad {
  std::vector<GoldAnnotation> documents;
  std::vector<std::string> errors;  // per-record, with line numbers
};

// Adapter format, one JSON record per line:
//   {"doc_id", "title", "abstract",
//    "annotations": [{"start", "end", "category": "Gene"|"CellLine", "entity_id"}]}
// Annotations of other categories are ignored.
GoldLoad load_gold(const std::filesystem::path& path);
GoldLoad load_gold_stream(std::istream& in);

// Reads the upstream PubTator release format (title/abstract lines followed
// by tab-separated annotations). GeneOrGeneProduct maps to Gene with an
// "ncbigene:" id and CellLine to "cellosaurus:".
GoldLoad load_pubtator_stream(std::istream& in);

// Rewrites gold ids into the dictionary's id space: ids already present are
// kept, others go through `id_map`, and the rest are marked unmapped.
// Returns the number of unmapped spans.
std::size_t map_gold_ids(std::vector<GoldAnnotation>& gold, const EntityDictionary& dict,
                         const std::map<std::string, std::string>& id_map);

struct Metrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  double precision() const;
  double recall() const;
  double f1() const;  // 0 when precision + recall == 0
};

struct DocumentBreakdown {
  std::string doc_id;
  Metrics pairs;
};

struct EvalReport {
  std::map<std::string, Metrics> ner;  // "Gene", "CellLine"
  Metrics pairs;
  std::vector<DocumentBreakdown> per_document;
  std::size_t excluded_gold_entities = 0;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
  std::string table() const;
};

using PredictedPair = std::tuple<std::string, std::string, std::string>;  // doc, gene, cell line

// Exact-set entity-pair evaluation, micro-averaged.
EvalReport evaluate_pairs(const std::set<PredictedPair>& predicted,
                          const std::vector<GoldAnnotation>& gold);

struct NerSpan {
  std::string doc_id;
  std::size_t start = 0;
  std::size_t end = 0;
  Category category = Category::Gene;

  auto operator<=>(const NerSpan&) const = default;
};

// Strict span matching per category (Gene, CellLine).
EvalReport evaluate_ner(const std::set<NerSpan>& predicted, const std::vector<GoldAnnotation>& gold);

// Runs matching and pair scoring over the gold documents and evaluates both
// tasks.
EvalReport evaluate_pipeline(const std::vector<GoldAnnotation>& gold, const EntityDictionary& dict,
                             std::size_t excluded_gold_entities = 0);

// Helpers the pipeline evaluation is built from.
std::set<NerSpan> ner_spans(const Document& doc, std::span<const EntityMention> mentions);
std::set<PredictedPair> gene_cell_line_pairs(std::span<const PairScore> scores,
                                             const EntityDictionary& dict);

}  // namespace celllit
