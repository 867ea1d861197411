#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "celllit/corpus.hpp"
#include "celllit/matcher.hpp"
#include "celllit/triples.hpp"
#include "json.hpp"

namespace celllit {

// Token distance between two mention spans: one more than the number of
// tokens strictly between them, so adjacent spans are at distance 1.
// Overlapping or nested spans are clamped to 1.
int token_distance(TokenSpan p, TokenSpan q);

// Contribution of one mention pair: 1 / log2(d + 1).
double distance_weight(int d);

struct PairScore {
  std::string doc_id;
  std::string entity_a;  // entity_a < entity_b
  std::string entity_b;
  double distance_score = 0.0;
  int triple_bonus = 0;
  double total = 0.0;
  int primary_sentence = -1;
  std::vector<std::string> predicates;  // predicate heads of supporting triples

  bool has_triple() const { return triple_bonus > 0; }
  bool operator==(const PairScore&) const = default;
};

// R(D, a, b): sum over every mention pair of distance_weight(token_distance).
// Empty inputs score 0.
double pair_score(const Document& doc, std::span<const EntityMention> mentions_a,
                  std::span<const EntityMention> mentions_b);

// Number of triples whose subject links one entity and object the other.
int supporting_triples(const std::string& a, const std::string& b, std::span<const Triple> triples);

// Adds one per supporting triple.
PairScore apply_triple_bonus(PairScore score, std::span<const Triple> triples);

// Sentence shown as primary evidence: the first supporting triple's sentence,
// otherwise the sentence holding the closest mention pair (co-sentential
// pairs preferred, ties to the earliest sentence).
int select_primary_evidence(const Document& doc, const std::string& a, const std::string& b,
                            std::span<const Triple> triples,
                            std::span<const EntityMention> mentions);

// Scores every unordered pair of distinct entities mentioned in the document.
std::vector<PairScore> score_document(const Document& doc, std::span<const EntityMention> mentions,
                                      std::span<const Triple> triples);

struct Evidence {
  std::string doc_id;
  double total = 0.0;
  int sentence = -1;
  bool has_triple = false;
  double distance_score = 0.0;
  int triple_bonus = 0;

  bool operator==(const Evidence&) const = default;
};

struct AggregatedRelation {
  std::string entity_a;
  std::string entity_b;
  double corpus_score = 0.0;
  std::vector<Evidence> evidence;        // descending total, then doc_id
  std::vector<std::string> predicates;   // sorted, unique

  bool operator==(const AggregatedRelation&) const = default;
};

// Sums per-document totals per unordered pair. Output is ordered by
// corpus_score descending, then (entity_a, entity_b).
std::vector<AggregatedRelation> aggregate(std::span<const PairScore> scores);

nlohmann::json to_json(const PairScore& s);
PairScore pair_score_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AggregatedRelation& r);
AggregatedRelation relation_from_json(const nlohmann::json& j);

}  // namespace celllit
