#include "celllit/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace celllit {
namespace {

// Weights for distances 1..n, extended on demand.
const std::vector<double>& weight_table(int max_distance) {
  thread_local std::vector<double> table{0.0};
  while (static_cast<int>(table.size()) <= max_distance) {
    table.push_back(1.0 / std::log2(static_cast<double>(table.size()) + 1.0));
  }
  return table;
}

bool supports(const Triple& t, const std::string& a, const std::string& b) {
  auto has = [](const std::vector<std::string>& ids, const std::string& id) {
    return std::binary_search(ids.begin(), ids.end(), id);
  };
  return (has(t.subject_entities, a) && has(t.object_entities, b)) ||
         (has(t.subject_entities, b) && has(t.object_entities, a));
}

}  // namespace

int token_distance(TokenSpan p, TokenSpan q) {
  int d = std::max(p.start, q.start) - std::min(p.end, q.end) + 1;
  return std::max(d, 1);
}

double distance_weight(int d) { return 1.0 / std::log2(static_cast<double>(d) + 1.0); }

double pair_score(const Document& doc, std::span<const EntityMention> mentions_a,
                  std::span<const EntityMention> mentions_b) {
  if (mentions_a.empty() || mentions_b.empty()) return 0.0;
  // Histogram of distances summed in ascending order: the result does not
  // depend on argument or mention order.
  int max_d = static_cast<int>(doc.tokens().size()) + 1;
  for (const auto& m : mentions_a) max_d = std::max(max_d, m.token_span.end + 1);
  for (const auto& m : mentions_b) max_d = std::max(max_d, m.token_span.end + 1);
  std::vector<long long> histogram(static_cast<std::size_t>(max_d) + 1, 0);
  for (const auto& p : mentions_a) {
    for (const auto& q : mentions_b) ++histogram[token_distance(p.token_span, q.token_span)];
  }
  const auto& w = weight_table(max_d);
  double sum = 0.0;
  for (int d = 1; d <= max_d; ++d) {
    if (histogram[d] != 0) sum += static_cast<double>(histogram[d]) * w[d];
  }
  return sum;
}

int supporting_triples(const std::string& a, const std::string& b, std::span<const Triple> triples) {
  int count = 0;
  for (const auto& t : triples) {
    if (supports(t, a, b)) ++count;
  }
  return count;
}

PairScore apply_triple_bonus(PairScore score, std::span<const Triple> triples) {
  std::set<std::string> predicates(score.predicates.begin(), score.predicates.end());
  int bonus = 0;
  for (const auto& t : triples) {
    if (!supports(t, score.entity_a, score.entity_b)) continue;
    ++bonus;
    predicates.insert(t.predicate.head);
  }
  score.triple_bonus += bonus;
  score.total += bonus;
  score.predicates.assign(predicates.begin(), predicates.end());
  return score;
}

int select_primary_evidence(const Document& doc, const std::string& a, const std::string& b,
                            std::span<const Triple> triples,
                            std::span<const EntityMention> mentions) {
  int best_triple = -1;
  for (const auto& t : triples) {
    if (supports(t, a, b) && (best_triple < 0 || t.sentence_index < best_triple)) {
      best_triple = t.sentence_index;
    }
  }
  if (best_triple >= 0) return best_triple;

  std::tuple<int, int, int> best{2, 0, 0};
  bool found = false;
  for (const auto& p : mentions) {
    if (p.entity_id != a) continue;
    for (const auto& q : mentions) {
      if (q.entity_id != b) continue;
      int sp = doc.sentence_of(p.token_span.start);
      int sq = doc.sentence_of(q.token_span.start);
      std::tuple<int, int, int> key{sp == sq ? 0 : 1, token_distance(p.token_span, q.token_span),
                                    std::min(sp, sq)};
      if (!found || key < best) {
        best = key;
        found = true;
      }
    }
  }
  return found ? std::get<2>(best) : -1;
}

std::vector<PairScore> score_document(const Document& doc, std::span<const EntityMention> mentions,
                                      std::span<const Triple> triples) {
  std::map<std::string, std::vector<EntityMention>> by_entity;
  for (const auto& m : mentions) by_entity[m.entity_id].push_back(m);

  std::vector<PairScore> out;
  for (auto ia = by_entity.begin(); ia != by_entity.end(); ++ia) {
    for (auto ib = std::next(ia); ib != by_entity.end(); ++ib) {
      PairScore s;
      s.doc_id = doc.doc_id();
      s.entity_a = ia->first;
      s.entity_b = ib->first;
      s.distance_score = pair_score(doc, ia->second, ib->second);
      s.total = s.distance_score;
      s = apply_triple_bonus(std::move(s), triples);
      s.primary_sentence = select_primary_evidence(doc, s.entity_a, s.entity_b, triples, mentions);
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<AggregatedRelation> aggregate(std::span<const PairScore> scores) {
  std::map<std::pair<std::string, std::string>, AggregatedRelation> groups;
  std::map<std::pair<std::string, std::string>, std::set<std::string>> predicates;
  for (const auto& s : scores) {
    auto key = std::minmax(s.entity_a, s.entity_b);
    auto& rel = groups[{key.first, key.second}];
    rel.entity_a = key.first;
    rel.entity_b = key.second;
    rel.evidence.push_back({s.doc_id, s.total, s.primary_sentence, s.has_triple(),
                            s.distance_score, s.triple_bonus});
    predicates[{key.first, key.second}].insert(s.predicates.begin(), s.predicates.end());
  }
  std::vector<AggregatedRelation> out;
  out.reserve(groups.size());
  for (auto& [key, rel] : groups) {
    std::sort(rel.evidence.begin(), rel.evidence.end(), [](const Evidence& x, const Evidence& y) {
      if (x.total != y.total) return x.total > y.total;
      return x.doc_id < y.doc_id;
    });
    rel.corpus_score = 0.0;
    for (const auto& e : rel.evidence) rel.corpus_score += e.total;
    const auto& p = predicates[key];
    rel.predicates.assign(p.begin(), p.end());
    out.push_back(std::move(rel));
  }
  std::stable_sort(out.begin(), out.end(), [](const AggregatedRelation& x, const AggregatedRelation& y) {
    if (x.corpus_score != y.corpus_score) return x.corpus_score > y.corpus_score;
    return std::tie(x.entity_a, x.entity_b) < std::tie(y.entity_a, y.entity_b);
  });
  return out;
}

nlohmann::json to_json(const PairScore& s) {
  return {{"doc_id", s.doc_id},
          {"entity_a", s.entity_a},
          {"entity_b", s.entity_b},
          {"distance_score", s.distance_score},
          {"triple_bonus", s.triple_bonus},
          {"total", s.total},
          {"primary_sentence", s.primary_sentence},
          {"predicates", s.predicates}};
}

PairScore pair_score_from_json(const nlohmann::json& j) {
  PairScore s;
  s.doc_id = j.at("doc_id").get<std::string>();
  s.entity_a = j.at("entity_a").get<std::string>();
  s.entity_b = j.at("entity_b").get<std::string>();
  s.distance_score = j.at("distance_score").get<double>();
  s.triple_bonus = j.at("triple_bonus").get<int>();
  s.total = j.at("total").get<double>();
  s.primary_sentence = j.value("primary_sentence", -1);
  s.predicates = j.value("predicates", std::vector<std::string>{});
  return s;
}

nlohmann::json to_json(const AggregatedRelation& r) {
  nlohmann::json evidence = nlohmann::json::array();
  for (const auto& e : r.evidence) {
    evidence.push_back({{"doc_id", e.doc_id},
                        {"total", e.total},
                        {"sentence", e.sentence},
                        {"has_triple", e.has_triple},
                        {"distance_score", e.distance_score},
                        {"triple_bonus", e.triple_bonus}});
  }
  return {{"entity_a", r.entity_a},
          {"entity_b", r.entity_b},
          {"corpus_score", r.corpus_score},
          {"evidence", std::move(evidence)},
          {"predicates", r.predicates}};
}

AggregatedRelation relation_from_json(const nlohmann::json& j) {
  AggregatedRelation r;
  r.entity_a = j.at("entity_a").get<std::string>();
  r.entity_b = j.at("entity_b").get<std::string>();
  r.corpus_score = j.at("corpus_score").get<double>();
  for (const auto& e : j.at("evidence")) {
    r.evidence.push_back({e.at("doc_id").get<std::string>(), e.at("total").get<double>(),
                          e.at("sentence").get<int>(), e.at("has_triple").get<bool>(),
                          e.at("distance_score").get<double>(), e.at("triple_bonus").get<int>()});
  }
  r.predicates = j.value("predicates", std::vector<std::string>{});
  return r;
}

}  // namespace celllit
