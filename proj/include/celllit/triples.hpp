#pragma once

#include <string>
#include <vector>

#include "celllit/corpus.hpp"
#include "celllit/dictionary.hpp"
#include "json.hpp"

namespace celllit {

struct Phrase {
  std::string head;        // display head, e.g. "RB1" or "EXPRESSES"
  std::string head_lemma;  // lemma of the head token
  std::string context;     // full phrase text as it appears in the document
  TokenSpan token_span;

  bool operator==(const Phrase&) const = default;
};

struct Triple {
  std::string doc_id;
  int sentence_index = 0;
  Phrase subject;
  Phrase predicate;
  Phrase object;
  std::vector<std::string> subject_entities;
  std::vector<std::string> object_entities;

  bool linked() const { return !subject_entities.empty() || !object_entities.empty(); }
  // "(HEAD [context] ; HEAD [context] ; HEAD [context])"
  std::string display() const;

  bool operator==(const Triple&) const = default;
};

inline constexpr int kMaxSentenceTokens = 120;

struct TripleExtraction {
  std::vector<Triple> triples;
  int skipped_long_sentences = 0;
};

// Rule pipeline for one sentence: tagging, verb-group detection with clause
// splitting at coordinated finite verbs, then subject / predicate / object
// selection. Returned triples are not entity-linked.
std::vector<Triple> extract_sentence_triples(const Document& doc, int sentence_index);

// Extracts and entity-links triples for every sentence of the document.
TripleExtraction extract_triples(const Document& doc, const EntityDictionary& dict);

// Fills subject_entities / object_entities from the phrases' context tokens.
Triple link_triple_entities(Triple t, const Document& doc, const EntityDictionary& dict);

nlohmann::json to_json(const Triple& t);
Triple triple_from_json(const nlohmann::json& j);

}  // namespace celllit
