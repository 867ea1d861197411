#pragma once

#include <span>
#include <string>
#include <vector>

#include "celllit/corpus.hpp"
#include "celllit/dictionary.hpp"
#include "json.hpp"

namespace celllit {

struct EntityMention {
  std::string doc_id;
  std::string entity_id;
  Category category = Category::Gene;
  TokenSpan token_span;
  FormKind form_kind = FormKind::RawExact;
  std::vector<std::string> ambiguous_with;  // other entities on the identical span

  bool operator==(const EntityMention&) const = default;
};

// Dictionary matching over all three layers of a document, restricted to
// single sentences. Per (entity, span) the most literal layer is kept; a
// mention is dropped only when a strictly longer, overlapping mention of the
// same category exists. Output is sorted by (start, end, entity_id).
std::vector<EntityMention> match_document(const Document& doc, const EntityDictionary& dict);

// Same semantics over a contiguous run of tokens (e.g. a triple phrase).
// Spans are expressed in the tokens' own `index` coordinates.
std::vector<EntityMention> match_span(std::span<const Token> tokens, const EntityDictionary& dict);

// Token-layer view used by both the matcher and its tests.
std::vector<std::string> layer_of(std::span<const Token> tokens, FormKind kind);

nlohmann::json to_json(const EntityMention& m);
EntityMention mention_from_json(const nlohmann::json& j);

}  // namespace celllit
