#include "celllit/matcher.hpp"

#include <algorithm>
#include <map>

#include "celllit/error.hpp"

namespace celllit {
namespace {

struct Candidate {
  std::string entity_id;
  Category category;
  TokenSpan span;
  FormKind kind;
};

// Adds matches of every layer found within tokens [first, last) of `tokens`.
void collect(std::span<const Token> tokens, const EntityDictionary& dict,
             std::map<std::pair<std::string, TokenSpan>, Candidate>& best) {
  if (tokens.empty()) return;
  const int base = tokens.front().index;
  for (FormKind kind : kAllFormKinds) {
    std::vector<std::string> layer = layer_of(tokens, kind);
    for (const auto& hit : dict.scan(kind, layer)) {
      const DictionaryForm& form = dict.forms()[hit.form_index];
      TokenSpan span{base + hit.start, base + hit.end};
      auto key = std::make_pair(form.entity_id, span);
      auto it = best.find(key);
      if (it == best.end()) {
        best.emplace(key, Candidate{form.entity_id, form.category, span, kind});
      } else if (kind < it->second.kind) {
        it->second.kind = kind;
      }
    }
  }
}

std::vector<EntityMention> resolve(const std::string& doc_id,
                                   const std::map<std::pair<std::string, TokenSpan>, Candidate>& best) {
  std::vector<const Candidate*> all;
  all.reserve(best.size());
  for (const auto& [key, c] : best) all.push_back(&c);
  std::sort(all.begin(), all.end(), [](const Candidate* a, const Candidate* b) {
    return std::tie(a->span.start, a->span.end, a->entity_id) <
           std::tie(b->span.start, b->span.end, b->entity_id);
  });

  // Spans are sorted by start, so only candidates starting before this one's
  // end can overlap it.
  std::vector<const Candidate*> kept;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const Candidate* c = all[i];
    bool displaced = false;
    for (std::size_t j = 0; j < all.size() && !displaced; ++j) {
      const Candidate* o = all[j];
      if (o->span.start >= c->span.end) break;
      if (o->category == c->category && o->span.overlaps(c->span) &&
          o->span.length() > c->span.length()) {
        displaced = true;
      }
    }
    if (!displaced) kept.push_back(c);
  }

  std::vector<EntityMention> mentions;
  mentions.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    EntityMention m;
    m.doc_id = doc_id;
    m.entity_id = kept[i]->entity_id;
    m.category = kept[i]->category;
    m.token_span = kept[i]->span;
    m.form_kind = kept[i]->kind;
    for (const Candidate* o : kept) {
      if (o != kept[i] && o->span == kept[i]->span) m.ambiguous_with.push_back(o->entity_id);
    }
    mentions.push_back(std::move(m));
  }
  return mentions;
}

}  // namespace

std::vector<std::string> layer_of(std::span<const Token> tokens, FormKind kind) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    switch (kind) {
      case FormKind::RawExact: out.push_back(t.text_raw); break;
      case FormKind::CaseNormalized: out.push_back(t.text_cased); break;
      case FormKind::LemmaTokens: out.push_back(t.text_lemma); break;
    }
  }
  return out;
}

std::vector<EntityMention> match_document(const Document& doc, const EntityDictionary& dict) {
  std::map<std::pair<std::string, TokenSpan>, Candidate> best;
  std::span<const Token> tokens(doc.tokens());
  for (const auto& s : doc.sentences()) {
    collect(tokens.subspan(s.start, s.length()), dict, best);
  }
  return resolve(doc.doc_id(), best);
}

std::vector<EntityMention> match_span(std::span<const Token> tokens, const EntityDictionary& dict) {
  std::map<std::pair<std::string, TokenSpan>, Candidate> best;
  collect(tokens, dict, best);
  return resolve({}, best);
}

nlohmann::json to_json(const EntityMention& m) {
  return {{"doc_id", m.doc_id},
          {"entity_id", m.entity_id},
          {"category", to_string(m.category)},
          {"span", {m.token_span.start, m.token_span.end}},
          {"form_kind", to_string(m.form_kind)},
          {"ambiguous_with", m.ambiguous_with}};
}

EntityMention mention_from_json(const nlohmann::json& j) {
  EntityMention m;
  m.doc_id = j.at("doc_id").get<std::string>();
  m.entity_id = j.at("entity_id").get<std::string>();
  auto cat = parse_category(j.at("category").get<std::string>());
  if (!cat) throw FormatError("unknown category in mention record");
  m.category = *cat;
  m.token_span = {j.at("span").at(0).get<int>(), j.at("span").at(1).get<int>()};
  std::string kind = j.at("form_kind").get<std::string>();
  bool found = false;
  for (FormKind k : kAllFormKinds) {
    if (to_string(k) == kind) {
      m.form_kind = k;
      found = true;
    }
  }
  if (!found) throw FormatError("unknown form_kind '" + kind + "'");
  m.ambiguous_with = j.value("ambiguous_with", std::vector<std::string>{});
  return m;
}

}  // namespace celllit
