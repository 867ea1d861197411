#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "celllit/ontology.hpp"

namespace celllit {

// The three text layers. Values double as indices.
enum class FormKind { RawExact = 0, CaseNormalized = 1, LemmaTokens = 2 };

inline constexpr FormKind kAllFormKinds[] = {FormKind::RawExact, FormKind::CaseNormalized,
                                             FormKind::LemmaTokens};

std::string_view to_string(FormKind k);

struct DictionaryForm {
  std::vector<std::string> tokens;  // layer tokens; surface() joins them
  FormKind form_kind = FormKind::RawExact;
  std::string entity_id;
  Category category = Category::Gene;

  std::string surface() const;
  auto operator<=>(const DictionaryForm&) const = default;
};

// Expands one entity into its dictionary forms. Gene and cell-line canonical
// names stay RawExact; every other name yields a CaseNormalized and a
// LemmaTokens form. Duplicates for the same entity are removed.
std::vector<DictionaryForm> expand_forms(const OntologyEntity& entity);

struct CategoryStats {
  std::size_t entities = 0;
  std::size_t forms = 0;
};

// Token-level Aho-Corasick automaton over every dictionary form, one per
// text layer. Immutable once built.
class EntityDictionary {
 public:
  struct Hit {
    int start = 0;  // token offset within the scanned sequence
    int end = 0;
    std::size_t form_index = 0;
  };

  EntityDictionary() = default;
  explicit EntityDictionary(std::vector<OntologyEntity> entities);

  const std::vector<DictionaryForm>& forms() const { return forms_; }
  std::size_t form_count() const { return forms_.size(); }
  const std::vector<OntologyEntity>& entities() const { return entities_; }

  const OntologyEntity* find_entity(std::string_view entity_id) const;
  std::vector<std::size_t> forms_of(std::string_view entity_id) const;
  std::map<Category, CategoryStats> stats() const;

  // All occurrences of layer-`kind` forms in a token sequence, reported in
  // order of end position then form index.
  std::vector<Hit> scan(FormKind kind, std::span<const std::string> layer_tokens) const;

  // Canonical line-delimited serialization of all forms.
  std::string serialize() const;

 private:
  struct Node {
    std::map<int, int> next;
    int fail = 0;
    int depth = 0;
    std::vector<std::size_t> outputs;  // forms ending here, including via fail links
  };
  struct Automaton {
    std::vector<Node> nodes{Node{}};
    void add(std::span<const int> ids, std::size_t form_index);
    void finish();
  };

  int token_id(std::string_view token) const;

  std::vector<OntologyEntity> entities_;
  std::vector<DictionaryForm> forms_;
  std::unordered_map<std::string, int> vocabulary_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_entity_;
  Automaton automata_[3];
};

EntityDictionary build_dictionary(std::vector<OntologyEntity> entities);

}  // namespace celllit
