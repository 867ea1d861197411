#include "celllit/dictionary.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "celllit/corpus.hpp"
#include "json.hpp"

namespace celllit {
namespace {

constexpr std::size_t kMaxFormTokens = 8;

void add_layer_form(std::set<DictionaryForm>& out, const OntologyEntity& e,
                    const Tokenization& tk, FormKind kind) {
  if (tk.tokens.empty() || tk.tokens.size() > kMaxFormTokens) return;
  DictionaryForm f;
  f.form_kind = kind;
  f.entity_id = e.entity_id;
  f.category = e.category;
  for (const auto& t : tk.tokens) {
    switch (kind) {
      case FormKind::RawExact: f.tokens.push_back(t.text_raw); break;
      case FormKind::CaseNormalized: f.tokens.push_back(t.text_cased); break;
      case FormKind::LemmaTokens: f.tokens.push_back(t.text_lemma); break;
    }
  }
  out.insert(std::move(f));
}

}  // namespace

std::string_view to_string(FormKind k) {
  switch (k) {
    case FormKind::RawExact: return "RawExact";
    case FormKind::CaseNormalized: return "CaseNormalized";
    case FormKind::LemmaTokens: return "LemmaTokens";
  }
  return "Unknown";
}

std::string DictionaryForm::surface() const {
  std::string s;
  for (const auto& t : tokens) {
    if (!s.empty()) s += ' ';
    s += t;
  }
  return s;
}

std::vector<DictionaryForm> expand_forms(const OntologyEntity& entity) {
  std::set<DictionaryForm> forms;
  Tokenization canonical = tokenize(entity.canonical_name);
  if (entity.category == Category::Gene || entity.category == Category::CellLine) {
    add_layer_form(forms, entity, canonical, FormKind::RawExact);
  } else {
    add_layer_form(forms, entity, canonical, FormKind::CaseNormalized);
    add_layer_form(forms, entity, canonical, FormKind::LemmaTokens);
  }
  for (const auto& synonym : entity.synonyms) {
    Tokenization tk = tokenize(synonym);
    add_layer_form(forms, entity, tk, FormKind::CaseNormalized);
    add_layer_form(forms, entity, tk, FormKind::LemmaTokens);
  }
  return {forms.begin(), forms.end()};
}

void EntityDictionary::Automaton::add(std::span<const int> ids, std::size_t form_index) {
  int state = 0;
  for (int id : ids) {
    auto it = nodes[state].next.find(id);
    if (it == nodes[state].next.end()) {
      int child = static_cast<int>(nodes.size());
      int depth = nodes[state].depth + 1;
      nodes[state].next.emplace(id, child);
      nodes.push_back(Node{});
      nodes.back().depth = depth;
      state = child;
    } else {
      state = it->second;
    }
  }
  nodes[state].outputs.push_back(form_index);
}

void EntityDictionary::Automaton::finish() {
  std::deque<int> queue;
  for (auto [id, child] : nodes[0].next) {
    nodes[child].fail = 0;
    queue.push_back(child);
  }
  while (!queue.empty()) {
    int node = queue.front();
    queue.pop_front();
    for (auto [id, child] : nodes[node].next) {
      int f = nodes[node].fail;
      while (f != 0 && !nodes[f].next.contains(id)) f = nodes[f].fail;
      auto it = nodes[f].next.find(id);
      int target = (it != nodes[f].next.end() && it->second != child) ? it->second : 0;
      nodes[child].fail = target;
      // The fail target is shallower and therefore already complete.
      auto& out = nodes[child].outputs;
      out.insert(out.end(), nodes[target].outputs.begin(), nodes[target].outputs.end());
      queue.push_back(child);
    }
  }
  for (auto& n : nodes) std::sort(n.outputs.begin(), n.outputs.end());
}

EntityDictionary::EntityDictionary(std::vector<OntologyEntity> entities)
    : entities_(std::move(entities)) {
  std::sort(entities_.begin(), entities_.end(),
            [](const auto& a, const auto& b) { return a.entity_id < b.entity_id; });
  for (const auto& e : entities_) {
    for (auto& f : expand_forms(e)) forms_.push_back(std::move(f));
  }
  std::vector<int> ids;
  for (std::size_t i = 0; i < forms_.size(); ++i) {
    const auto& f = forms_[i];
    by_entity_[f.entity_id].push_back(i);
    ids.clear();
    for (const auto& t : f.tokens) {
      auto [it, inserted] = vocabulary_.emplace(t, static_cast<int>(vocabulary_.size()));
      ids.push_back(it->second);
    }
    automata_[static_cast<int>(f.form_kind)].add(ids, i);
  }
  for (auto& a : automata_) a.finish();
}

const OntologyEntity* EntityDictionary::find_entity(std::string_view entity_id) const {
  auto it = std::lower_bound(entities_.begin(), entities_.end(), entity_id,
                             [](const OntologyEntity& e, std::string_view id) {
                               return e.entity_id < id;
                             });
  if (it == entities_.end() || it->entity_id != entity_id) return nullptr;
  return &*it;
}

std::vector<std::size_t> EntityDictionary::forms_of(std::string_view entity_id) const {
  auto it = by_entity_.find(std::string(entity_id));
  if (it == by_entity_.end()) return {};
  return it->second;
}

std::map<Category, CategoryStats> EntityDictionary::stats() const {
  std::map<Category, CategoryStats> out;
  for (Category c : kAllCategories) out[c] = {};
  for (const auto& e : entities_) ++out[e.category].entities;
  for (const auto& f : forms_) ++out[f.category].forms;
  return out;
}

int EntityDictionary::token_id(std::string_view token) const {
  auto it = vocabulary_.find(std::string(token));
  return it == vocabulary_.end() ? -1 : it->second;
}

std::vector<EntityDictionary::Hit> EntityDictionary::scan(
    FormKind kind, std::span<const std::string> layer_tokens) const {
  const Automaton& a = automata_[static_cast<int>(kind)];
  std::vector<Hit> hits;
  int state = 0;
  for (std::size_t i = 0; i < layer_tokens.size(); ++i) {
    int id = token_id(layer_tokens[i]);
    if (id < 0) {
      state = 0;
      continue;
    }
    while (state != 0 && !a.nodes[state].next.contains(id)) state = a.nodes[state].fail;
    auto it = a.nodes[state].next.find(id);
    state = it == a.nodes[state].next.end() ? 0 : it->second;
    for (std::size_t form_index : a.nodes[state].outputs) {
      int len = static_cast<int>(forms_[form_index].tokens.size());
      int end = static_cast<int>(i) + 1;
      hits.push_back({end - len, end, form_index});
    }
  }
  return hits;
}

std::string EntityDictionary::serialize() const {
  std::string out;
  for (const auto& f : forms_) {
    nlohmann::json j = {{"entity_id", f.entity_id},
                        {"category", to_string(f.category)},
                        {"kind", to_string(f.form_kind)},
                        {"tokens", f.tokens}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

EntityDictionary build_dictionary(std::vector<OntologyEntity> entities) {
  return EntityDictionary(std::move(entities));
}

}  // namespace celllit
