#include "celllit/graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "celllit/error.hpp"

namespace celllit {
namespace {

GraphNode node_from_entity(const OntologyEntity& e) {
  return {e.entity_id, e.category, e.canonical_name, e.synonyms, e.genomic_location};
}

StoredDocument store_document(const Document& doc, std::span<const EntityMention> mentions) {
  StoredDocument d;
  d.doc_id = doc.doc_id();
  d.title = doc.title();
  d.text = doc.text();
  const auto& toks = doc.tokens();
  for (const auto& s : doc.sentences()) {
    d.sentences.emplace_back(toks[s.start].char_start, toks[s.end - 1].char_end);
  }
  for (const auto& m : mentions) {
    d.mentions.push_back({m.entity_id, m.token_span, toks.at(m.token_span.start).char_start,
                          toks.at(m.token_span.end - 1).char_end, m.form_kind});
  }
  return d;
}

void append_escaped(std::string& out, char c) {
  switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
  }
}

}  // namespace

std::string_view to_string(EdgeKind k) {
  return k == EdgeKind::TextRelation ? "TextRelation" : "ParentOf";
}

Graph Graph::build(const EntityDictionary& dict, std::span<const Document> documents,
                   std::span<const EntityMention> mentions,
                   std::span<const AggregatedRelation> relations,
                   std::span<const HierarchyEdge> hierarchy) {
  std::set<std::string> ids;
  for (const auto& m : mentions) ids.insert(m.entity_id);
  for (const auto& h : hierarchy) {
    ids.insert(h.parent_id);
    ids.insert(h.child_id);
  }
  std::vector<GraphNode> nodes;
  for (const auto& id : ids) {
    const OntologyEntity* e = dict.find_entity(id);
    if (e == nullptr) throw Error("referential failure: entity '" + id + "' is not in the ontology");
    nodes.push_back(node_from_entity(*e));
  }

  std::map<std::string, std::vector<EntityMention>> by_doc;
  for (const auto& m : mentions) by_doc[m.doc_id].push_back(m);
  std::vector<StoredDocument> stored;
  for (const auto& doc : documents) {
    auto it = by_doc.find(doc.doc_id());
    std::span<const EntityMention> ms;
    if (it != by_doc.end()) ms = it->second;
    stored.push_back(store_document(doc, ms));
  }
  for (const auto& [doc_id, ms] : by_doc) {
    if (!std::any_of(documents.begin(), documents.end(),
                     [&](const Document& d) { return d.doc_id() == doc_id; })) {
      throw Error("referential failure: mention in unknown document '" + doc_id + "'");
    }
  }
  return from_parts(std::move(nodes), {relations.begin(), relations.end()},
                    {hierarchy.begin(), hierarchy.end()}, std::move(stored));
}

Graph Graph::from_parts(std::vector<GraphNode> nodes, std::vector<AggregatedRelation> relations,
                        std::vector<HierarchyEdge> hierarchy,
                        std::vector<StoredDocument> documents) {
  Graph g;
  g.nodes_ = std::move(nodes);
  g.relations_ = std::move(relations);
  g.hierarchy_ = std::move(hierarchy);
  g.documents_ = std::move(documents);
  std::sort(g.nodes_.begin(), g.nodes_.end(),
            [](const auto& a, const auto& b) { return a.entity_id < b.entity_id; });
  for (auto& r : g.relations_) {
    if (r.entity_b < r.entity_a) std::swap(r.entity_a, r.entity_b);
  }
  std::sort(g.relations_.begin(), g.relations_.end(), [](const auto& a, const auto& b) {
    return std::tie(a.entity_a, a.entity_b) < std::tie(b.entity_a, b.entity_b);
  });
  std::sort(g.hierarchy_.begin(), g.hierarchy_.end());
  std::sort(g.documents_.begin(), g.documents_.end(),
            [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });
  g.index();
  return g;
}

void Graph::index() {
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (nodes_[i].entity_id == nodes_[i - 1].entity_id) {
      throw Error("duplicate node '" + nodes_[i].entity_id + "'");
    }
  }
  for (std::size_t i = 1; i < documents_.size(); ++i) {
    if (documents_[i].doc_id == documents_[i - 1].doc_id) {
      throw Error("duplicate document '" + documents_[i].doc_id + "'");
    }
  }
  auto require_node = [this](const std::string& id, const char* what) {
    if (find_node(id) == nullptr) {
      throw Error(std::string("referential failure: ") + what + " references unknown node '" + id + "'");
    }
  };
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    const auto& r = relations_[i];
    require_node(r.entity_a, "text relation");
    require_node(r.entity_b, "text relation");
    if (r.entity_a == r.entity_b) throw Error("self relation on '" + r.entity_a + "'");
    if (i > 0 && relations_[i - 1].entity_a == r.entity_a && relations_[i - 1].entity_b == r.entity_b) {
      throw Error("duplicate relation " + r.entity_a + " / " + r.entity_b);
    }
    if (r.evidence.empty()) {
      throw Error("text relation " + r.entity_a + " / " + r.entity_b + " has no evidence");
    }
    double sum = 0.0;
    for (const auto& e : r.evidence) {
      if (find_document(e.doc_id) == nullptr) {
        throw Error("referential failure: evidence cites unknown document '" + e.doc_id + "'");
      }
      sum += e.total;
    }
    if (sum != r.corpus_score) {
      throw Error("corpus_score of " + r.entity_a + " / " + r.entity_b +
                  " differs from its evidence total");
    }
    adjacency_[r.entity_a].push_back(i);
    adjacency_[r.entity_b].push_back(i);
  }
  for (const auto& h : hierarchy_) {
    require_node(h.parent_id, "parent-of edge");
    require_node(h.child_id, "parent-of edge");
  }
  for (const auto& d : documents_) {
    for (const auto& m : d.mentions) {
      require_node(m.entity_id, "mention");
      if (m.char_start > m.char_end || m.char_end > d.text.size()) {
        throw Error("mention outside document '" + d.doc_id + "'");
      }
    }
  }
}

std::vector<GraphEdge> Graph::edges() const {
  std::vector<GraphEdge> out;
  out.reserve(edge_count());
  for (const auto& r : relations_) {
    out.push_back({EdgeKind::TextRelation, r.entity_a, r.entity_b, r.corpus_score,
                   r.evidence.size(), r.predicates});
  }
  for (const auto& h : hierarchy_) {
    out.push_back({EdgeKind::ParentOf, h.parent_id, h.child_id, 0.0, 0, {}});
  }
  return out;
}

const GraphNode* Graph::find_node(std::string_view entity_id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), entity_id,
                             [](const GraphNode& n, std::string_view id) { return n.entity_id < id; });
  return it != nodes_.end() && it->entity_id == entity_id ? &*it : nullptr;
}

const StoredDocument* Graph::find_document(std::string_view doc_id) const {
  auto it = std::lower_bound(documents_.begin(), documents_.end(), doc_id,
                             [](const StoredDocument& d, std::string_view id) { return d.doc_id < id; });
  return it != documents_.end() && it->doc_id == doc_id ? &*it : nullptr;
}

const AggregatedRelation* Graph::find_relation(std::string_view a, std::string_view b) const {
  if (b < a) std::swap(a, b);
  auto it = std::lower_bound(relations_.begin(), relations_.end(), std::make_pair(a, b),
                             [](const AggregatedRelation& r, const auto& key) {
                               return std::tie(r.entity_a, r.entity_b) < std::tie(key.first, key.second);
                             });
  if (it == relations_.end() || it->entity_a != a || it->entity_b != b) return nullptr;
  return &*it;
}

std::vector<std::string> Graph::parents_of(std::string_view entity_id) const {
  std::vector<std::string> out;
  for (const auto& h : hierarchy_) {
    if (h.child_id == entity_id) out.push_back(h.parent_id);
  }
  return out;
}

std::vector<std::string> Graph::children_of(std::string_view entity_id) const {
  std::vector<std::string> out;
  for (const auto& h : hierarchy_) {
    if (h.parent_id == entity_id) out.push_back(h.child_id);
  }
  return out;
}

std::vector<RankedPartner> Graph::ranked_partners(std::string_view entity_id,
                                                  std::optional<Category> category_filter,
                                                  std::size_t limit) const {
  if (find_node(entity_id) == nullptr) {
    throw NotFoundError("unknown entity '" + std::string(entity_id) + "'");
  }
  std::vector<RankedPartner> out;
  auto it = adjacency_.find(entity_id);
  if (it != adjacency_.end()) {
    for (std::size_t idx : it->second) {
      const auto& r = relations_[idx];
      const std::string& other = r.entity_a == entity_id ? r.entity_b : r.entity_a;
      const GraphNode* node = find_node(other);
      if (category_filter && node->category != *category_filter) continue;
      out.push_back({*node, r});
    }
  }
  std::sort(out.begin(), out.end(), [](const RankedPartner& x, const RankedPartner& y) {
    if (x.relation.corpus_score != y.relation.corpus_score) {
      return x.relation.corpus_score > y.relation.corpus_score;
    }
    return std::tie(x.partner.category, x.partner.entity_id) <
           std::tie(y.partner.category, y.partner.entity_id);
  });
  if (out.size() > limit) out.resize(limit);
  return out;
}

std::vector<EvidenceRecord> Graph::evidence_for(std::string_view entity_id,
                                                std::string_view partner_id) const {
  const AggregatedRelation* r = find_relation(entity_id, partner_id);
  if (r == nullptr) {
    throw NotFoundError("no relation between '" + std::string(entity_id) + "' and '" +
                        std::string(partner_id) + "'");
  }
  std::vector<EvidenceRecord> out;
  for (const auto& e : r->evidence) {
    const StoredDocument* d = find_document(e.doc_id);
    EvidenceRecord rec;
    rec.doc_id = e.doc_id;
    rec.title = d->title;
    rec.total = e.total;
    rec.distance_score = e.distance_score;
    rec.triple_bonus = e.triple_bonus;
    rec.has_triple = e.has_triple;
    rec.sentence_index = e.sentence;
    if (e.sentence >= 0 && e.sentence < static_cast<int>(d->sentences.size())) {
      std::tie(rec.sentence_start, rec.sentence_end) = d->sentences[e.sentence];
    }
    rec.text = d->text;
    for (const auto& m : d->mentions) {
      rec.text_marks.push_back({m.char_start, m.char_end, m.entity_id});
      bool pair_entity = m.entity_id == r->entity_a || m.entity_id == r->entity_b;
      if (pair_entity && m.char_start >= rec.sentence_start && m.char_end <= rec.sentence_end &&
          rec.sentence_end > rec.sentence_start) {
        rec.sentence_marks.push_back({m.char_start, m.char_end, m.entity_id});
      }
    }
    std::sort(rec.text_marks.begin(), rec.text_marks.end());
    std::sort(rec.sentence_marks.begin(), rec.sentence_marks.end());
    out.push_back(std::move(rec));
  }
  return out;
}

AnnotatedProfile Graph::annotate_profile(const CnvProfile& profile, std::string_view cell_line_id,
                                         std::size_t top_k) const {
  if (profile.cell_line_id != cell_line_id) {
    throw Error("profile belongs to '" + profile.cell_line_id + "', not '" +
                std::string(cell_line_id) + "'");
  }
  AnnotatedProfile out{profile, {}};
  if (top_k == 0 || find_node(cell_line_id) == nullptr) return out;
  for (const auto& p : ranked_partners(cell_line_id, std::nullopt, relations_.size())) {
    if (out.markers.size() == top_k) break;
    if (p.partner.category != Category::Gene && p.partner.category != Category::Cytoband) continue;
    if (!p.partner.genomic_location) continue;
    out.markers.push_back({p.partner.entity_id, p.partner.canonical_name, p.partner.category,
                           *p.partner.genomic_location, p.relation.corpus_score});
  }
  return out;
}

GraphStats Graph::stats() const {
  GraphStats s;
  s.abstracts = documents_.size();
  std::set<std::string> unique;
  std::map<std::string, std::set<std::string>> docs_per_cell_line;
  for (const auto& d : documents_) {
    s.total_entity_matches += d.mentions.size();
    for (const auto& m : d.mentions) {
      unique.insert(m.entity_id);
      const GraphNode* n = find_node(m.entity_id);
      if (n->category == Category::CellLine) docs_per_cell_line[m.entity_id].insert(d.doc_id);
    }
  }
  s.unique_entity_matches = unique.size();
  s.unique_cell_lines = docs_per_cell_line.size();
  if (!docs_per_cell_line.empty()) {
    std::size_t total = 0;
    for (const auto& [id, docs] : docs_per_cell_line) total += docs.size();
    s.abstracts_per_cell_line = static_cast<double>(total) / static_cast<double>(docs_per_cell_line.size());
  }
  std::size_t linked_cell_lines = 0;
  std::size_t partner_total = 0;
  for (const auto& n : nodes_) {
    if (n.category != Category::CellLine) continue;
    auto it = adjacency_.find(n.entity_id);
    if (it == adjacency_.end() || it->second.empty()) continue;
    ++linked_cell_lines;
    partner_total += it->second.size();
  }
  if (linked_cell_lines > 0) {
    s.linked_entities_per_cell_line =
        static_cast<double>(partner_total) / static_cast<double>(linked_cell_lines);
  }
  return s;
}

std::string render_marked(std::string_view text, std::span<const Mark> marks) {
  // Longer marks open first so that marks sharing a start nest. A mark that
  // ends while others are open inside it closes them and reopens them after.
  std::vector<Mark> sorted(marks.begin(), marks.end());
  std::sort(sorted.begin(), sorted.end(), [](const Mark& a, const Mark& b) {
    return std::tie(a.start, b.end, a.entity_id) < std::tie(b.start, a.end, b.entity_id);
  });
  auto open_tag = [](const Mark& m) {
    std::string tag = "<mark data-entity=\"";
    for (char c : m.entity_id) append_escaped(tag, c);
    return tag + "\">";
  };
  std::string out;
  std::vector<const Mark*> stack;
  std::size_t next = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    auto ends_here = [i](const Mark* m) { return m->end <= i; };
    if (std::any_of(stack.begin(), stack.end(), ends_here)) {
      std::vector<const Mark*> reopen;
      while (std::any_of(stack.begin(), stack.end(), ends_here)) {
        out += "</mark>";
        if (!ends_here(stack.back())) reopen.push_back(stack.back());
        stack.pop_back();
      }
      for (auto it = reopen.rbegin(); it != reopen.rend(); ++it) {
        out += open_tag(**it);
        stack.push_back(*it);
      }
    }
    for (; next < sorted.size() && sorted[next].start == i; ++next) {
      if (sorted[next].end <= i) continue;
      out += open_tag(sorted[next]);
      stack.push_back(&sorted[next]);
    }
    if (i < text.size()) append_escaped(out, text[i]);
  }
  return out;
}

std::string strip_markup(std::string_view marked) {
  std::string out;
  out.reserve(marked.size());
  for (std::size_t i = 0; i < marked.size();) {
    char c = marked[i];
    if (c == '<') {
      auto close = marked.find('>', i);
      i = close == std::string_view::npos ? marked.size() : close + 1;
      continue;
    }
    if (c == '&') {
      static constexpr std::pair<std::string_view, char> kEntities[] = {
          {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}};
      bool done = false;
      for (auto [name, ch] : kEntities) {
        if (marked.substr(i, name.size()) == name) {
          out += ch;
          i += name.size();
          done = true;
          break;
        }
      }
      if (done) continue;
    }
    out += c;
    ++i;
  }
  return out;
}

nlohmann::json to_json(const GraphStats& s) {
  return {{"number_of_abstracts", s.abstracts},
          {"total_entity_matches", s.total_entity_matches},
          {"unique_entity_matches", s.unique_entity_matches},
          {"unique_cell_lines", s.unique_cell_lines},
          {"abstracts_per_cell_line", s.abstracts_per_cell_line},
          {"linked_entities_per_cell_line", s.linked_entities_per_cell_line}};
}

nlohmann::json to_json(const GraphNode& n) {
  nlohmann::json j = {{"entity_id", n.entity_id},
                      {"category", to_string(n.category)},
                      {"canonical_name", n.canonical_name},
                      {"synonyms", n.synonyms}};
  if (n.genomic_location) j["location"] = to_json(*n.genomic_location);
  return j;
}

}  // namespace celllit
