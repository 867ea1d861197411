#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "celllit/cnv.hpp"
#include "celllit/corpus.hpp"
#include "celllit/dictionary.hpp"
#include "celllit/matcher.hpp"
#include "celllit/ontology.hpp"
#include "celllit/scoring.hpp"
#include "json.hpp"

namespace celllit {

struct GraphNode {
  std::string entity_id;
  Category category = Category::Gene;
  std::string canonical_name;
  std::vector<std::string> synonyms;
  std::optional<GenomicInterval> genomic_location;

  bool operator==(const GraphNode&) const = default;
};

enum class EdgeKind { TextRelation, ParentOf };
std::string_view to_string(EdgeKind k);

// Flat edge view. For ParentOf, source is the parent.
struct GraphEdge {
  EdgeKind kind = EdgeKind::TextRelation;
  std::string source;
  std::string target;
  double corpus_score = 0.0;
  std::size_t evidence_count = 0;
  std::vector<std::string> predicates;

  auto operator<=>(const GraphEdge&) const = default;
};

// Character offsets into a stored document text.
struct Mark {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string entity_id;

  auto operator<=>(const Mark&) const = default;
};

struct StoredMention {
  std::string entity_id;
  TokenSpan token_span;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  FormKind form_kind = FormKind::RawExact;

  bool operator==(const StoredMention&) const = default;
};

// The slice of a Document the service needs to show evidence.
struct StoredDocument {
  std::string doc_id;
  std::string title;
  std::string text;
  std::vector<std::pair<std::size_t, std::size_t>> sentences;  // character ranges
  std::vector<StoredMention> mentions;

  bool operator==(const StoredDocument&) const = default;
};

struct EvidenceRecord {
  std::string doc_id;
  std::string title;
  double total = 0.0;
  double distance_score = 0.0;
  int triple_bonus = 0;
  bool has_triple = false;
  int sentence_index = -1;
  std::size_t sentence_start = 0;
  std::size_t sentence_end = 0;
  std::vector<Mark> sentence_marks;  // mentions of the two entities in the sentence
  std::string text;
  std::vector<Mark> text_marks;      // every mention in the document
};

struct RankedPartner {
  GraphNode partner;
  AggregatedRelation relation;
};

struct GraphStats {
  std::size_t abstracts = 0;
  std::size_t total_entity_matches = 0;
  std::size_t unique_entity_matches = 0;
  std::size_t unique_cell_lines = 0;
  double abstracts_per_cell_line = 0.0;
  double linked_entities_per_cell_line = 0.0;

  bool operator==(const GraphStats&) const = default;
};

struct ProfileMarker {
  std::string entity_id;
  std::string canonical_name;
  Category category = Category::Gene;
  GenomicInterval interval;
  double corpus_score = 0.0;

  bool operator==(const ProfileMarker&) const = default;
};

struct AnnotatedProfile {
  CnvProfile profile;
  std::vector<ProfileMarker> markers;
};

// Immutable entity graph: text-relation edges with evidence, ontology
// parent-of edges, and the documents that back the evidence.
class Graph {
 public:
  Graph() = default;

  // Nodes are created for every mentioned entity and every hierarchy
  // endpoint. Throws Error on references to entities, nodes or documents
  // that do not exist.
  static Graph build(const EntityDictionary& dict, std::span<const Document> documents,
                     std::span<const EntityMention> mentions,
                     std::span<const AggregatedRelation> relations,
                     std::span<const HierarchyEdge> hierarchy);

  // Assembles a graph from persisted parts and checks the same invariants.
  static Graph from_parts(std::vector<GraphNode> nodes, std::vector<AggregatedRelation> relations,
                          std::vector<HierarchyEdge> hierarchy,
                          std::vector<StoredDocument> documents);

  const std::vector<GraphNode>& nodes() const { return nodes_; }
  const std::vector<AggregatedRelation>& relations() const { return relations_; }
  const std::vector<HierarchyEdge>& hierarchy() const { return hierarchy_; }
  const std::vector<StoredDocument>& documents() const { return documents_; }

  // TextRelation edges sorted by (source, target), then ParentOf edges.
  std::vector<GraphEdge> edges() const;
  std::size_t edge_count() const { return relations_.size() + hierarchy_.size(); }

  const GraphNode* find_node(std::string_view entity_id) const;
  const StoredDocument* find_document(std::string_view doc_id) const;
  const AggregatedRelation* find_relation(std::string_view a, std::string_view b) const;

  std::vector<std::string> parents_of(std::string_view entity_id) const;
  std::vector<std::string> children_of(std::string_view entity_id) const;

  // Partners by corpus_score descending, ties by (category, entity_id).
  // Throws NotFoundError for unknown nodes.
  std::vector<RankedPartner> ranked_partners(std::string_view entity_id,
                                             std::optional<Category> category_filter,
                                             std::size_t limit) const;

  // Evidence records ordered like the relation's evidence (total descending).
  // Throws NotFoundError when no edge joins the two entities.
  std::vector<EvidenceRecord> evidence_for(std::string_view entity_id,
                                           std::string_view partner_id) const;

  // Top `top_k` Gene/Cytoband partners with coordinates, as profile markers.
  // Throws Error when the profile belongs to another cell line.
  AnnotatedProfile annotate_profile(const CnvProfile& profile, std::string_view cell_line_id,
                                    std::size_t top_k) const;

  GraphStats stats() const;

 private:
  void index();

  std::vector<GraphNode> nodes_;                  // sorted by entity_id
  std::vector<AggregatedRelation> relations_;     // sorted by (entity_a, entity_b)
  std::vector<HierarchyEdge> hierarchy_;          // sorted
  std::vector<StoredDocument> documents_;         // sorted by doc_id
  std::map<std::string, std::vector<std::size_t>, std::less<>> adjacency_;
};

// Inline markup for display: <mark data-entity="id">...</mark> with HTML
// escaping. strip_markup inverts it exactly.
std::string render_marked(std::string_view text, std::span<const Mark> marks);
std::string strip_markup(std::string_view marked);

inline constexpr int kGraphFormatVersion = 1;

// Writes nodes.jsonl, edges.jsonl, evidence.jsonl and documents.jsonl into
// `dir` with canonical ordering; each file opens with a header record.
void save_graph(const Graph& graph, const std::filesystem::path& dir);

// Throws CorruptionError on truncation, malformed records or an unsupported
// version. Never returns a partial graph.
Graph load_graph(const std::filesystem::path& dir);

nlohmann::json to_json(const GraphStats& s);
nlohmann::json to_json(const GraphNode& n);

}  // namespace celllit
