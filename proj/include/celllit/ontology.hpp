#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace celllit {

enum class Category { Gene, CellLine, Disease, Anatomy, Cytoband };

inline constexpr Category kAllCategories[] = {Category::Gene, Category::CellLine,
                                              Category::Disease, Category::Anatomy,
                                              Category::Cytoband};

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view name);

// Category implied by an entity id's namespace prefix ("hgnc:", "cellosaurus:",
// "ncit:", "uberon:", "cytoband:"), compared case-insensitively.
std::optional<Category> category_from_id(std::string_view entity_id);

// Chromosomes are numbered 1..22, then X = 23, Y = 24.
class Chromosome {
 public:
  Chromosome() = default;
  static std::optional<Chromosome> parse(std::string_view label);
  int ordinal() const { return ordinal_; }
  std::string label() const;
  auto operator<=>(const Chromosome&) const = default;

 private:
  explicit Chromosome(int ordinal) : ordinal_(ordinal) {}
  int ordinal_ = 1;
};

struct GenomicInterval {
  Chromosome chromosome;
  std::int64_t start = 0;
  std::int64_t end = 0;

  bool valid() const { return 0 <= start && start < end; }
  bool overlaps(const GenomicInterval& o) const {
    return chromosome == o.chromosome && start < o.end && o.start < end;
  }
  auto operator<=>(const GenomicInterval&) const = default;
};

struct OntologyEntity {
  std::string entity_id;
  Category category = Category::Gene;
  std::string canonical_name;
  std::vector<std::string> synonyms;
  std::vector<std::string> parents;
  std::optional<GenomicInterval> genomic_location;

  bool operator==(const OntologyEntity&) const = default;
};

// Loads one ontology file (line-delimited JSON). Every record must belong to
// `category`, both by its `category` field and by its id prefix. Throws
// OntologyError on duplicates, dangling parents or cycles; FormatError on
// unparsable records. The result is sorted by entity_id.
std::vector<OntologyEntity> load_ontology(const std::filesystem::path& path, Category category);
std::vector<OntologyEntity> load_ontology_stream(std::istream& in, Category category,
                                                 std::string_view source = "<stream>");

// Checks id uniqueness, parent references and acyclicity over a combined set.
void validate_entities(std::span<const OntologyEntity> entities);

// Merges several loaded ontologies and validates the union.
std::vector<OntologyEntity> merge_ontologies(std::vector<std::vector<OntologyEntity>> parts);

struct HierarchyEdge {
  std::string parent_id;
  std::string child_id;
  auto operator<=>(const HierarchyEdge&) const = default;
};

// One parent-of edge per parent link, sorted. No transitive edges.
std::vector<HierarchyEdge> hierarchy_edges(std::span<const OntologyEntity> entities);

nlohmann::json to_json(const GenomicInterval& g);
GenomicInterval interval_from_json(const nlohmann::json& j);
nlohmann::json to_json(const OntologyEntity& e);
OntologyEntity entity_from_json(const nlohmann::json& j);

}  // namespace celllit
