#include "celllit/ontology.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include "celllit/corpus.hpp"
#include "celllit/error.hpp"

namespace celllit {

namespace {

struct CategoryName {
  Category category;
  std::string_view name;
  std::string_view prefix;
};

constexpr CategoryName kCategoryNames[] = {
    {Category::Gene, "Gene", "hgnc"},
    {Category::CellLine, "CellLine", "cellosaurus"},
    {Category::Disease, "Disease", "ncit"},
    {Category::Anatomy, "Anatomy", "uberon"},
    {Category::Cytoband, "Cytoband", "cytoband"},
};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

}  // namespace

std::string_view to_string(Category c) {
  for (const auto& n : kCategoryNames) {
    if (n.category == c) return n.name;
  }
  return "Unknown";
}

std::optional<Category> parse_category(std::string_view name) {
  for (const auto& n : kCategoryNames) {
    if (n.name == name) return n.category;
  }
  return std::nullopt;
}

std::optional<Category> category_from_id(std::string_view entity_id) {
  auto colon = entity_id.find(':');
  if (colon == std::string_view::npos || colon + 1 == entity_id.size()) return std::nullopt;
  std::string prefix = to_lower_ascii(entity_id.substr(0, colon));
  for (const auto& n : kCategoryNames) {
    if (n.prefix == prefix) return n.category;
  }
  return std::nullopt;
}

std::optional<Chromosome> Chromosome::parse(std::string_view label) {
  if (label.starts_with("chr")) label.remove_prefix(3);
  if (label == "X") return Chromosome(23);
  if (label == "Y") return Chromosome(24);
  if (label.empty() || label.size() > 2) return std::nullopt;
  int value = 0;
  for (char c : label) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
  }
  if (value < 1 || value > 22 || label[0] == '0') return std::nullopt;
  return Chromosome(value);
}

std::string Chromosome::label() const {
  if (ordinal_ == 23) return "X";
  if (ordinal_ == 24) return "Y";
  return std::to_string(ordinal_);
}

nlohmann::json to_json(const GenomicInterval& g) {
  return {{"chromosome", g.chromosome.label()}, {"start", g.start}, {"end", g.end}};
}

GenomicInterval interval_from_json(const nlohmann::json& j) {
  auto chrom = Chromosome::parse(j.at("chromosome").get<std::string>());
  if (!chrom) throw FormatError("invalid chromosome '" + j.at("chromosome").dump() + "'");
  GenomicInterval g{*chrom, j.at("start").get<std::int64_t>(), j.at("end").get<std::int64_t>()};
  if (!g.valid()) {
    throw FormatError("invalid interval " + std::to_string(g.start) + "-" + std::to_string(g.end));
  }
  return g;
}

nlohmann::json to_json(const OntologyEntity& e) {
  nlohmann::json j = {{"entity_id", e.entity_id},
                      {"category", to_string(e.category)},
                      {"canonical_name", e.canonical_name},
                      {"synonyms", e.synonyms},
                      {"parents", e.parents}};
  if (e.genomic_location) j["location"] = to_json(*e.genomic_location);
  return j;
}

OntologyEntity entity_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("record is not an object");
  OntologyEntity e;
  e.entity_id = j.at("entity_id").get<std::string>();
  auto cat = parse_category(j.at("category").get<std::string>());
  if (!cat) throw FormatError("unknown category '" + j.at("category").get<std::string>() + "'");
  e.category = *cat;
  e.canonical_name = j.at("canonical_name").get<std::string>();
  if (j.contains("synonyms")) e.synonyms = j["synonyms"].get<std::vector<std::string>>();
  if (j.contains("parents")) e.parents = j["parents"].get<std::vector<std::string>>();
  if (j.contains("location") && !j["location"].is_null()) {
    e.genomic_location = interval_from_json(j["location"]);
  }
  if (e.entity_id.empty() || e.canonical_name.empty()) {
    throw FormatError("entity_id and canonical_name must be non-empty");
  }
  auto implied = category_from_id(e.entity_id);
  if (!implied || *implied != e.category) {
    throw FormatError("entity '" + e.entity_id + "' has category " +
                      std::string(to_string(e.category)) + " inconsistent with its id prefix");
  }
  if (e.genomic_location && e.category != Category::Gene && e.category != Category::Cytoband) {
    throw FormatError("entity '" + e.entity_id + "' carries a location but is not a Gene or Cytoband");
  }
  return e;
}

std::vector<OntologyEntity> load_ontology_stream(std::istream& in, Category category,
                                                 std::string_view source) {
  std::vector<OntologyEntity> entities;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    OntologyEntity e;
    try {
      e = entity_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& ex) {
      throw FormatError(std::string(source) + ":" + std::to_string(line_no) + ": " + ex.what());
    } catch (const FormatError& ex) {
      throw FormatError(std::string(source) + ":" + std::to_string(line_no) + ": " + ex.what());
    }
    if (e.category != category) {
      throw FormatError(std::string(source) + ":" + std::to_string(line_no) + ": entity '" +
                        e.entity_id + "' is " + std::string(to_string(e.category)) +
                        ", expected " + std::string(to_string(category)));
    }
    entities.push_back(std::move(e));
  }
  validate_entities(entities);
  std::sort(entities.begin(), entities.end(),
            [](const auto& a, const auto& b) { return a.entity_id < b.entity_id; });
  return entities;
}

std::vector<OntologyEntity> load_ontology(const std::filesystem::path& path, Category category) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open ontology file " + path.string());
  return load_ontology_stream(in, category, path.string());
}

void validate_entities(std::span<const OntologyEntity> entities) {
  std::unordered_map<std::string_view, const OntologyEntity*> by_id;
  std::set<std::string> duplicates;
  for (const auto& e : entities) {
    if (!by_id.emplace(e.entity_id, &e).second) duplicates.insert(e.entity_id);
  }
  if (!duplicates.empty()) {
    throw OntologyError("duplicate entity_id: " +
                        join(std::vector<std::string>(duplicates.begin(), duplicates.end())));
  }
  std::vector<std::string> dangling;
  for (const auto& e : entities) {
    for (const auto& p : e.parents) {
      if (!by_id.contains(p)) dangling.push_back(e.entity_id + " -> " + p);
    }
  }
  if (!dangling.empty()) {
    std::sort(dangling.begin(), dangling.end());
    throw OntologyError("dangling parent reference(s): " + join(dangling));
  }

  // Iterative three-colour DFS over parent links.
  enum class Mark { White, Grey, Black };
  std::unordered_map<std::string_view, Mark> mark;
  for (const auto& e : entities) mark[e.entity_id] = Mark::White;
  for (const auto& root : entities) {
    if (mark[root.entity_id] != Mark::White) continue;
    std::vector<std::pair<const OntologyEntity*, std::size_t>> stack{{&root, 0}};
    mark[root.entity_id] = Mark::Grey;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next == node->parents.size()) {
        mark[node->entity_id] = Mark::Black;
        stack.pop_back();
        continue;
      }
      const std::string& parent = node->parents[next++];
      Mark& m = mark[parent];
      if (m == Mark::Grey) {
        throw OntologyError("parent cycle through '" + parent + "' (reached from '" +
                            node->entity_id + "')");
      }
      if (m == Mark::White) {
        m = Mark::Grey;
        stack.emplace_back(by_id.at(parent), 0);
      }
    }
  }
}

std::vector<OntologyEntity> merge_ontologies(std::vector<std::vector<OntologyEntity>> parts) {
  std::vector<OntologyEntity> all;
  for (auto& p : parts) {
    std::move(p.begin(), p.end(), std::back_inserter(all));
  }
  validate_entities(all);
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.entity_id < b.entity_id; });
  return all;
}

std::vector<HierarchyEdge> hierarchy_edges(std::span<const OntologyEntity> entities) {
  std::vector<HierarchyEdge> edges;
  for (const auto& e : entities) {
    for (const auto& p : e.parents) edges.push_back({p, e.entity_id});
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace celllit
