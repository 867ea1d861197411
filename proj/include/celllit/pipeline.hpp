#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "celllit/corpus.hpp"
#include "celllit/dictionary.hpp"
#include "celllit/graph.hpp"
#include "celllit/matcher.hpp"
#include "celllit/scoring.hpp"
#include "celllit/triples.hpp"
#include "json.hpp"

namespace celllit {

struct PipelineConfig {
  std::filesystem::path corpus;
  std::vector<std::pair<Category, std::filesystem::path>> ontologies;
  std::optional<std::filesystem::path> profiles;
  std::filesystem::path output_dir;
  int top_k = 5;
  int workers = 1;
  std::string log_level = "info";

  // Throws ConfigError when a referenced path is missing or a value is out
  // of range.
  void validate() const;
};

// JSON config file:
//   {"corpus": ..., "ontologies": {"Gene": ..., "CellLine": ...},
//    "profiles": ..., "output_dir": ..., "top_k": 5, "workers": 1,
//    "log_level": "info"}
// Relative paths are resolved against the config file's directory.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base = {});

struct DocumentAnalysis {
  std::vector<EntityMention> mentions;
  std::vector<Triple> triples;
  std::vector<PairScore> scores;
  int skipped_long_sentences = 0;
};

// Match, extract and score every document. Work is spread over `workers`
// threads; results keep document order.
std::vector<DocumentAnalysis> analyze_documents(std::span<const Document> documents,
                                                const EntityDictionary& dict, int workers);

EntityDictionary load_dictionary(
    const std::vector<std::pair<Category, std::filesystem::path>>& ontologies);

struct PipelineSummary {
  GraphStats stats;
  std::size_t documents = 0;
  std::size_t skipped_records = 0;
  std::size_t skipped_long_sentences = 0;
  std::size_t triples = 0;
  std::size_t linked_triples = 0;
  std::size_t pair_scores = 0;
  std::size_t relations = 0;
  std::size_t parent_edges = 0;
  std::size_t nodes = 0;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

// ingest -> dictionary -> match -> triples -> score -> aggregate -> graph ->
// persist. Outputs are staged in a sibling directory and moved into
// `output_dir` only on success; a failing stage throws StageError.
PipelineSummary run_pipeline(const PipelineConfig& config);

}  // namespace celllit
