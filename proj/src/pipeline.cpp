#include "celllit/pipeline.hpp"

#include <atomic>
#include <thread>

#include <spdlog/spdlog.h>

#include "celllit/cnv.hpp"
#include "celllit/error.hpp"
#include "celllit/jsonl.hpp"

namespace celllit {
namespace {

template <typename F>
auto stage(const char* name, F&& f) {
  spdlog::debug("stage {}", name);
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace

void PipelineConfig::validate() const {
  auto require = [](const std::filesystem::path& p, const std::string& what) {
    if (p.empty()) throw ConfigError(what + " path is not set");
    if (!std::filesystem::exists(p)) throw ConfigError(what + " not found: " + p.string());
  };
  require(corpus, "corpus");
  if (ontologies.empty()) throw ConfigError("no ontology files configured");
  for (const auto& [cat, path] : ontologies) require(path, std::string(to_string(cat)) + " ontology");
  if (profiles) require(*profiles, "CNV profile");
  if (output_dir.empty()) throw ConfigError("output_dir is not set");
  if (top_k < 0) throw ConfigError("top_k must be >= 0");
  if (workers < 1) throw ConfigError("workers must be >= 1");
}

PipelineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base) {
  auto resolve = [&](const std::string& s) {
    std::filesystem::path p(s);
    return p.is_absolute() || base.empty() ? p : base / p;
  };
  PipelineConfig c;
  try {
    if (j.contains("corpus")) c.corpus = resolve(j["corpus"].get<std::string>());
    if (j.contains("ontologies")) {
      for (const auto& [name, path] : j["ontologies"].items()) {
        auto cat = parse_category(name);
        if (!cat) throw ConfigError("unknown ontology category '" + name + "'");
        c.ontologies.emplace_back(*cat, resolve(path.get<std::string>()));
      }
    }
    if (j.contains("profiles") && !j["profiles"].is_null()) {
      c.profiles = resolve(j["profiles"].get<std::string>());
    }
    if (j.contains("output_dir")) c.output_dir = resolve(j["output_dir"].get<std::string>());
    c.top_k = j.value("top_k", c.top_k);
    c.workers = j.value("workers", c.workers);
    c.log_level = j.value("log_level", c.log_level);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse config " + path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw ConfigError(e.what());
  }
  return config_from_json(j, path.parent_path());
}

EntityDictionary load_dictionary(
    const std::vector<std::pair<Category, std::filesystem::path>>& ontologies) {
  std::vector<std::vector<OntologyEntity>> parts;
  for (const auto& [cat, path] : ontologies) parts.push_back(load_ontology(path, cat));
  return build_dictionary(merge_ontologies(std::move(parts)));
}

std::vector<DocumentAnalysis> analyze_documents(std::span<const Document> documents,
                                                const EntityDictionary& dict, int workers) {
  std::vector<DocumentAnalysis> results(documents.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < documents.size(); i = next++) {
      const Document& doc = documents[i];
      DocumentAnalysis& a = results[i];
      a.mentions = match_document(doc, dict);
      TripleExtraction ex = extract_triples(doc, dict);
      a.triples = std::move(ex.triples);
      a.skipped_long_sentences = ex.skipped_long_sentences;
      a.scores = score_document(doc, a.mentions, a.triples);
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(documents.size())));
  if (n == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
  }
  return results;
}

nlohmann::json PipelineSummary::to_json() const {
  return {{"stats", celllit::to_json(stats)},
          {"documents", documents},
          {"skipped_records", skipped_records},
          {"skipped_long_sentences", skipped_long_sentences},
          {"triples", triples},
          {"linked_triples", linked_triples},
          {"pair_scores", pair_scores},
          {"relations", relations},
          {"parent_edges", parent_edges},
          {"nodes", nodes},
          {"warnings", warnings}};
}

PipelineSummary run_pipeline(const PipelineConfig& config) {
  config.validate();
  const std::filesystem::path out = config.output_dir;
  std::filesystem::path staging = out;
  staging += ".staging";
  std::filesystem::remove_all(staging);
  try {
    PipelineSummary summary;
    CorpusLoad corpus = stage("ingest", [&] { return ingest_corpus(config.corpus); });
    for (const auto& s : corpus.skipped) {
      summary.warnings.push_back("corpus line " + std::to_string(s.line) + " skipped: " + s.reason);
    }
    summary.warnings.insert(summary.warnings.end(), corpus.warnings.begin(), corpus.warnings.end());
    summary.documents = corpus.documents.size();
    summary.skipped_records = corpus.skipped.size();
    spdlog::info("ingested {} documents ({} skipped)", summary.documents, summary.skipped_records);

    EntityDictionary dict = stage("dictionary", [&] { return load_dictionary(config.ontologies); });
    spdlog::info("dictionary: {} entities, {} forms", dict.entities().size(), dict.form_count());
    if (config.profiles) stage("profiles", [&] { return load_profiles(*config.profiles); });

    auto analyses = stage("analyze", [&] {
      return analyze_documents(corpus.documents, dict, config.workers);
    });

    std::vector<EntityMention> mentions;
    std::vector<Triple> triples;
    std::vector<PairScore> scores;
    for (auto& a : analyses) {
      summary.skipped_long_sentences += static_cast<std::size_t>(a.skipped_long_sentences);
      std::move(a.mentions.begin(), a.mentions.end(), std::back_inserter(mentions));
      std::move(a.triples.begin(), a.triples.end(), std::back_inserter(triples));
      std::move(a.scores.begin(), a.scores.end(), std::back_inserter(scores));
    }
    summary.triples = triples.size();
    summary.linked_triples = static_cast<std::size_t>(
        std::count_if(triples.begin(), triples.end(), [](const Triple& t) { return t.linked(); }));
    summary.pair_scores = scores.size();

    auto relations = stage("aggregate", [&] { return aggregate(scores); });
    auto hierarchy = hierarchy_edges(dict.entities());
    Graph graph = stage("graph", [&] {
      return Graph::build(dict, corpus.documents, mentions, relations, hierarchy);
    });
    summary.relations = graph.relations().size();
    summary.parent_edges = graph.hierarchy().size();
    summary.nodes = graph.nodes().size();
    summary.stats = graph.stats();

    stage("persist", [&] {
      std::filesystem::create_directories(staging);
      save_graph(graph, staging / "graph");
      std::vector<nlohmann::json> records;
      for (const auto& m : mentions) records.push_back(to_json(m));
      write_jsonl(staging / "mentions.jsonl", records);
      records.clear();
      for (const auto& t : triples) records.push_back(to_json(t));
      write_jsonl(staging / "triples.jsonl", records);
      records.clear();
      for (const auto& s : scores) records.push_back(to_json(s));
      write_jsonl(staging / "scores.jsonl", records);
      records.clear();
      for (const auto& r : relations) records.push_back(to_json(r));
      write_jsonl(staging / "aggregates.jsonl", records);
      write_file(staging / "summary.json", summary.to_json().dump(2) + "\n");
      std::filesystem::remove_all(out);
      std::filesystem::rename(staging, out);
      return 0;
    });
    return summary;
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove_all(staging, ec);
    throw;
  }
}

}  // namespace celllit
