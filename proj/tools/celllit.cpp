#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "celllit/cnv.hpp"
#include "celllit/error.hpp"
#include "celllit/eval.hpp"
#include "celllit/graph.hpp"
#include "celllit/jsonl.hpp"
#include "celllit/pipeline.hpp"
#include "celllit/service.hpp"

namespace {

using celllit::PipelineConfig;

// Options shared by subcommands that need a corpus and/or ontologies.
struct InputOptions {
  std::string config;
  std::string corpus;
  std::vector<std::string> ontologies;  // CATEGORY=PATH
  std::string output;
  int workers = 0;

  void add_config(CLI::App* app) {
    app->add_option("-c,--config", config, "JSON pipeline config")->check(CLI::ExistingFile);
  }
  void add_corpus(CLI::App* app) {
    app->add_option("--corpus", corpus, "Corpus JSONL (overrides config)");
  }
  void add_ontologies(CLI::App* app) {
    app->add_option("--ontology", ontologies, "CATEGORY=PATH, repeatable (overrides config)");
  }

  PipelineConfig resolve() const {
    PipelineConfig c = config.empty() ? PipelineConfig{} : celllit::load_config(config);
    if (!corpus.empty()) c.corpus = corpus;
    if (!ontologies.empty()) {
      c.ontologies.clear();
      for (const auto& spec : ontologies) {
        auto eq = spec.find('=');
        auto cat = eq == std::string::npos ? std::nullopt
                                           : celllit::parse_category(spec.substr(0, eq));
        if (!cat) throw celllit::ConfigError("--ontology expects CATEGORY=PATH, got '" + spec + "'");
        c.ontologies.emplace_back(*cat, spec.substr(eq + 1));
      }
    }
    if (workers > 0) c.workers = workers;
    return c;
  }
};

celllit::CorpusLoad load_corpus(const PipelineConfig& c) {
  if (c.corpus.empty()) throw celllit::ConfigError("no corpus given (use --corpus or --config)");
  if (!std::filesystem::exists(c.corpus)) throw celllit::ConfigError("corpus not found: " + c.corpus.string());
  auto load = celllit::ingest_corpus(c.corpus);
  for (const auto& s : load.skipped) spdlog::warn("line {} skipped: {}", s.line, s.reason);
  for (const auto& w : load.warnings) spdlog::warn("{}", w);
  return load;
}

celllit::EntityDictionary load_dict(const PipelineConfig& c) {
  if (c.ontologies.empty()) throw celllit::ConfigError("no ontologies given (use --ontology or --config)");
  for (const auto& [cat, path] : c.ontologies) {
    if (!std::filesystem::exists(path)) throw celllit::ConfigError("ontology not found: " + path.string());
  }
  return celllit::load_dictionary(c.ontologies);
}

void emit(const std::vector<nlohmann::json>& records, const std::string& out) {
  if (out.empty()) {
    for (const auto& r : records) std::cout << r.dump() << '\n';
  } else {
    celllit::write_jsonl(out, records);
    spdlog::info("wrote {} records to {}", records.size(), out);
  }
}

std::pair<std::string, int> bind_address(std::string host, int port) {
  if (const char* env = std::getenv("CELLLIT_BIND"); env != nullptr && *env != '\0') {
    std::string s(env);
    auto colon = s.rfind(':');
    if (colon == std::string::npos) throw celllit::ConfigError("CELLLIT_BIND must be HOST:PORT");
    host = s.substr(0, colon);
    try {
      port = std::stoi(s.substr(colon + 1));
    } catch (const std::exception&) {
      throw celllit::ConfigError("CELLLIT_BIND has an invalid port");
    }
  }
  return {host, port};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"celllit: cell line literature mining"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  auto stderr_logger = spdlog::stderr_color_mt("celllit");
  spdlog::set_default_logger(stderr_logger);

  // ingest
  InputOptions ingest_opts;
  auto* ingest = app.add_subcommand("ingest", "Parse and tokenize a corpus");
  ingest_opts.add_config(ingest);
  ingest_opts.add_corpus(ingest);
  ingest->add_option("-o,--output", ingest_opts.output, "Write tokenized documents as JSONL");

  // dict
  InputOptions dict_opts;
  auto* dict = app.add_subcommand("dict", "Build the entity dictionary");
  dict->require_subcommand(1);
  dict->fallthrough();
  dict_opts.add_config(dict);
  dict_opts.add_ontologies(dict);
  auto* dict_stats = dict->add_subcommand("stats", "Entity and form counts per category");
  auto* dict_dump = dict->add_subcommand("dump", "Print every dictionary form");

  // extract
  InputOptions extract_opts;
  auto* extract = app.add_subcommand("extract", "Entity mentions or triples per document");
  extract->require_subcommand(1);
  extract->fallthrough();
  extract_opts.add_config(extract);
  extract_opts.add_corpus(extract);
  extract_opts.add_ontologies(extract);
  extract->add_option("-o,--output", extract_opts.output, "Output JSONL (default stdout)");
  auto* extract_mentions = extract->add_subcommand("mentions", "Dictionary matches");
  auto* extract_triples = extract->add_subcommand("triples", "Subject-predicate-object triples");

  // score
  InputOptions score_opts;
  std::string score_aggregate;
  auto* score = app.add_subcommand("score", "Per-document pair scores");
  score_opts.add_config(score);
  score_opts.add_corpus(score);
  score_opts.add_ontologies(score);
  score->add_option("-o,--output", score_opts.output, "Pair score JSONL (default stdout)");
  score->add_option("--aggregate", score_aggregate, "Also write corpus-level relations here");
  score->add_option("-j,--workers", score_opts.workers, "Worker threads");

  // graph
  std::string graph_dir;
  auto* graph = app.add_subcommand("graph", "Inspect a persisted graph");
  graph->require_subcommand(1);
  auto* graph_stats = graph->add_subcommand("stats", "Corpus and graph statistics");
  graph_stats->add_option("graph_dir", graph_dir, "Graph directory")->required();

  // eval
  InputOptions eval_opts;
  std::string gold_path, gold_format = "jsonl", id_map_path;
  bool eval_json = false;
  auto* eval = app.add_subcommand("eval", "Evaluate against a gold standard");
  eval_opts.add_config(eval);
  eval_opts.add_ontologies(eval);
  eval->add_option("--gold", gold_path, "Gold annotations")->required()->check(CLI::ExistingFile);
  eval->add_option("--format", gold_format, "jsonl|pubtator")
      ->check(CLI::IsMember({"jsonl", "pubtator"}));
  eval->add_option("--id-map", id_map_path, "JSON object mapping gold ids to ontology ids")
      ->check(CLI::ExistingFile);
  eval->add_flag("--json", eval_json, "Print the report as JSON");

  // run
  InputOptions run_opts;
  std::string run_profiles, run_out;
  int run_top_k = -1;
  auto* run = app.add_subcommand("run", "Full pipeline: corpus to persisted graph");
  run_opts.add_config(run);
  run_opts.add_corpus(run);
  run_opts.add_ontologies(run);
  run->add_option("--profiles", run_profiles, "CNV profile JSONL");
  run->add_option("-o,--output-dir", run_out, "Output directory");
  run->add_option("--top-k", run_top_k, "Markers per profile");
  run->add_option("-j,--workers", run_opts.workers, "Worker threads");

  // serve
  std::string serve_graph, serve_profiles, serve_host = "127.0.0.1";
  int serve_port = 8080, serve_top_k = 5;
  auto* serve = app.add_subcommand("serve", "Serve the JSON API (CELLLIT_BIND=HOST:PORT overrides)");
  serve->add_option("graph_dir", serve_graph, "Graph directory")->required();
  serve->add_option("--profiles", serve_profiles, "CNV profile JSONL")->check(CLI::ExistingFile);
  serve->add_option("--host", serve_host, "Bind host");
  serve->add_option("--port", serve_port, "Bind port");
  serve->add_option("--top-k", serve_top_k, "Default markers per profile");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*ingest) {
      auto load = load_corpus(ingest_opts.resolve());
      std::size_t tokens = 0, sentences = 0;
      for (const auto& d : load.documents) {
        tokens += d.tokens().size();
        sentences += d.sentences().size();
      }
      if (!ingest_opts.output.empty()) {
        std::vector<nlohmann::json> records;
        for (const auto& d : load.documents) records.push_back(celllit::to_json(d));
        emit(records, ingest_opts.output);
      }
      nlohmann::json summary = {{"documents", load.documents.size()},
                                {"skipped", load.skipped.size()},
                                {"tokens", tokens},
                                {"sentences", sentences},
                                {"warnings", load.warnings}};
      std::cout << summary.dump(2) << '\n';
    } else if (*dict) {
      auto d = load_dict(dict_opts.resolve());
      if (*dict_stats) {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [cat, s] : d.stats()) {
          j[std::string(celllit::to_string(cat))] = {{"entities", s.entities}, {"forms", s.forms}};
        }
        std::cout << j.dump(2) << '\n';
      } else if (*dict_dump) {
        std::cout << d.serialize();
      }
    } else if (*extract) {
      auto config = extract_opts.resolve();
      auto load = load_corpus(config);
      auto d = load_dict(config);
      std::vector<nlohmann::json> records;
      std::size_t skipped_long = 0;
      for (const auto& doc : load.documents) {
        if (*extract_mentions) {
          for (const auto& m : celllit::match_document(doc, d)) records.push_back(celllit::to_json(m));
        } else if (*extract_triples) {
          auto ex = celllit::extract_triples(doc, d);
          skipped_long += static_cast<std::size_t>(ex.skipped_long_sentences);
          for (const auto& t : ex.triples) records.push_back(celllit::to_json(t));
        }
      }
      if (skipped_long > 0) spdlog::warn("{} over-long sentences skipped", skipped_long);
      emit(records, extract_opts.output);
    } else if (*score) {
      auto config = score_opts.resolve();
      auto load = load_corpus(config);
      auto d = load_dict(config);
      std::vector<celllit::PairScore> scores;
      for (auto& a : celllit::analyze_documents(load.documents, d, config.workers)) {
        std::move(a.scores.begin(), a.scores.end(), std::back_inserter(scores));
      }
      std::vector<nlohmann::json> records;
      for (const auto& s : scores) records.push_back(celllit::to_json(s));
      emit(records, score_opts.output);
      if (!score_aggregate.empty()) {
        records.clear();
        for (const auto& r : celllit::aggregate(scores)) records.push_back(celllit::to_json(r));
        emit(records, score_aggregate);
      }
    } else if (*graph) {
      auto g = celllit::load_graph(graph_dir);
      nlohmann::json j = celllit::to_json(g.stats());
      j["nodes"] = g.nodes().size();
      j["text_relation_edges"] = g.relations().size();
      j["parent_of_edges"] = g.hierarchy().size();
      std::cout << j.dump(2) << '\n';
    } else if (*eval) {
      auto d = load_dict(eval_opts.resolve());
      celllit::GoldLoad gold;
      if (gold_format == "pubtator") {
        std::ifstream in(gold_path);
        gold = celllit::load_pubtator_stream(in);
      } else {
        gold = celllit::load_gold(gold_path);
      }
      for (const auto& e : gold.errors) spdlog::warn("{}", e);
      std::map<std::string, std::string> id_map;
      if (!id_map_path.empty()) {
        id_map = nlohmann::json::parse(celllit::read_file(id_map_path))
                     .get<std::map<std::string, std::string>>();
      }
      std::size_t excluded = celllit::map_gold_ids(gold.documents, d, id_map);
      auto report = celllit::evaluate_pipeline(gold.documents, d, excluded);
      for (const auto& w : report.warnings) spdlog::warn("{}", w);
      if (eval_json) {
        std::cout << report.to_json().dump(2) << '\n';
      } else {
        std::cout << report.table();
      }
    } else if (*run) {
      auto config = run_opts.resolve();
      if (!run_profiles.empty()) config.profiles = run_profiles;
      if (!run_out.empty()) config.output_dir = run_out;
      if (run_top_k >= 0) config.top_k = run_top_k;
      if (log_level == "info" && !run_opts.config.empty()) {
        spdlog::set_level(spdlog::level::from_str(config.log_level));
      }
      auto summary = celllit::run_pipeline(config);
      for (const auto& w : summary.warnings) spdlog::warn("{}", w);
      std::cout << summary.to_json().dump(2) << '\n';
    } else if (*serve) {
      auto g = std::make_shared<const celllit::Graph>(celllit::load_graph(serve_graph));
      std::map<std::string, celllit::CnvProfile> profiles;
      if (!serve_profiles.empty()) profiles = celllit::load_profiles(serve_profiles);
      celllit::Service service(g, std::move(profiles), static_cast<std::size_t>(serve_top_k));
      auto [host, port] = bind_address(serve_host, serve_port);
      celllit::serve(service, host, port);
    }
  } catch (const celllit::ConfigError& e) {
    spdlog::error("configuration: {}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
