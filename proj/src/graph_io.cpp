#include <algorithm>
#include <fstream>
#include <sstream>

#include "celllit/error.hpp"
#include "celllit/graph.hpp"
#include "celllit/jsonl.hpp"

namespace celllit {
namespace {

constexpr const char* kFormatName = "celllit-graph";

nlohmann::json header(const char* kind, std::size_t records) {
  return {{"format", kFormatName}, {"kind", kind}, {"version", kGraphFormatVersion},
          {"records", records}};
}

void write_section(const std::filesystem::path& path, const char* kind,
                   std::vector<nlohmann::json> records) {
  records.insert(records.begin(), header(kind, records.size()));
  write_jsonl(path, records);
}

FormKind form_kind_from(const std::string& s) {
  for (FormKind k : kAllFormKinds) {
    if (to_string(k) == s) return k;
  }
  throw CorruptionError("unknown form kind '" + s + "'");
}

// Reads a section, verifying the header and record count.
std::vector<nlohmann::json> read_section(const std::filesystem::path& path, const char* kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorruptionError("missing graph file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string content = ss.str();
  if (content.empty() || content.back() != '\n') {
    throw CorruptionError(path.string() + ": truncated (no terminating newline)");
  }
  std::vector<nlohmann::json> records;
  std::istringstream lines(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    try {
      records.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw CorruptionError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  const nlohmann::json& h = records.front();
  if (!h.is_object() || h.value("format", "") != kFormatName || h.value("kind", "") != kind) {
    throw CorruptionError(path.string() + ": bad header");
  }
  if (h.value("version", -1) != kGraphFormatVersion) {
    throw CorruptionError(path.string() + ": unsupported version " + h.value("version", nlohmann::json()).dump() +
                          " (expected " + std::to_string(kGraphFormatVersion) + ")");
  }
  std::size_t expected = h.value("records", std::size_t{0});
  if (records.size() - 1 != expected) {
    throw CorruptionError(path.string() + ": expected " + std::to_string(expected) +
                          " records, found " + std::to_string(records.size() - 1));
  }
  records.erase(records.begin());
  return records;
}

}  // namespace

void save_graph(const Graph& graph, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  std::vector<nlohmann::json> nodes;
  for (const auto& n : graph.nodes()) nodes.push_back(to_json(n));

  std::vector<nlohmann::json> edges;
  std::vector<nlohmann::json> evidence;
  for (const auto& r : graph.relations()) {
    edges.push_back({{"kind", "TextRelation"},
                     {"source", r.entity_a},
                     {"target", r.entity_b},
                     {"corpus_score", r.corpus_score},
                     {"evidence_count", r.evidence.size()},
                     {"predicates", r.predicates}});
    for (const auto& e : r.evidence) {
      evidence.push_back({{"source", r.entity_a},
                          {"target", r.entity_b},
                          {"doc_id", e.doc_id},
                          {"total", e.total},
                          {"distance_score", e.distance_score},
                          {"triple_bonus", e.triple_bonus},
                          {"has_triple", e.has_triple},
                          {"sentence", e.sentence}});
    }
  }
  for (const auto& h : graph.hierarchy()) {
    edges.push_back({{"kind", "ParentOf"}, {"source", h.parent_id}, {"target", h.child_id}});
  }

  std::vector<nlohmann::json> documents;
  for (const auto& d : graph.documents()) {
    nlohmann::json mentions = nlohmann::json::array();
    for (const auto& m : d.mentions) {
      mentions.push_back({{"entity_id", m.entity_id},
                          {"start", m.char_start},
                          {"end", m.char_end},
                          {"token_span", {m.token_span.start, m.token_span.end}},
                          {"form_kind", to_string(m.form_kind)}});
    }
    documents.push_back({{"doc_id", d.doc_id},
                         {"title", d.title},
                         {"text", d.text},
                         {"sentences", d.sentences},
                         {"mentions", std::move(mentions)}});
  }

  write_section(dir / "nodes.jsonl", "nodes", std::move(nodes));
  write_section(dir / "edges.jsonl", "edges", std::move(edges));
  write_section(dir / "evidence.jsonl", "evidence", std::move(evidence));
  write_section(dir / "documents.jsonl", "documents", std::move(documents));
}

Graph load_graph(const std::filesystem::path& dir) {
  try {
    std::vector<GraphNode> nodes;
    for (const auto& j : read_section(dir / "nodes.jsonl", "nodes")) {
      GraphNode n;
      n.entity_id = j.at("entity_id").get<std::string>();
      auto cat = parse_category(j.at("category").get<std::string>());
      if (!cat) throw CorruptionError("unknown category for node " + n.entity_id);
      n.category = *cat;
      n.canonical_name = j.at("canonical_name").get<std::string>();
      n.synonyms = j.at("synonyms").get<std::vector<std::string>>();
      if (j.contains("location")) n.genomic_location = interval_from_json(j["location"]);
      nodes.push_back(std::move(n));
    }

    std::map<std::pair<std::string, std::string>, AggregatedRelation> relations;
    std::vector<HierarchyEdge> hierarchy;
    std::map<std::pair<std::string, std::string>, std::size_t> expected_evidence;
    for (const auto& j : read_section(dir / "edges.jsonl", "edges")) {
      std::string kind = j.at("kind").get<std::string>();
      std::string source = j.at("source").get<std::string>();
      std::string target = j.at("target").get<std::string>();
      if (kind == "ParentOf") {
        hierarchy.push_back({source, target});
      } else if (kind == "TextRelation") {
        AggregatedRelation r;
        r.entity_a = source;
        r.entity_b = target;
        r.corpus_score = j.at("corpus_score").get<double>();
        r.predicates = j.at("predicates").get<std::vector<std::string>>();
        expected_evidence[{source, target}] = j.at("evidence_count").get<std::size_t>();
        if (!relations.emplace(std::make_pair(source, target), std::move(r)).second) {
          throw CorruptionError("duplicate edge " + source + " / " + target);
        }
      } else {
        throw CorruptionError("unknown edge kind '" + kind + "'");
      }
    }
    for (const auto& j : read_section(dir / "evidence.jsonl", "evidence")) {
      auto key = std::make_pair(j.at("source").get<std::string>(), j.at("target").get<std::string>());
      auto it = relations.find(key);
      if (it == relations.end()) {
        throw CorruptionError("evidence for unknown edge " + key.first + " / " + key.second);
      }
      it->second.evidence.push_back({j.at("doc_id").get<std::string>(), j.at("total").get<double>(),
                                     j.at("sentence").get<int>(), j.at("has_triple").get<bool>(),
                                     j.at("distance_score").get<double>(),
                                     j.at("triple_bonus").get<int>()});
    }
    std::vector<AggregatedRelation> relation_list;
    for (auto& [key, r] : relations) {
      if (r.evidence.size() != expected_evidence[key]) {
        throw CorruptionError("evidence count mismatch for " + key.first + " / " + key.second);
      }
      relation_list.push_back(std::move(r));
    }

    std::vector<StoredDocument> documents;
    for (const auto& j : read_section(dir / "documents.jsonl", "documents")) {
      StoredDocument d;
      d.doc_id = j.at("doc_id").get<std::string>();
      d.title = j.at("title").get<std::string>();
      d.text = j.at("text").get<std::string>();
      d.sentences = j.at("sentences").get<std::vector<std::pair<std::size_t, std::size_t>>>();
      for (const auto& m : j.at("mentions")) {
        d.mentions.push_back({m.at("entity_id").get<std::string>(),
                              {m.at("token_span").at(0).get<int>(), m.at("token_span").at(1).get<int>()},
                              m.at("start").get<std::size_t>(),
                              m.at("end").get<std::size_t>(),
                              form_kind_from(m.at("form_kind").get<std::string>())});
      }
      documents.push_back(std::move(d));
    }
    return Graph::from_parts(std::move(nodes), std::move(relation_list), std::move(hierarchy),
                             std::move(documents));
  } catch (const CorruptionError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw CorruptionError("malformed graph record in " + dir.string() + ": " + e.what());
  } catch (const Error& e) {
    throw CorruptionError("inconsistent graph in " + dir.string() + ": " + e.what());
  }
}

}  // namespace celllit
