#include "celllit/service.hpp"

#include <charconv>
#include <optional>
#include <vector>

#include <spdlog/spdlog.h>

#include "celllit/error.hpp"
#include "httplib.h"

namespace celllit {
namespace {

struct BadRequest {
  std::string message;
};

std::size_t size_param(const QueryParams& q, std::string_view key, std::size_t fallback,
                       std::size_t max) {
  auto it = q.find(key);
  if (it == q.end() || it->second.empty()) return fallback;
  std::size_t v = 0;
  const auto& s = it->second;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw BadRequest{"parameter '" + std::string(key) + "' must be a non-negative integer"};
  }
  return std::min(v, max);
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    std::size_t j = path.find('/', i);
    if (j == std::string_view::npos) j = path.size();
    if (j > i) parts.push_back(path.substr(i, j - i));
    i = j;
  }
  return parts;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && to_lower_ascii(s.substr(0, prefix.size())) == prefix;
}

nlohmann::json marks_json(std::span<const Mark> marks) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& m : marks) {
    a.push_back({{"start", m.start}, {"end", m.end}, {"entity_id", m.entity_id}});
  }
  return a;
}

nlohmann::json partner_json(const RankedPartner& p) {
  const auto& r = p.relation;
  return {{"entity_id", p.partner.entity_id},
          {"canonical_name", p.partner.canonical_name},
          {"category", to_string(p.partner.category)},
          {"corpus_score", r.corpus_score},
          {"evidence_count", r.evidence.size()},
          {"predicates", r.predicates}};
}

}  // namespace

std::optional<std::string> percent_decode(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out += s[i];
      continue;
    }
    if (i + 2 >= s.size()) return std::nullopt;
    int v = 0;
    auto [p, ec] = std::from_chars(s.data() + i + 1, s.data() + i + 3, v, 16);
    if (ec != std::errc() || p != s.data() + i + 3) return std::nullopt;
    out += static_cast<char>(v);
    i += 2;
  }
  return out;
}

Response error_response(int status, std::string code, std::string message) {
  return {status, {{"error", {{"status", status}, {"code", std::move(code)},
                              {"message", std::move(message)}}}}};
}

Service::Service(std::shared_ptr<const Graph> graph, std::map<std::string, CnvProfile> profiles,
                 std::size_t default_top_k)
    : graph_(std::move(graph)), profiles_(std::move(profiles)), default_top_k_(default_top_k) {}

Response Service::handle(std::string_view method, std::string_view raw_path,
                         const QueryParams& query) const {
  if (method != "GET") return error_response(405, "method_not_allowed", "only GET is supported");
  std::vector<std::string> parts;
  for (auto seg : split_path(raw_path)) {
    auto decoded = percent_decode(seg);
    if (!decoded) return error_response(400, "bad_request", "malformed percent escape in path");
    parts.push_back(std::move(*decoded));
  }
  try {
    if (parts.size() < 2 || parts[0] != "api") {
      return error_response(404, "not_found", "no route for " + std::string(raw_path));
    }
    if (parts.size() == 2 && parts[1] == "stats") {
      return {200, to_json(graph_->stats())};
    }
    if (parts[1] != "celllines") {
      return error_response(404, "not_found", "no route for " + std::string(raw_path));
    }
    if (parts.size() == 2) return list_cell_lines(query);

    const GraphNode* node = graph_->find_node(parts[2]);
    if (node == nullptr || node->category != Category::CellLine) {
      return error_response(404, "cell_line_not_found", "unknown cell line '" + parts[2] + "'");
    }
    if (parts.size() == 3) return cell_line(*node, query);
    if (parts.size() == 4 && parts[3] == "profile") return profile(*node, query);
    if (parts.size() == 5 && parts[3] == "evidence") return evidence(*node, parts[4]);
    return error_response(404, "not_found", "no route for " + std::string(raw_path));
  } catch (const BadRequest& e) {
    return error_response(400, "bad_request", e.message);
  }
}

Response Service::list_cell_lines(const QueryParams& query) const {
  std::string q;
  if (auto it = query.find("q"); it != query.end()) q = to_lower_ascii(it->second);
  const std::size_t offset = size_param(query, "offset", 0, SIZE_MAX);
  const std::size_t limit = size_param(query, "limit", 20, 200);

  std::vector<const GraphNode*> hits;
  for (const auto& n : graph_->nodes()) {
    if (n.category != Category::CellLine) continue;
    bool match = q.empty() || starts_with_ci(n.canonical_name, q) || starts_with_ci(n.entity_id, q);
    for (const auto& s : n.synonyms) match = match || starts_with_ci(s, q);
    if (match) hits.push_back(&n);
  }
  nlohmann::json items = nlohmann::json::array();
  for (std::size_t i = offset; i < hits.size() && items.size() < limit; ++i) {
    const GraphNode& n = *hits[i];
    items.push_back({{"entity_id", n.entity_id},
                     {"canonical_name", n.canonical_name},
                     {"synonyms", n.synonyms},
                     {"partner_count", graph_->ranked_partners(n.entity_id, std::nullopt, SIZE_MAX).size()}});
  }
  return {200, {{"total", hits.size()}, {"offset", offset}, {"limit", limit}, {"items", items}}};
}

Response Service::cell_line(const GraphNode& node, const QueryParams& query) const {
  const std::size_t limit = size_param(query, "limit", 50, 1000);
  nlohmann::json groups = nlohmann::json::object();
  for (Category c : kAllCategories) {
    nlohmann::json group = nlohmann::json::array();
    for (const auto& p : graph_->ranked_partners(node.entity_id, c, limit)) {
      group.push_back(partner_json(p));
    }
    groups[std::string(to_string(c))] = std::move(group);
  }
  nlohmann::json body = to_json(node);
  body["parents"] = graph_->parents_of(node.entity_id);
  body["children"] = graph_->children_of(node.entity_id);
  body["partners"] = std::move(groups);
  body["has_profile"] = profiles_.contains(node.entity_id);
  return {200, std::move(body)};
}

Response Service::profile(const GraphNode& node, const QueryParams& query) const {
  auto it = profiles_.find(node.entity_id);
  if (it == profiles_.end()) {
    return error_response(404, "profile_not_found",
                          "no copy-number profile for '" + node.entity_id + "'");
  }
  const std::size_t top_k = size_param(query, "top_k", default_top_k_, 100);
  AnnotatedProfile ap = graph_->annotate_profile(it->second, node.entity_id, top_k);
  nlohmann::json body = to_json(ap.profile);
  nlohmann::json markers = nlohmann::json::array();
  for (const auto& m : ap.markers) {
    markers.push_back({{"entity_id", m.entity_id},
                       {"canonical_name", m.canonical_name},
                       {"category", to_string(m.category)},
                       {"location", to_json(m.interval)},
                       {"corpus_score", m.corpus_score}});
  }
  body["markers"] = std::move(markers);
  body["top_k"] = top_k;
  return {200, std::move(body)};
}

Response Service::evidence(const GraphNode& node, std::string_view partner_id) const {
  if (graph_->find_node(partner_id) == nullptr) {
    return error_response(404, "entity_not_found", "unknown entity '" + std::string(partner_id) + "'");
  }
  const AggregatedRelation* rel = graph_->find_relation(node.entity_id, partner_id);
  if (rel == nullptr) {
    return error_response(404, "relation_not_found",
                          "no relation between '" + node.entity_id + "' and '" +
                              std::string(partner_id) + "'");
  }
  nlohmann::json records = nlohmann::json::array();
  for (const auto& e : graph_->evidence_for(node.entity_id, partner_id)) {
    records.push_back({{"doc_id", e.doc_id},
                       {"title", e.title},
                       {"total", e.total},
                       {"distance_score", e.distance_score},
                       {"triple_bonus", e.triple_bonus},
                       {"has_triple", e.has_triple},
                       {"sentence",
                        {{"index", e.sentence_index},
                         {"start", e.sentence_start},
                         {"end", e.sentence_end},
                         {"marks", marks_json(e.sentence_marks)}}},
                       {"text", e.text},
                       {"marks", marks_json(e.text_marks)}});
  }
  return {200,
          {{"entity_id", node.entity_id},
           {"partner_id", std::string(partner_id)},
           {"corpus_score", rel->corpus_score},
           {"predicates", rel->predicates},
           {"evidence", std::move(records)}}};
}

void serve(const Service& service, const std::string& host, int port) {
  httplib::Server server;
  server.Get(".*", [&service](const httplib::Request& req, httplib::Response& res) {
    std::string_view target = req.target;
    target = target.substr(0, target.find('?'));
    QueryParams query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    Response r = service.handle("GET", target, query);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
    spdlog::info("GET {} -> {}", req.target, r.status);
  });
  spdlog::info("listening on {}:{}", host, port);
  if (!server.listen(host, port)) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
}

}  // namespace celllit
