#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "celllit/cnv.hpp"
#include "celllit/graph.hpp"
#include "json.hpp"

namespace celllit {

struct Response {
  int status = 200;
  nlohmann::json body;
};

using QueryParams = std::map<std::string, std::string, std::less<>>;

// Decodes %XX escapes. Returns nullopt on a malformed escape.
std::optional<std::string> percent_decode(std::string_view s);

// Read-only JSON API over a loaded graph.
//
//   GET /api/stats
//   GET /api/celllines?q=&offset=&limit=
//   GET /api/celllines/{id}
//   GET /api/celllines/{id}/profile?top_k=
//   GET /api/celllines/{id}/evidence/{partner_id}
//
// Errors carry {"error": {"status", "code", "message"}}.
class Service {
 public:
  Service(std::shared_ptr<const Graph> graph, std::map<std::string, CnvProfile> profiles,
          std::size_t default_top_k = 5);

  // `raw_path` is the undecoded request path without the query string.
  Response handle(std::string_view method, std::string_view raw_path,
                  const QueryParams& query) const;

 private:
  Response list_cell_lines(const QueryParams& query) const;
  Response cell_line(const GraphNode& node, const QueryParams& query) const;
  Response profile(const GraphNode& node, const QueryParams& query) const;
  Response evidence(const GraphNode& node, std::string_view partner_id) const;

  std::shared_ptr<const Graph> graph_;
  std::map<std::string, CnvProfile> profiles_;
  std::size_t default_top_k_;
};

Response error_response(int status, std::string code, std::string message);

// Blocks serving `service` until the process is stopped.
void serve(const Service& service, const std::string& host, int port);

}  // namespace celllit
