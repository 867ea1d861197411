#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "celllit/cnv.hpp"
#include "celllit/graph.hpp"
#include "celllit/pipeline.hpp"
#include "celllit/service.hpp"
#include "httplib.h"
#include "test_support.hpp"

namespace celllit {
namespace {

constexpr const char* kHela = "cellosaurus:CVCL_0030";
constexpr const char* kDetroit = "cellosaurus:CVCL_1171";
constexpr const char* kEgfr = "hgnc:3236";

class ServiceTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("service");
    PipelineConfig c = load_config(testing::data_dir() / "demo" / "config.json");
    c.output_dir = dir_->path() / "out";
    run_pipeline(c);
    graph_ = std::make_shared<const Graph>(load_graph(c.output_dir / "graph"));
    service_ = new Service(graph_, load_profiles(*c.profiles), 5);
  }
  static void TearDownTestSuite() {
    delete service_;
    graph_.reset();
    delete dir_;
  }

  static Response get(std::string_view path, QueryParams q = {}) {
    return service_->handle("GET", path, q);
  }

  static inline testing::TempDir* dir_ = nullptr;
  static inline std::shared_ptr<const Graph> graph_;
  static inline Service* service_ = nullptr;
};

void expect_error(const Response& r, int status, const std::string& code) {
  EXPECT_EQ(r.status, status);
  ASSERT_TRUE(r.body.contains("error")) << r.body.dump();
  EXPECT_EQ(r.body["error"]["status"], status);
  EXPECT_EQ(r.body["error"]["code"], code);
  EXPECT_FALSE(r.body["error"]["message"].get<std::string>().empty());
}

TEST(PercentDecode, HandlesEscapes) {
  EXPECT_EQ(percent_decode("cellosaurus%3ACVCL_0030"), "cellosaurus:CVCL_0030");
  EXPECT_EQ(percent_decode("a%20b"), "a b");
  EXPECT_EQ(percent_decode("plain"), "plain");
  EXPECT_EQ(percent_decode("%zz"), std::nullopt);
  EXPECT_EQ(percent_decode("abc%2"), std::nullopt);
}

TEST_F(ServiceTest, StatsMatchGraph) {
  Response r = get("/api/stats");
  ASSERT_EQ(r.status, 200);
  GraphStats s = graph_->stats();
  EXPECT_EQ(r.body["number_of_abstracts"], s.abstracts);
  EXPECT_EQ(r.body["unique_cell_lines"], 10);
  EXPECT_DOUBLE_EQ(r.body["abstracts_per_cell_line"].get<double>(), s.abstracts_per_cell_line);
}

TEST_F(ServiceTest, SearchByPrefixIsCaseInsensitive) {
  Response r = get("/api/celllines", {{"q", "det"}});
  ASSERT_EQ(r.status, 200);
  ASSERT_EQ(r.body["total"], 1);
  EXPECT_EQ(r.body["items"][0]["entity_id"], kDetroit);
  EXPECT_EQ(r.body["items"][0]["canonical_name"], "Detroit 562");

  r = get("/api/celllines", {{"q", "HELA"}});
  EXPECT_EQ(r.body["total"], 4);
  r = get("/api/celllines", {{"q", "mcf7"}});
  ASSERT_EQ(r.body["total"], 1);
  EXPECT_EQ(r.body["items"][0]["canonical_name"], "MCF-7");
  r = get("/api/celllines", {{"q", "zzz"}});
  EXPECT_EQ(r.body["total"], 0);
  EXPECT_TRUE(r.body["items"].empty());
}

TEST_F(ServiceTest, SearchPaginates) {
  Response all = get("/api/celllines");
  ASSERT_EQ(all.body["total"], 10);
  ASSERT_EQ(all.body["items"].size(), 10u);
  Response page = get("/api/celllines", {{"offset", "3"}, {"limit", "4"}});
  ASSERT_EQ(page.body["items"].size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(page.body["items"][i], all.body["items"][i + 3]);
  Response tail = get("/api/celllines", {{"offset", "9"}, {"limit", "4"}});
  EXPECT_EQ(tail.body["items"].size(), 1u);
  Response past = get("/api/celllines", {{"offset", "50"}});
  EXPECT_TRUE(past.body["items"].empty());
  EXPECT_EQ(get("/api/celllines", {{"limit", "100000"}}).body["limit"], 200);
}

TEST_F(ServiceTest, CellLineGroupsPartnersByCategory) {
  Response r = get(std::string("/api/celllines/") + kHela);
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["canonical_name"], "HeLa");
  EXPECT_TRUE(r.body["has_profile"].get<bool>());
  EXPECT_EQ(r.body["children"].size(), 3u);
  EXPECT_TRUE(r.body["parents"].empty());

  const auto& genes = r.body["partners"]["Gene"];
  std::vector<std::string> ids;
  std::vector<double> scores;
  for (const auto& g : genes) {
    ids.push_back(g["entity_id"]);
    scores.push_back(g["corpus_score"]);
  }
  EXPECT_EQ(ids, (std::vector<std::string>{"hgnc:11998", "hgnc:1787", kEgfr, "hgnc:6407"}));
  EXPECT_TRUE(std::is_sorted(scores.rbegin(), scores.rend()));
  EXPECT_DOUBLE_EQ(scores[2], 1.5);
  EXPECT_DOUBLE_EQ(scores[3], 0.5);
  EXPECT_EQ(r.body["partners"]["CellLine"].size(), 3u);
  EXPECT_EQ(r.body["partners"]["Disease"].size(), 1u);
  for (const auto& g : genes) EXPECT_EQ(g["category"], "Gene");
}

TEST_F(ServiceTest, ChildLinksToParent) {
  Response r = get("/api/celllines/cellosaurus:CVCL_0058");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["parents"], nlohmann::json::array({kHela}));
}

TEST_F(ServiceTest, ProfileCarriesTopMarkers) {
  Response r = get(std::string("/api/celllines/") + kDetroit + "/profile");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["sample_count"], 5);
  EXPECT_EQ(r.body["top_k"], 5);
  ASSERT_EQ(r.body["markers"].size(), 5u);
  std::set<std::string> names;
  double prev = 1e300;
  for (const auto& m : r.body["markers"]) {
    names.insert(m["canonical_name"]);
    EXPECT_TRUE(m["location"].contains("chromosome"));
    EXPECT_LE(m["corpus_score"].get<double>(), prev);
    prev = m["corpus_score"];
  }
  EXPECT_EQ(names, (std::set<std::string>{"AURKA", "WEE1", "MYC", "TP53", "NGF"}));

  r = get(std::string("/api/celllines/") + kDetroit + "/profile", {{"top_k", "2"}});
  EXPECT_EQ(r.body["markers"].size(), 2u);
}

TEST_F(ServiceTest, EvidenceHasMarkedSentences) {
  Response r = get(std::string("/api/celllines/") + kHela + "/evidence/" + kEgfr);
  ASSERT_EQ(r.status, 200);
  EXPECT_DOUBLE_EQ(r.body["corpus_score"].get<double>(), 1.5);
  ASSERT_EQ(r.body["evidence"].size(), 1u);
  const auto& e = r.body["evidence"][0];
  EXPECT_EQ(e["doc_id"], "10000002");
  EXPECT_TRUE(e["has_triple"].get<bool>());
  EXPECT_EQ(e["triple_bonus"], 1);
  const std::string text = e["text"];
  std::set<std::string> marked;
  for (const auto& m : e["sentence"]["marks"]) {
    marked.insert(text.substr(m["start"].get<std::size_t>(),
                              m["end"].get<std::size_t>() - m["start"].get<std::size_t>()));
  }
  EXPECT_EQ(marked, (std::set<std::string>{"HeLa", "EGFR"}));
}

TEST_F(ServiceTest, PercentEncodedIdsResolve) {
  Response r = get("/api/celllines/cellosaurus%3ACVCL_0030/evidence/hgnc%3A3236");
  EXPECT_EQ(r.status, 200);
}

TEST_F(ServiceTest, ErrorPayloads) {
  expect_error(get("/api/celllines/cellosaurus:CVCL_9999"), 404, "cell_line_not_found");
  expect_error(get(std::string("/api/celllines/") + kEgfr), 404, "cell_line_not_found");
  expect_error(get("/api/celllines/cellosaurus:CVCL_0023/profile"), 404, "profile_not_found");
  expect_error(get(std::string("/api/celllines/") + kHela + "/evidence/hgnc:0"), 404,
               "entity_not_found");
  expect_error(get(std::string("/api/celllines/") + kHela + "/evidence/hgnc:7808"), 404,
               "relation_not_found");
  expect_error(get("/api/nothing"), 404, "not_found");
  expect_error(get("/"), 404, "not_found");
  expect_error(get("/api/celllines", {{"limit", "-1"}}), 400, "bad_request");
  expect_error(get("/api/celllines", {{"offset", "ten"}}), 400, "bad_request");
  expect_error(get("/api/celllines/%G1"), 400, "bad_request");
  expect_error(service_->handle("POST", "/api/stats", {}), 405, "method_not_allowed");
}

TEST_F(ServiceTest, HttpRoundTrip) {
  std::mt19937 rng(std::random_device{}());
  const int port = 20000 + static_cast<int>(rng() % 30000);
  const std::string port_s = std::to_string(port);
  const std::string graph_dir = (dir_->path() / "out" / "graph").string();
  const std::string profiles = (testing::data_dir() / "demo" / "profiles.jsonl").string();

  pid_t pid = fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    unsetenv("CELLLIT_BIND");
    execl(CELLLIT_CLI, CELLLIT_CLI, "--log-level", "off", "serve", graph_dir.c_str(),
          "--profiles", profiles.c_str(), "--port", port_s.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }

  httplib::Client client("127.0.0.1", port);
  httplib::Result res;
  for (int i = 0; i < 100 && !res; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    res = client.Get("/api/celllines?q=Det");
  }
  ASSERT_TRUE(res) << "server did not come up";
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Content-Type"), "application/json");
  auto body = nlohmann::json::parse(res->body);
  ASSERT_EQ(body["total"], 1);
  EXPECT_EQ(body["items"][0]["entity_id"], kDetroit);

  auto missing = client.Get("/api/celllines/cellosaurus%3ACVCL_9999");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(nlohmann::json::parse(missing->body)["error"]["code"], "cell_line_not_found");

  auto ev = client.Get("/api/celllines/cellosaurus%3ACVCL_0030/evidence/hgnc%3A3236");
  ASSERT_TRUE(ev);
  EXPECT_EQ(ev->status, 200);

  kill(pid, SIGTERM);
  int status = 0;
  waitpid(pid, &status, 0);
}

}  // namespace
}  // namespace celllit
