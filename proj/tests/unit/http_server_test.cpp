#include <gtest/gtest.h>

#include <httplib.h>
#include <json.hpp>

#include <thread>

#include "scenestat/error.h"
#include "scenestat/experiment/http_server.h"
#include "scenestat/experiment/store.h"
#include "test_support.h"

namespace scenestat::experiment {
namespace {

using nlohmann::json;

class HttpFixture : public ::testing::Test {
 protected:
  void SetUp() override { start(); }
  void TearDown() override { stop(); }

  void start() {
    store_ = std::make_unique<ExperimentStore>(StoreOptions{dir_.path(), 5, {}, {}});
    if (store_->set_ids().empty()) {
      StimulusSet set{"demo", 4, {0x0000, 0xa5a5, 0xffff, 0x0f0f, 0x1234}, {}};
      store_->add_set(set);
    }
    server_ = std::make_unique<ExperimentServer>(*store_, ServerOptions{"127.0.0.1", 0, {}});
    port_ = server_->bind();
    thread_ = std::thread([this] { server_->serve(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void stop() {
    server_->stop();
    thread_.join();
    client_.reset();
    server_.reset();
    store_->write_snapshot();
    store_.reset();
  }

  httplib::Result post(const std::string& path, const json& body) {
    return client_->Post(path, body.dump(), "application/json");
  }

  json create_session() {
    auto res = post("/api/sessions", {{"set_id", "demo"}, {"age", 30}});
    EXPECT_EQ(res->status, 201);
    return json::parse(res->body);
  }

  testing::TempDir dir_;
  std::unique_ptr<ExperimentStore> store_;
  std::unique_ptr<ExperimentServer> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(HttpFixture, Healthz) {
  auto res = client_->Get("/api/healthz");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body), json({{"ok", true}}));
  EXPECT_GT(port_, 0);
}

TEST_F(HttpFixture, FullScriptedSessionMatchesTally) {
  std::map<std::string, int> expected_random;
  for (int p = 0; p < 3; ++p) {
    const json session = create_session();
    EXPECT_EQ(session["k"], 4);
    ASSERT_EQ(session["trials"].size(), 5u);
    for (const auto& trial : session["trials"]) {
      const std::string hex = trial["pattern_hex"];
      const bool random = (hex == "a5a5" || hex == "1234") != (p == 2);
      expected_random[hex] += random;
      auto res = post("/api/sessions/" + session["session_id"].get<std::string>() + "/responses",
                      {{"index", trial["index"]}, {"choice", random ? "random" : "not_random"},
                       {"rt_ms", 650}});
      ASSERT_EQ(res->status, 200) << res->body;
      EXPECT_EQ(json::parse(res->body), json({{"ok", true}}));
    }
    auto state = client_->Get("/api/sessions/" + session["session_id"].get<std::string>());
    EXPECT_TRUE(json::parse(state->body)["completed"].get<bool>());
  }

  auto res = client_->Get("/api/sets/demo/export");
  ASSERT_EQ(res->status, 200);
  const auto rows = aggregates_from_csv(res->body, 4);
  ASSERT_EQ(rows.size(), 5u);
  for (const auto& row : rows) {
    EXPECT_EQ(row.n_total, 3u);
    EXPECT_EQ(static_cast<int>(row.n_random), expected_random[grid::to_hex(row.pattern, 4)]);
  }
  EXPECT_NE(res->body.find("completed_sessions=3"), std::string::npos);
}

TEST_F(HttpFixture, ErrorCodes) {
  auto res = post("/api/sessions", {{"set_id", "missing"}});
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(json::parse(res->body)["code"], "not_found");

  res = client_->Post("/api/sessions", "{not json", "application/json");
  EXPECT_EQ(res->status, 400);
  res = post("/api/sessions", {{"age", 3}});
  EXPECT_EQ(res->status, 400);

  const json session = create_session();
  const std::string base = "/api/sessions/" + session["session_id"].get<std::string>();
  res = post(base + "/responses", {{"index", 0}, {"choice", "random"}, {"rt_ms", 10}});
  EXPECT_EQ(res->status, 200);
  res = post(base + "/responses", {{"index", 0}, {"choice", "random"}, {"rt_ms", 10}});
  EXPECT_EQ(res->status, 200);  // identical retry
  res = post(base + "/responses", {{"index", 0}, {"choice", "not_random"}, {"rt_ms", 10}});
  EXPECT_EQ(res->status, 409);
  EXPECT_EQ(json::parse(res->body)["code"], "conflict");
  res = post(base + "/responses", {{"index", 5}, {"choice", "random"}, {"rt_ms", 10}});
  EXPECT_EQ(res->status, 400);
  res = post(base + "/responses", {{"index", 1}, {"choice", "perhaps"}, {"rt_ms", 10}});
  EXPECT_EQ(res->status, 400);
  res = post("/api/sessions/unknown/responses", {{"index", 1}, {"choice", "random"}, {"rt_ms", 1}});
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(client_->Get("/api/sets/none/export")->status, 404);

  auto state = json::parse(client_->Get(base)->body);
  EXPECT_EQ(state["answered"], json::array({0}));
  EXPECT_FALSE(state["completed"].get<bool>());
}

TEST_F(HttpFixture, ResponsesSurviveRestart) {
  const json session = create_session();
  const std::string id = session["session_id"];
  for (int i = 0; i < 3; ++i) {
    post("/api/sessions/" + id + "/responses", {{"index", i}, {"choice", "random"}, {"rt_ms", 1}});
  }
  stop();
  start();
  auto state = json::parse(client_->Get("/api/sessions/" + id)->body);
  EXPECT_EQ(state["answered"], json::array({0, 1, 2}));
  EXPECT_EQ(state["trials"], session["trials"]);
}

TEST(HttpServer, BadDataDirectory) {
  testing::TempDir dir;
  EXPECT_THROW(ExperimentStore(StoreOptions{dir / "missing", 1, {}, {}}), InputError);
}

}  // namespace
}  // namespace scenestat::experiment
