#include <gtest/gtest.h>

#include <sstream>
#include <thread>

#include <httplib.h>

#include "cli.hpp"
#include "common.hpp"
#include "secrec/payload.hpp"
#include "secrec/service.hpp"
#include "secrec/snapshot.hpp"

using namespace secrec;
using namespace secrec::testing;
using nlohmann::json;

namespace {

struct Fixture {
  TempDir dir;
  Service service;

  Fixture() : service(config(dir.path), [] { return std::string("2026-01-01T00:00:00Z"); }) {}

  static ServiceConfig config(const std::filesystem::path& store) {
    ServiceConfig c;
    c.kb_dir = kRoot / "kbs";
    c.store_dir = store / "sessions";
    return c;
  }

  HttpReply call(const std::string& method, const std::string& path, const json& body = nullptr) {
    return service.handle(method, path, body.is_null() ? "" : body.dump());
  }

  std::string create() {
    auto r = call("POST", "/sessions", {{"requirement", "staff log in"}, {"kb", "authn"}});
    EXPECT_EQ(r.status, 201);
    return r.body.at("session").at("id").get<std::string>();
  }

  void answer_rc(const std::string& id, int k) {
    for (const auto& [p, v] : rc(k).values) {
      auto r = call("POST", "/sessions/" + id + "/answers", {{"property", p}, {"value", v}});
      ASSERT_EQ(r.status, 200) << r.body.dump();
    }
  }
};

}  // namespace

TEST(Service, ListKbs) {
  Fixture f;
  auto r = f.call("GET", "/kbs");
  ASSERT_EQ(r.status, 200);
  bool found = false;
  for (const auto& kb : r.body) {
    if (kb.at("id") == "authn") {
      found = true;
      EXPECT_EQ(kb.at("patterns"), 6);
      EXPECT_EQ(kb.at("context_properties"), 6);
    }
  }
  EXPECT_TRUE(found);
  auto d = f.call("GET", "/kbs/authn");
  EXPECT_EQ(d.status, 200);
  EXPECT_EQ(d.body.at("pattern_definitions").size(), 6u);
  EXPECT_EQ(f.call("GET", "/kbs/nope").status, 404);
}

TEST(Service, SessionFlow) {
  Fixture f;
  auto id = f.create();
  auto q = f.call("GET", "/sessions/" + id + "/question");
  ASSERT_EQ(q.status, 200);
  EXPECT_EQ(q.body.at("question").at("property"), "sec-lev");

  auto a = f.call("POST", "/sessions/" + id + "/answers", {{"property", "sec-lev"}, {"value", "high"}});
  ASSERT_EQ(a.status, 200);
  EXPECT_EQ(a.body.at("feasible_count"), 5);
  EXPECT_EQ(a.body.at("accepted"), true);
  EXPECT_EQ(a.body.at("session").at("feasible").size(), 5u);

  auto ex = f.call("POST", "/sessions/" + id + "/assistant", {{"question", "what does budget mean"}});
  ASSERT_EQ(ex.status, 200);
  EXPECT_EQ(ex.body.at("source"), "stub");

  auto del = f.call("DELETE", "/sessions/" + id + "/answers/sec-lev");
  ASSERT_EQ(del.status, 200);
  EXPECT_EQ(del.body.at("feasible_count"), 6);

  f.answer_rc(id, 4);
  EXPECT_EQ(f.call("GET", "/sessions/" + id + "/question").body.at("question"), nullptr);
  auto recs = f.call("GET", "/sessions/" + id + "/recommendations");
  ASSERT_EQ(recs.status, 200);
  EXPECT_EQ(recs.body.at("recommendations").at(0).at("pattern"), "password");

  auto sel = f.call("POST", "/sessions/" + id + "/selection", {{"pattern", "password"}});
  ASSERT_EQ(sel.status, 200);
  EXPECT_EQ(sel.body.at("session").at("stage"), "SDPStage");
  EXPECT_EQ(f.call("GET", "/sessions/" + id + "/question").body.at("question").at("property"), "architecture");
}

TEST(Service, ErrorEnvelopes) {
  Fixture f;
  auto id = f.create();
  auto bad = f.call("POST", "/sessions/" + id + "/answers", {{"property", "budget"}, {"value", "ultra"}});
  EXPECT_EQ(bad.status, 422);
  EXPECT_EQ(bad.body.at("error").at("code"), "value_out_of_domain");
  EXPECT_TRUE(bad.body.at("error").at("message").is_string());
  EXPECT_TRUE(bad.body.at("error").contains("details"));

  EXPECT_EQ(f.call("GET", "/sessions/ffffffffffffffffffffffffffffffff").status, 404);
  EXPECT_EQ(f.call("POST", "/sessions", {{"requirement", "x"}, {"kb", "nope"}}).status, 404);
  EXPECT_EQ(f.service.handle("POST", "/sessions", "{oops").status, 400);
  EXPECT_EQ(f.call("POST", "/sessions/" + id + "/answers", {{"value", "high"}}).status, 400);
  EXPECT_EQ(f.call("GET", "/sessions/" + id + "/recommendations").status, 409);
  f.call("POST", "/sessions/" + id + "/answers", {{"property", "budget"}, {"value", "low"}});
  EXPECT_EQ(f.call("POST", "/sessions/" + id + "/answers", {{"property", "budget"}, {"value", "high"}}).status, 409);
  EXPECT_EQ(f.call("GET", "/nowhere").status, 404);
  EXPECT_EQ(f.call("PUT", "/kbs").status, 404);
}

TEST(Service, PersistsBeforeResponding) {
  Fixture f;
  auto id = f.create();
  EXPECT_TRUE(f.service.store().contains(id));
  f.call("POST", "/sessions/" + id + "/answers", {{"property", "sec-lev"}, {"value", "high"}});
  Session stored = f.service.store().load(id);
  EXPECT_EQ(*stored.ctx.get("sec-lev"), "high");

  // A second service over the same store picks the session up.
  Service other(Fixture::config(f.dir.path));
  auto r = other.handle("GET", "/sessions/" + id, "");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body.at("feasible_count"), 5);
}

TEST(Service, ReplayThroughApiIsByteIdentical) {
  auto run = [] {
    Fixture f;
    auto id = f.create();
    f.call("POST", "/sessions/" + id + "/answers", {{"property", "use-lev"}, {"value", "high"}});
    f.call("DELETE", "/sessions/" + id + "/answers/use-lev");
    f.answer_rc(id, 8);
    auto body = f.call("GET", "/sessions/" + id + "/recommendations").body;
    return dump_payload(body);
  };
  EXPECT_EQ(run(), run());
}

TEST(Service, CliJsonMatchesRecommendationsEndpoint) {
  for (int k : {1, 4, 6, 7}) {
    Fixture f;
    auto id = f.create();
    f.answer_rc(id, k);
    auto api = dump_payload(f.call("GET", "/sessions/" + id + "/recommendations").body);
    std::istringstream in;
    std::ostringstream out, err;
    std::string ctx = (kRoot / "rcs" / ("rc" + std::to_string(k) + ".ctx")).string();
    int code = cli::run({"secrec", "recommend", (kRoot / "kbs" / "authn.kb").string(), ctx, "--json"}, in, out, err);
    EXPECT_EQ(code, 0) << err.str();
    EXPECT_EQ(out.str(), api) << "rc" << k;
  }
}

TEST(Service, StatusMapping) {
  EXPECT_EQ(http_status(ErrorCode::UnknownSession), 404);
  EXPECT_EQ(http_status(ErrorCode::WrongState), 409);
  EXPECT_EQ(http_status(ErrorCode::UnknownProperty), 422);
  EXPECT_EQ(http_status(ErrorCode::ParseError), 400);
  EXPECT_EQ(http_status(ErrorCode::Io), 500);
}

TEST(Service, ListenAddress) {
  ServiceConfig c;
  c.set_listen("0.0.0.0:9000");
  EXPECT_EQ(c.host, "0.0.0.0");
  EXPECT_EQ(c.port, 9000);
  EXPECT_THROW(c.set_listen("nope"), Error);
  EXPECT_THROW(c.set_listen("h:99999"), Error);
}

TEST(Service, RealHttp) {
  TempDir dir;
  auto cfg = Fixture::config(dir.path);
  cfg.port = 0;
  Service service(cfg);
  int port = service.bind();
  std::thread t([&] { service.listen_after_bind(); });

  httplib::Client client("127.0.0.1", port);
  auto kbs = client.Get("/kbs");
  ASSERT_TRUE(kbs);
  EXPECT_EQ(kbs->status, 200);
  EXPECT_EQ(kbs->get_header_value("Content-Type"), "application/json");

  auto created = client.Post("/sessions", R"({"requirement": "r", "kb": "authn"})", "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  auto id = json::parse(created->body).at("session").at("id").get<std::string>();

  auto ans = client.Post("/sessions/" + id + "/answers", R"({"property": "sec-lev", "value": "high"})",
                         "application/json");
  ASSERT_TRUE(ans);
  EXPECT_EQ(json::parse(ans->body).at("feasible_count"), 5);

  auto del = client.Delete("/sessions/" + id + "/answers/sec-lev");
  ASSERT_TRUE(del);
  EXPECT_EQ(del->status, 200);

  auto missing = client.Get("/sessions/" + id + "/recommendations");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 409);
  EXPECT_EQ(json::parse(missing->body).at("error").at("code"), "wrong_state");

  service.stop();
  t.join();
}
