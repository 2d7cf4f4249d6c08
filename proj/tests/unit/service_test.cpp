#include <gtest/gtest.h>

#include <thread>

#include "satgraph/satgraph.hpp"
#include "satgraph/service.hpp"
#include "support/fixtures.hpp"

namespace sg = satgraph;
using sg::Json;
using sg::testing::data_path;
using sg::testing::mini_store;

namespace {

std::shared_ptr<const sg::Engine> engine() {
  static const auto e = std::make_shared<const sg::Engine>(mini_store());
  return e;
}

sg::Router& router() {
  static sg::Router r(engine(), [] {
    sg::ServiceOptions o;
    o.fixed_now = "2026-01-01T00:00:00Z";
    return o;
  }());
  return r;
}

std::string error_code(const sg::HttpResponse& r) { return Json::parse(r.body)["error"]["code"]; }

std::string uc1_text() { return sg::read_file(data_path("plans/uc1.plan.json")); }

}  // namespace

TEST(Router, PrimitiveMatchesEngine) {
  const Json args = {{"item_id", "art6_cpt"}, {"timestamp", "2001-05-20"}};
  const auto r = router().handle("POST", "/v1/getValidVersion", args.dump());
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.body, sg::canonical_dump(engine()->call("getValidVersion", args, sg::CallContext::at("2026-01-01"))));
  EXPECT_EQ(Json::parse(r.body)["id"], "v2");
  EXPECT_EQ(r.headers.at(sg::kPinnedNowHeader), "2026-01-01T00:00:00Z");
  EXPECT_EQ(router().handle("POST", "/v1/getAvailableLanguages", "").status, 200);
}

TEST(Router, ErrorStatuses) {
  auto post = [](const std::string& p, const Json& body) { return router().handle("POST", "/v1/" + p, body.dump()); };
  auto conflict = post("searchTextUnits", {{"version_ids", {"v1"}}, {"timestamp", "2000-01-01"}});
  EXPECT_EQ(conflict.status, 409);
  EXPECT_EQ(error_code(conflict), "ConflictingScope");
  auto missing = post("getTheme", {{"id", "missing"}});
  EXPECT_EQ(missing.status, 404);
  EXPECT_EQ(error_code(missing), "NotFound");
  EXPECT_EQ(post("getValidVersion", {{"item_id", "art6_cpt"}, {"timestamp", "1980-01-01"}}).status, 404);
  EXPECT_EQ(post("compareVersions", {{"version_id_a", "v1"}, {"version_id_b", "v_ec26"}}).status, 409);
  EXPECT_EQ(post("getActionsBySource", {{"source_work_id", "art6"}}).status, 409);
  EXPECT_EQ(post("getValidVersion", {{"item_id", "art6_cpt"}}).status, 400);
  auto unknown = post("getBatchTexts", Json::object());
  EXPECT_EQ(unknown.status, 400);
  EXPECT_EQ(error_code(unknown), "UnknownPrimitive");
  EXPECT_EQ(Json::parse(unknown.body)["error"]["details"]["hint"], "getBatchTextUnits");
  EXPECT_EQ(error_code(post("setUnion", {{"lists", Json::array()}})), "UnknownPrimitive");
  EXPECT_EQ(error_code(router().handle("POST", "/v1/getItem", "{oops")), "ParseError");
  EXPECT_EQ(router().handle("GET", "/v1/getItem", "").status, 405);
  EXPECT_EQ(router().handle("POST", "/v2/getItem", "{}").status, 404);
  EXPECT_EQ(router().handle("POST", "/v1/getItem", "{}", std::string("not-a-date")).status, 400);
  const Json body = Json::parse(missing.body);
  EXPECT_TRUE(body["error"].contains("message"));
  EXPECT_TRUE(body["error"]["details"].is_object());
}

TEST(Router, PinnedHeaderStandsInForNow) {
  const std::string q = Json{{"lexical_query", "moradia"}}.dump();
  const auto before = router().handle("POST", "/v1/searchTextUnits", q, std::string("1999-06-01"));
  EXPECT_EQ(before.body, "[]");
  EXPECT_EQ(before.headers.at(sg::kPinnedNowHeader), "1999-06-01");
  const auto after = router().handle("POST", "/v1/searchTextUnits", q);
  ASSERT_EQ(Json::parse(after.body).size(), 1u);
}

TEST(Router, ExecuteAndVerify) {
  const auto r = router().handle("POST", "/v1/plans/execute", uc1_text(), std::string("2025-01-01T00:00:00Z"));
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.content_type, "application/x-ndjson");
  EXPECT_EQ(r.headers.at(sg::kPinnedNowHeader), "2025-01-01T00:00:00Z");
  sg::ExecutionOptions o;
  o.pinned_now = "2025-01-01T00:00:00Z";
  EXPECT_EQ(r.body, sg::execute_plan(*engine(), sg::parse_plan_text(uc1_text()), o).audit_text());

  const Json req = {{"plan", Json::parse(uc1_text())}, {"audit", r.body}};
  const auto v = router().handle("POST", "/v1/plans/verify", req.dump());
  ASSERT_EQ(v.status, 200);
  EXPECT_EQ(Json::parse(v.body)["ok"], true);

  std::string tampered = r.body;
  tampered[tampered.find("moradia")] = 'M';
  const auto bad = router().handle("POST", "/v1/plans/verify", Json{{"plan", req["plan"]}, {"audit", tampered}}.dump());
  EXPECT_EQ(Json::parse(bad.body)["ok"], false);

  EXPECT_EQ(router().handle("POST", "/v1/plans/verify", "{}").status, 400);
  const auto bad_plan = router().handle("POST", "/v1/plans/execute", R"({"schema_version":"1","id":"x","steps":[{"id":"a","primitive":"nope"}]})");
  EXPECT_EQ(bad_plan.status, 400);
  EXPECT_EQ(error_code(bad_plan), "UnknownPrimitive");
}

TEST(Router, PlanNowPrecedence) {
  Json plan = Json::parse(uc1_text());
  plan["options"]["pinned_now"] = "2020-01-01";
  auto header_of = [](const sg::HttpResponse& r) { return r.headers.at(sg::kPinnedNowHeader); };
  EXPECT_EQ(header_of(router().handle("POST", "/v1/plans/execute", plan.dump())), "2020-01-01");
  EXPECT_EQ(header_of(router().handle("POST", "/v1/plans/execute", plan.dump(), std::string("2021-01-01"))), "2021-01-01");
  EXPECT_EQ(header_of(router().handle("POST", "/v1/plans/execute", uc1_text())), "2026-01-01T00:00:00Z");
}

TEST(Router, OverloadedWhenNoSlot) {
  sg::ServiceOptions o;
  o.max_plans_in_flight = 0;
  o.plan_wait = std::chrono::milliseconds(5);
  sg::Router busy(engine(), o);
  const auto r = busy.handle("POST", "/v1/plans/execute", uc1_text());
  EXPECT_EQ(r.status, 503);
  EXPECT_EQ(error_code(r), "Overloaded");
}

TEST(OpenApi, DescribesEveryParameter) {
  const auto r = router().handle("GET", "/v1/openapi.json", "");
  ASSERT_EQ(r.status, 200);
  const Json doc = Json::parse(r.body);
  EXPECT_EQ(doc["openapi"], "3.1.0");
  for (const auto& spec : sg::primitive_registry()) {
    const std::string path = "/v1/" + spec.name;
    if (spec.cls == sg::PrimitiveClass::kCombinator) {
      EXPECT_FALSE(doc["paths"].contains(path));
      continue;
    }
    ASSERT_TRUE(doc["paths"].contains(path)) << path;
    const Json& schema = doc["paths"][path]["post"]["requestBody"]["content"]["application/json"]["schema"];
    for (const auto& p : spec.params) EXPECT_TRUE(schema["properties"].contains(p.name)) << spec.name << "." << p.name;
    EXPECT_EQ(schema["properties"].size(), spec.params.size());
  }
  for (const char* c : {"Item", "Theme", "Version", "Action", "TextUnit", "TimeInterval", "ApiError", "TextDiffReport",
                        "CausalTrace", "RankedCandidate"}) {
    EXPECT_TRUE(doc["components"]["schemas"].contains(c)) << c;
  }
  const auto health = Json::parse(router().handle("GET", "/v1/health", "").body);
  EXPECT_EQ(health["store_digest"], mini_store()->digest());
}

TEST(Service, HttpRoundTrip) {
  sg::ServiceOptions o;
  o.fixed_now = "2026-01-01T00:00:00Z";
  sg::Service svc(engine(), o);
  const int port = svc.bind_any();
  ASSERT_GT(port, 0);
  std::thread t([&] { svc.listen_after_bind(); });
  svc.wait_until_ready();

  httplib::Client cli("127.0.0.1", port);
  const Json args = {{"item_id", "art6_cpt"}, {"timestamp", "2001-05-20"}};
  auto res = cli.Post("/v1/getValidVersion", args.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, router().handle("POST", "/v1/getValidVersion", args.dump()).body);
  EXPECT_EQ(res->get_header_value(sg::kPinnedNowHeader), "2026-01-01T00:00:00Z");

  res = cli.Post("/v1/getTheme", Json{{"id", "missing"}}.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);

  httplib::Headers h = {{sg::kPinnedNowHeader, "2025-01-01T00:00:00Z"}};
  res = cli.Post("/v1/plans/execute", h, uc1_text(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, router().handle("POST", "/v1/plans/execute", uc1_text(), std::string("2025-01-01T00:00:00Z")).body);
  EXPECT_EQ(res->get_header_value(sg::kPinnedNowHeader), "2025-01-01T00:00:00Z");

  res = cli.Post("/v1/plans/execute", "{", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);

  res = cli.Get("/v1/openapi.json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);

  svc.stop();
  t.join();
}
