// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "satgraph/satgraph.hpp"
#include "satgraph/service.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_corpus.hpp"

namespace sg = satgraph;
namespace oracle = sg::testing::oracle;
using sg::Json;
using sg::testing::data_path;
using sg::testing::Rng;

namespace {

constexpr const char* kNow = "2026-01-01T00:00:00Z";

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects mismatches; keeps the first few messages.
struct Tally {
  long checks = 0;
  long failures = 0;
  std::string first;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ < 3) first += (first.empty() ? "" : "; ") + what;
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream s;
    s << summary << ", " << checks << " checks, " << failures << " mismatches";
    if (failures) s << " [" << first << "]";
    return {failures == 0, s.str()};
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

sg::ExecutionOptions pinned(const std::string& now = kNow) {
  sg::ExecutionOptions o;
  o.pinned_now = now;
  return o;
}

sg::Plan plan_file(const std::string& name) { return sg::parse_plan_text(sg::read_file(data_path("plans/" + name))); }

std::optional<std::string> error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const sg::Error& e) {
    return std::string(sg::to_string(e.code()));
  }
  return std::nullopt;
}

// 1. Article 6 text as of 2001-05-20.
Outcome uc1() {
  const auto t0 = std::chrono::steady_clock::now();
  const sg::Engine engine(sg::open_store(data_path("cf88-mini")));
  const auto r = sg::execute_plan(engine, plan_file("uc1.plan.json"), pinned());
  const double secs = seconds_since(t0);
  if (!r.ok()) return {false, "plan failed: " + r.failure->message()};

  const Json raw = Json::parse(sg::read_file(data_path("cf88-mini/textunits.json")));
  std::string v2_text;
  for (const auto& t : raw) {
    if (t["source_node_id"] == "v2" && t["aspect"] == "canonical") v2_text = t["content"];
  }
  const Json& text = r.outputs["text"];
  Tally t;
  t.expect(text.is_object() && text.contains("content"), "final binding is not one TextUnit");
  const sg::Version& v = engine.store().version(text["source_node_id"].get<std::string>());
  t.expect(v.validity_interval.contains(sg::Date(2001, 5, 20)), "source version not valid on 2001-05-20");
  t.expect(text["content"] == v2_text, "content differs from the fixture's v2 text");
  t.expect(secs < 1.0, "runtime " + std::to_string(secs) + " s");
  return t.outcome("version " + v.id + ", " + std::to_string(secs).substr(0, 5) + " s");
}

// 2. The amendment that introduced "moradia" and the exact diff.
Outcome uc2() {
  const sg::Engine engine(sg::open_store(data_path("cf88-mini")));
  const auto r = sg::execute_plan(engine, plan_file("uc2.plan.json"), pinned());
  if (!r.ok()) return {false, "plan failed: " + r.failure->message()};
  Tally t;
  t.expect(r.outputs["pivotal_action"]["id"] == "act_ec26", "pivotal action is not act_ec26");
  t.expect(r.outputs["pivotal_action"]["date"] == "2000-02-14", "pivotal action date");
  const Json& diff = r.outputs["diff"];
  t.expect(diff["version_a"] == "v1" && diff["version_b"] == "v2", "diff is not v1 -> v2");
  const Json& edits = diff["textual_edits"];
  t.expect(edits.size() == 1, "expected exactly one edit");
  if (edits.size() == 1) {
    t.expect(edits[0]["op"] == "insert" && edits[0]["tokens_b"] == Json::array({"moradia"}), "edit is not insert moradia");
    const auto a = sg::text::whitespace_tokens(engine.store().text_unit("v1", "pt-BR", "canonical")->content);
    const size_t pos = edits[0]["position"];
    t.expect(pos > 0 && pos <= a.size() && a[pos - 1] == "lazer,", "insert is not right after 'lazer,'");
  }
  t.expect(diff["structural_changes"].empty(), "unexpected structural changes");
  return t.outcome("act_ec26 2000-02-14, insert 'moradia' after 'lazer,'");
}

// 3. Thematic evolution since 2000 on the synthetic corpus.
Outcome uc3() {
  Tally t;
  double worst = 0;
  size_t sizes = 0;
  const sg::Plan plan = plan_file("uc3.plan.json");
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const sg::Corpus c = sg::testing::uc3_corpus(seed);
    t.expect(c.items.size() == 200 && c.themes.size() == 50 && c.actions.size() == 500, "corpus shape");
    const auto t0 = std::chrono::steady_clock::now();
    const sg::Engine engine(sg::GraphStore::load(c));
    const auto r = sg::execute_plan(engine, plan, pinned());
    worst = std::max(worst, seconds_since(t0));
    if (!r.ok()) {
      t.expect(false, "plan failed: " + r.failure->message());
      continue;
    }
    t.expect(r.outputs["theme"]["selected"]["id"] == "u3_theme_07", "theme grounding");
    std::set<std::string> got;
    for (const auto& a : r.outputs["actions"]) got.insert(a["id"].get<std::string>());
    const auto want = oracle::thematic_actions(c, "u3_theme_07", sg::Date(2000, 1, 1));
    t.expect(r.outputs["actions"].size() == got.size(), "duplicate actions in result");
    for (const auto& id : want) t.expect(got.count(id) == 1, "missing " + id);
    for (const auto& id : got) t.expect(want.count(id) == 1, "extra " + id);
    sizes += want.size();
  }
  t.expect(worst < 10.0, "runtime " + std::to_string(worst) + " s");
  return t.outcome("3 corpora, " + std::to_string(sizes) + " oracle actions, max " + std::to_string(worst).substr(0, 5) + " s");
}

// 4. Point-in-time lookup against a linear scan.
Outcome temporal() {
  Tally t;
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const sg::Corpus c = sg::testing::random_corpus(seed);
    const auto s = sg::GraphStore::load(c);
    Rng rng(seed);
    for (int k = 0; k < 1000; ++k) {
      const auto& item = rng.pick(c.items).id;
      const sg::Date d = sg::Date::from_serial(sg::testing::base_date().serial() + rng.uniform(-300, 12000));
      const auto want = oracle::valid_version(c, item, d);
      std::string got;
      const auto err = error_of([&] { got = sg::get_valid_version(*s, item, d).id; });
      t.expect(want ? !err && got == *want : err == "NoValidVersion", item + "@" + d.iso());
    }
  }
  return t.outcome("10 corpora x 1000 probes");
}

// 5. Causality round trip and history against a brute-force filter.
Outcome causal() {
  Tally t;
  size_t versions = 0;
  for (std::uint64_t seed = 200; seed < 210; ++seed) {
    const sg::Corpus c = sg::testing::random_corpus(seed);
    const auto s = sg::GraphStore::load(c);
    for (const auto& v : c.versions) {
      ++versions;
      try {
        const auto tr = sg::trace_causality(*s, v.id);
        t.expect(tr.creating_action.produces_version == v.id, "creating action of " + v.id);
        if (tr.terminating_action) {
          t.expect(tr.terminating_action->terminates_version == v.id, "terminating action of " + v.id);
        }
        t.expect(tr.terminating_action.has_value() == v.validity_interval.end.has_value(), "termination of " + v.id);
      } catch (const sg::Error& e) {
        t.expect(false, v.id + ": " + e.message());
      }
    }
    for (const auto& it : c.items) {
      std::vector<std::string> got;
      for (const auto& a : sg::get_item_history(*s, it.id)) got.push_back(a.id);
      t.expect(got == oracle::item_history(c, it.id), "history of " + it.id);
    }
  }
  return t.outcome(std::to_string(versions) + " versions");
}

// 6. Applying the diff to A gives B.
Outcome diff_round_trip() {
  Tally t;
  long pairs = 0, skipped = 0;
  for (std::uint64_t seed = 300; seed < 304; ++seed) {
    const sg::Corpus c = sg::testing::random_corpus(seed);
    const auto s = sg::GraphStore::load(c);
    for (const auto& it : c.items) {
      const auto& vs = s->versions_of(it.id);
      for (const auto* a : vs) {
        for (const auto* b : vs) {
          if (a == b) continue;
          try {
            const auto r = sg::compare_versions(*s, a->id, b->id);
            const auto ta = sg::text::whitespace_tokens(oracle::text_for(c, a->id, r.language, "canonical")->content);
            const auto tb = sg::text::whitespace_tokens(oracle::text_for(c, b->id, r.language, "canonical")->content);
            t.expect(sg::apply_edits(ta, r.textual_edits) == tb, a->id + " -> " + b->id);
            ++pairs;
          } catch (const sg::Error& e) {
            if (e.code() == sg::ErrorCode::kNoComparableText) ++skipped;
            else t.expect(false, a->id + " -> " + b->id + ": " + e.message());
          }
        }
      }
    }
  }
  t.expect(pairs >= 1000, "only " + std::to_string(pairs) + " pairs");
  return t.outcome(std::to_string(pairs) + " pairs (" + std::to_string(skipped) + " without shared text)");
}

// 7. Each batch primitive against a map of its singular counterpart.
Outcome batch_map() {
  const sg::Corpus c = sg::testing::random_corpus(400);
  const sg::Engine engine(sg::GraphStore::load(c));
  const auto cc = sg::CallContext::at(kNow);
  Rng rng(400);
  Tally t;
  auto pick_ids = [&](const std::function<std::string()>& real) {
    Json ids = Json::array();
    for (int n = rng.uniform(0, 10); n > 0; --n) ids.push_back(rng.chance(0.15) ? "ghost_" + std::to_string(n) : real());
    return ids;
  };
  auto mapped = [&](const std::string& single, const std::string& param, const Json& xs, Json extra) {
    Json out = Json::array();
    for (const auto& x : xs) {
      Json args = extra;
      args[param] = x;
      try {
        out.push_back(engine.call(single, args, cc));
      } catch (const sg::Error&) {
      }
    }
    return out;
  };
  const char* kinds[] = {"Item", "Theme", "Version", "Action"};
  auto real_of = [&](const std::string& kind) -> std::function<std::string()> {
    if (kind == "Item") return [&] { return rng.pick(c.items).id; };
    if (kind == "Theme") return [&] { return rng.pick(c.themes).id; };
    if (kind == "Version") return [&] { return rng.pick(c.versions).id; };
    return [&] { return rng.pick(c.actions).id; };
  };
  for (int k = 0; k < 500; ++k) {
    const std::string kind = kinds[k % 4];
    Json ids = pick_ids(real_of(kind));
    t.expect(engine.call("getBatch", {{"kind", kind}, {"ids", ids}}, cc) == mapped("getEntity", "id", ids, {{"kind", kind}}),
             "getBatch " + ids.dump());

    ids = pick_ids(real_of("Item"));
    t.expect(engine.call("getBatchItems", {{"ids", ids}}, cc) == mapped("getItem", "id", ids, Json::object()),
             "getBatchItems");
    ids = pick_ids(real_of("Action"));
    t.expect(engine.call("getBatchActions", {{"ids", ids}}, cc) == mapped("getAction", "id", ids, Json::object()),
             "getBatchActions");

    ids = pick_ids(real_of("Item"));
    const std::string ts = sg::Date::from_serial(sg::testing::base_date().serial() + rng.uniform(0, 9000)).iso();
    t.expect(engine.call("getBatchValidVersions", {{"item_ids", ids}, {"timestamp", ts}}, cc) ==
                 mapped("getValidVersion", "item_id", ids, {{"timestamp", ts}}),
             "getBatchValidVersions");

    Json requests = Json::array();
    Json singles = Json::array();
    for (const auto& id : pick_ids(real_of("Version"))) {
      const std::string lang = rng.chance(0.6) ? "pt-BR" : "en";
      requests.push_back({{"source_node_type", "Version"}, {"source_node_id", id}, {"language", lang}});
      try {
        singles.push_back(engine.call("getTextForVersion", {{"version_id", id}, {"language", lang}}, cc));
      } catch (const sg::Error&) {
      }
    }
    t.expect(engine.call("getBatchTextUnits", {{"requests", requests}}, cc) == singles, "getBatchTextUnits");
  }
  return t.outcome("500 lists per batch primitive");
}

// 8. Byte-identical reruns, verification, tamper detection.
Outcome replay() {
  Tally t;
  struct Case {
    std::string plan;
    sg::GraphStore::Ptr store;
  };
  const std::vector<Case> cases = {{"uc1.plan.json", sg::open_store(data_path("cf88-mini"))},
                                   {"uc2.plan.json", sg::open_store(data_path("cf88-mini"))},
                                   {"uc3.plan.json", sg::GraphStore::load(sg::testing::uc3_corpus(1))}};
  long tampers = 0, exceptions = 0;
  Rng rng(800);
  for (const auto& cs : cases) {
    const sg::Engine engine(cs.store);
    const sg::Plan plan = plan_file(cs.plan);
    const auto a = sg::execute_plan(engine, plan, pinned());
    const auto b = sg::execute_plan(engine, plan, pinned());
    t.expect(a.ok(), cs.plan + " failed");
    t.expect(a.audit_text() == b.audit_text(), cs.plan + " audit differs between runs");
    t.expect(sg::verify_audit_log(engine, plan, a.audit_text()).ok(), cs.plan + " does not verify");
    const std::string text = a.audit_text();
    for (int k = 0; k < 100; ++k) {
      std::string bad = text;
      const size_t pos = static_cast<size_t>(rng.uniform(0, static_cast<int>(bad.size()) - 1));
      char repl;
      do {
        repl = static_cast<char>(rng.uniform(0, 255));
      } while (repl == bad[pos]);
      bad[pos] = repl;
      ++tampers;
      try {
        t.expect(!sg::verify_audit_log(engine, plan, bad).ok(), cs.plan + " tamper at byte " + std::to_string(pos));
      } catch (const std::exception& e) {
        ++exceptions;
        t.expect(false, std::string("verifier threw: ") + e.what());
      }
    }
  }
  return t.outcome("3 plans, " + std::to_string(tampers) + " tamper trials, " + std::to_string(exceptions) + " exceptions");
}

// 9. Default-time search sees only current text; searchItems sees history.
Outcome search_semantics() {
  Tally t;
  long historic_tokens = 0;
  const sg::Date now = sg::parse_date(kNow);
  for (std::uint64_t seed = 900; seed < 905; ++seed) {
    const sg::Corpus c = sg::testing::random_corpus(seed);
    const sg::Engine engine(sg::GraphStore::load(c));
    const auto& s = engine.store();
    const auto ctx = engine.discovery();

    // Every hit of a default-timestamp search is the currently valid version.
    Rng rng(seed);
    for (int k = 0; k < 40; ++k) {
      sg::TextSearchRequest r;
      r.lexical_query = rng.pick(sg::testing::vocabulary());
      for (const auto& h : sg::search_text_units(ctx, r, now)) {
        const sg::Version& v = s.version(h.text_unit.source_node_id);
        const sg::Version* cur = s.lookup_valid_version(v.item, now);
        t.expect(cur && cur->id == v.id, "stale hit " + h.text_unit.id);
      }
    }

    // Tokens whose canonical occurrences are all in versions no longer valid.
    std::map<std::string, std::set<sg::EntityId>> where;  // token -> versions
    for (const auto& tu : c.text_units) {
      if (tu.source_node_type != sg::NodeType::kVersion || tu.aspect != "canonical") continue;
      for (const auto& tok : sg::text::word_tokens(tu.content)) where[tok].insert(tu.source_node_id);
    }
    for (const auto& [tok, versions] : where) {
      bool historic = true;
      std::set<sg::EntityId> items;
      for (const auto& vid : versions) {
        const sg::Version& v = s.version(vid);
        items.insert(v.item);
        if (v.validity_interval.contains(now)) historic = false;
      }
      if (!historic) continue;
      ++historic_tokens;
      sg::TextSearchRequest tr;
      tr.lexical_query = tok;
      t.expect(sg::search_text_units(ctx, tr, now).empty(), "current search found historic token " + tok);
      sg::ItemSearchRequest ir;
      ir.lexical_query = tok;
      std::set<sg::EntityId> found;
      for (const auto& h : sg::search_items(ctx, ir)) found.insert(h.item.id);
      for (const auto& it : items) t.expect(found.count(it) == 1, "searchItems missed " + it + " for " + tok);
    }
  }
  t.expect(historic_tokens > 100, "too few historic tokens");
  return t.outcome(std::to_string(historic_tokens) + " historic-only tokens");
}

// Random arguments for any non-combinator primitive over corpus c.
Json random_args(const std::string& name, const sg::Corpus& c, Rng& rng) {
  auto item = [&] { return rng.chance(0.05) ? std::string("ghost") : rng.pick(c.items).id; };
  auto version = [&] { return rng.chance(0.05) ? std::string("ghost") : rng.pick(c.versions).id; };
  auto theme = [&] { return rng.pick(c.themes).id; };
  auto action = [&] { return rng.pick(c.actions).id; };
  auto date = [&] { return sg::Date::from_serial(sg::testing::base_date().serial() + rng.uniform(-200, 12000)).iso(); };
  auto lang = [&] { return rng.chance(0.7) ? std::string("pt-BR") : std::string("en"); };
  auto list = [&](const std::function<std::string()>& f) {
    Json xs = Json::array();
    for (int n = rng.uniform(1, 5); n > 0; --n) xs.push_back(f());
    return xs;
  };
  auto words = [&] { return sg::testing::join_words(sg::testing::random_words(rng, rng.uniform(1, 3))); };
  const char* kinds[] = {"Item", "Theme", "Version", "Action"};
  auto of_kind = [&](const std::string& k) {
    return k == "Item" ? item() : k == "Theme" ? theme() : k == "Version" ? version() : action();
  };

  if (name == "resolveItemReference") {
    Json a = {{"reference_text", rng.pick(c.items).label}};
    if (rng.chance(0.3)) a["context_id"] = rng.pick(c.items).id;
    return a;
  }
  if (name == "resolveThemeReference") return {{"reference_text", rng.pick(c.themes).label}, {"top_k", rng.uniform(1, 5)}};
  if (name == "searchTextUnits") {
    Json a = {{"lexical_query", words()}};
    if (rng.chance(0.5)) a["semantic_query"] = words();
    if (rng.chance(0.5)) a["timestamp"] = date();
    if (rng.chance(0.3)) a["item_ids"] = list(item);
    a["top_k"] = rng.uniform(1, 10);
    return a;
  }
  if (name == "searchItems") {
    Json a = {{"lexical_query", words()}, {"top_k", rng.uniform(1, 10)}};
    if (rng.chance(0.3)) a["item_metadata_filter"] = {{"jurisdiction", "federal"}};
    return a;
  }
  if (name == "getEntity") {
    const std::string k = kinds[rng.uniform(0, 3)];
    return {{"kind", k}, {"id", of_kind(k)}};
  }
  if (name == "getItem") return {{"id", item()}};
  if (name == "getTheme") return {{"id", theme()}};
  if (name == "getVersion") return {{"id", version()}};
  if (name == "getAction") return {{"id", action()}};
  if (name == "getValidVersion") return {{"item_id", item()}, {"timestamp", date()}};
  if (name == "getTextForVersion") return {{"version_id", version()}, {"language", lang()}};
  if (name == "getHierarchy") {
    const std::string k = rng.chance(0.5) ? "Item" : "Theme";
    return {{"kind", k}, {"root_id", of_kind(k)}, {"depth", rng.uniform(0, 3)}};
  }
  if (name == "getItemHierarchy") return {{"item_id", item()}, {"depth", rng.uniform(0, 3)}};
  if (name == "getThemeHierarchy") return {{"theme_id", theme()}};
  if (name == "getVersionHierarchy") return {{"version_id", version()}};
  if (name == "getItemTypeHierarchy") return {{"item_type_id", "type_component"}};
  if (name == "getItemAncestors" || name == "getThemesForItem" || name == "getItemHistory" ||
      name == "getTemporalCoverage") {
    return {{"item_id", item()}};
  }
  if (name == "traceCausality") return {{"version_id", version()}};
  if (name == "getVersionsInInterval") {
    const std::string a = date(), b = date();
    return {{"item_ids", list(item)}, {"start_date", std::min(a, b)}, {"end_date", std::max(a, b)}};
  }
  if (name == "compareVersions") {
    const auto& it = rng.pick(c.items).id;
    std::vector<sg::EntityId> vs;
    for (const auto& v : c.versions) {
      if (v.item == it) vs.push_back(v.id);
    }
    return {{"version_id_a", rng.pick(vs)}, {"version_id_b", rng.chance(0.8) ? rng.pick(vs) : version()}};
  }
  if (name == "getActionsBySource") {
    Json a = {{"source_work_id", rng.chance(0.8) ? c.items[static_cast<size_t>(rng.uniform(0, 3))].id : item()}};
    if (rng.chance(0.5)) a["action_types"] = {"Amendment"};
    return a;
  }
  if (name == "getAvailableLanguages" || name == "getSupportedActionTypes" || name == "getRootThemes") {
    return Json::object();
  }
  if (name == "getBatch") {
    const std::string k = kinds[rng.uniform(0, 3)];
    return {{"kind", k}, {"ids", list([&] { return of_kind(k); })}};
  }
  if (name == "getBatchItems") return {{"ids", list(item)}};
  if (name == "getBatchActions") return {{"ids", list(action)}};
  if (name == "getBatchValidVersions") return {{"item_ids", list(item)}, {"timestamp", date()}};
  if (name == "getBatchTextUnits") {
    Json reqs = Json::array();
    for (int n = rng.uniform(1, 4); n > 0; --n) {
      reqs.push_back({{"source_node_type", "Version"}, {"source_node_id", version()}, {"language", lang()}});
    }
    return {{"requests", reqs}};
  }
  return nullptr;
}

// 10. HTTP responses equal engine-direct canonical output.
Outcome transport() {
  const sg::Corpus c = sg::testing::random_corpus(1000);
  auto engine = std::make_shared<const sg::Engine>(sg::GraphStore::load(c));
  sg::Service svc(engine);
  const int port = svc.bind_any();
  if (port <= 0) return {false, "could not bind a port"};
  std::thread server([&] { svc.listen_after_bind(); });
  svc.wait_until_ready();

  Tally t;
  std::vector<const sg::PrimitiveSpec*> prims;
  for (const auto& p : sg::primitive_registry()) {
    if (p.cls != sg::PrimitiveClass::kCombinator) prims.push_back(&p);
  }
  httplib::Client cli("127.0.0.1", port);
  cli.set_keep_alive(true);
  const httplib::Headers headers = {{sg::kPinnedNowHeader, kNow}};
  const auto cc = sg::CallContext::at(kNow);
  Rng rng(1000);
  std::set<std::string> covered;
  int errors = 0;
  for (int k = 0; k < 200; ++k) {
    const auto& spec = *prims[static_cast<size_t>(k < static_cast<int>(prims.size()) ? k : rng.uniform(0, static_cast<int>(prims.size()) - 1))];
    const Json args = random_args(spec.name, c, rng);
    if (args.is_null()) {
      t.expect(false, "no generator for " + spec.name);
      continue;
    }
    covered.insert(spec.name);
    std::string expected;
    int expected_status = 200;
    try {
      expected = sg::canonical_dump(engine->call(spec.name, args, cc));
    } catch (const sg::Error& e) {
      expected = sg::canonical_dump(sg::error_body(e));
      expected_status = sg::http_status(e.code());
      ++errors;
    }
    auto res = cli.Post("/v1/" + spec.name, headers, sg::canonical_dump(args), "application/json");
    if (!res) {
      t.expect(false, "no response for " + spec.name);
      continue;
    }
    t.expect(res->status == expected_status && res->body == expected, spec.name + " " + sg::canonical_dump(args));
  }
  svc.stop();
  server.join();
  t.expect(covered.size() == prims.size(), "not every primitive sampled");
  return t.outcome("200 calls over " + std::to_string(covered.size()) + " primitives (" + std::to_string(errors) +
                   " error responses)");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"use case 1: article text at a date", uc1},
      {"use case 2: pivotal amendment and diff", uc2},
      {"use case 3: thematic evolution", uc3},
      {"point-in-time oracle equivalence", temporal},
      {"causal coherence", causal},
      {"diff round trip", diff_round_trip},
      {"batch equals map", batch_map},
      {"determinism, replay and tamper detection", replay},
      {"search temporal semantics", search_semantics},
      {"transport transparency", transport},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
