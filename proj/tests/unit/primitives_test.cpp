#include <gtest/gtest.h>

#include <set>

#include "satgraph/satgraph.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_corpus.hpp"

namespace sg = satgraph;
namespace oracle = sg::testing::oracle;
using sg::testing::mini_store;

namespace {

sg::ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const sg::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return sg::ErrorCode::kIoError;
}

std::vector<sg::EntityId> ids(const std::vector<sg::Action>& xs) {
  std::vector<sg::EntityId> out;
  for (const auto& x : xs) out.push_back(x.id);
  return out;
}

std::vector<sg::EntityId> ids(const std::vector<sg::Version>& xs) {
  std::vector<sg::EntityId> out;
  for (const auto& x : xs) out.push_back(x.id);
  return out;
}

const std::vector<std::uint64_t> kSeeds = {1, 2, 3, 17, 99, 2024};

}  // namespace

// Fixture examples

TEST(ValidVersion, FixturePoints) {
  const auto& s = *mini_store();
  EXPECT_EQ(sg::get_valid_version(s, "art6_cpt", sg::Date(1999, 12, 31)).id, "v1");
  EXPECT_EQ(sg::get_valid_version(s, "art6_cpt", sg::Date(2000, 2, 13)).id, "v1");
  EXPECT_EQ(sg::get_valid_version(s, "art6_cpt", sg::Date(2000, 2, 14)).id, "v2");
  EXPECT_EQ(sg::get_valid_version(s, "art6_cpt", sg::Date(2001, 5, 20)).id, "v2");
  EXPECT_EQ(code_of([&] { sg::get_valid_version(s, "art6_cpt", sg::Date(1988, 10, 4)); }),
            sg::ErrorCode::kNoValidVersion);
  EXPECT_EQ(code_of([&] { sg::get_valid_version(s, "art6", sg::Date(2001, 5, 20)); }),
            sg::ErrorCode::kNoValidVersion);
  EXPECT_EQ(code_of([&] { sg::get_valid_version(s, "nope", sg::Date(2001, 5, 20)); }), sg::ErrorCode::kNotFound);
}

TEST(Text, FixtureTextForVersion) {
  const auto& s = *mini_store();
  EXPECT_NE(sg::get_text_for_version(s, "v2", "pt-BR").content.find("lazer, moradia e"), std::string::npos);
  EXPECT_EQ(code_of([&] { sg::get_text_for_version(s, "v2", "en"); }), sg::ErrorCode::kNoTextUnit);
}

TEST(History, FixtureHistoryAndCausality) {
  const auto& s = *mini_store();
  EXPECT_EQ(ids(sg::get_item_history(s, "art6_cpt")), (std::vector<sg::EntityId>{"act_creation", "act_ec26"}));
  const auto trace = sg::trace_causality(s, "v1");
  EXPECT_EQ(trace.creating_action.id, "act_creation");
  ASSERT_TRUE(trace.terminating_action);
  EXPECT_EQ(trace.terminating_action->id, "act_ec26");
  EXPECT_FALSE(sg::trace_causality(s, "v2").terminating_action);
  EXPECT_EQ(code_of([&] { sg::trace_causality(s, "v_ec26"); }), sg::ErrorCode::kMissingProvenance);
}

TEST(Actions, BySourceNeedsAWork) {
  const auto& s = *mini_store();
  EXPECT_EQ(ids(sg::get_actions_by_source(s, "ec26_work", std::nullopt)), (std::vector<sg::EntityId>{"act_ec26"}));
  EXPECT_TRUE(sg::get_actions_by_source(s, "ec26_work", std::vector<std::string>{"Revocation"}).empty());
  EXPECT_EQ(code_of([&] { sg::get_actions_by_source(s, "art6", std::nullopt); }), sg::ErrorCode::kNotAWork);
}

TEST(Interval, FixtureAndErrors) {
  const auto& s = *mini_store();
  EXPECT_EQ(ids(sg::get_versions_in_interval(s, {"art6_cpt"}, sg::Date(1999, 1, 1), sg::Date(2000, 2, 14))),
            (std::vector<sg::EntityId>{"v1", "v2"}));
  EXPECT_EQ(ids(sg::get_versions_in_interval(s, {"art6_cpt"}, sg::Date(1999, 1, 1), sg::Date(2000, 2, 13))),
            (std::vector<sg::EntityId>{"v1"}));
  EXPECT_EQ(code_of([&] { sg::get_versions_in_interval(s, {"art6_cpt"}, sg::Date(2001, 1, 1), sg::Date(2000, 1, 1)); }),
            sg::ErrorCode::kInvalidInterval);
  EXPECT_EQ(code_of([&] { sg::get_versions_in_interval(s, {}, sg::Date(2000, 1, 1), sg::Date(2001, 1, 1)); }),
            sg::ErrorCode::kInvalidArgument);
}

TEST(Diff, FixtureInsertsMoradia) {
  const auto r = sg::compare_versions(*mini_store(), "v1", "v2");
  EXPECT_EQ(r.language, "pt-BR");
  ASSERT_EQ(r.textual_edits.size(), 1u);
  EXPECT_EQ(r.textual_edits[0].op, sg::EditOp::kInsert);
  EXPECT_EQ(r.textual_edits[0].position, 11u);
  EXPECT_EQ(r.textual_edits[0].tokens_b, (std::vector<std::string>{"moradia"}));
  EXPECT_TRUE(r.structural_changes.empty());
  EXPECT_EQ(code_of([&] { sg::compare_versions(*mini_store(), "v1", "v_ec26"); }), sg::ErrorCode::kDifferentItems);
  EXPECT_EQ(code_of([&] { sg::compare_versions(*mini_store(), "v1", "v1"); }), sg::ErrorCode::kInvalidArgument);
}

TEST(Hierarchy, FixtureTrees) {
  const auto& s = *mini_store();
  EXPECT_EQ(sg::get_hierarchy(s, sg::HierarchyKind::kItem, "cf88_work", std::nullopt),
            (std::vector<sg::EntityId>{"art6", "art6_cpt"}));
  EXPECT_EQ(sg::get_hierarchy(s, sg::HierarchyKind::kItem, "cf88_work", 1), (std::vector<sg::EntityId>{"art6"}));
  EXPECT_EQ(sg::get_hierarchy(s, sg::HierarchyKind::kItemType, "type_component", std::nullopt),
            (std::vector<sg::EntityId>{"type_article", "type_caput"}));
  const auto anc = sg::get_item_ancestors(s, "art6_cpt");
  ASSERT_EQ(anc.size(), 1u);
  EXPECT_EQ(anc[0].id, "art6");
  ASSERT_EQ(sg::get_themes_for_item(s, "art6").size(), 1u);
  EXPECT_TRUE(sg::get_themes_for_item(s, "art6_cpt").empty());
}

TEST(Coverage, FixtureIntrospection) {
  const auto& s = *mini_store();
  const auto cov = sg::get_temporal_coverage(s, "art6_cpt");
  EXPECT_EQ(cov.start, sg::Date(1988, 10, 5));
  EXPECT_FALSE(cov.end);
  EXPECT_EQ(code_of([&] { sg::get_temporal_coverage(s, "art6"); }), sg::ErrorCode::kNoVersions);
  EXPECT_EQ(sg::get_available_languages(s), (std::vector<std::string>{"pt-BR"}));
  EXPECT_EQ(sg::get_supported_action_types(s), (std::vector<std::string>{"Amendment", "Creation", "Revocation"}));
  ASSERT_EQ(sg::get_root_themes(s).size(), 1u);
}

TEST(Batch, DropsMissesKeepsOrder) {
  const auto& s = *mini_store();
  const auto j = sg::get_batch(s, sg::EntityKind::kItem, {"art6_cpt", "ghost", "cf88_work"});
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["id"], "art6_cpt");
  EXPECT_EQ(j[1]["id"], "cf88_work");
  EXPECT_EQ(ids(sg::get_batch_valid_versions(s, {"art6", "art6_cpt", "ghost"}, sg::Date(1990, 1, 1))),
            (std::vector<sg::EntityId>{"v1"}));
  const auto tus = sg::get_batch_text_units(
      s, {{sg::NodeType::kVersion, "v2", "pt-BR", std::nullopt},
          {sg::NodeType::kVersion, "theme_social_rights", "pt-BR", std::vector<std::string>{"description"}},
          {sg::NodeType::kTheme, "theme_social_rights", "pt-BR", std::vector<std::string>{"description"}}});
  ASSERT_EQ(tus.size(), 2u);
  EXPECT_EQ(tus[0].id, "tu_v2_canonical_pt-BR");
  EXPECT_EQ(tus[1].id, "tu_theme_social_rights_description_pt-BR");
}

// Properties over generated corpora

TEST(Property, ValidVersionMatchesLinearScan) {
  for (auto seed : kSeeds) {
    const auto c = sg::testing::random_corpus(seed);
    const auto s = sg::GraphStore::load(c);
    sg::testing::Rng rng(seed * 31);
    for (int k = 0; k < 400; ++k) {
      const auto& item = rng.pick(c.items).id;
      const sg::Date t = sg::Date::from_serial(sg::testing::base_date().serial() + rng.uniform(-200, 9000));
      const auto want = oracle::valid_version(c, item, t);
      const sg::Version* got = s->lookup_valid_version(item, t);
      ASSERT_EQ(want.has_value(), got != nullptr) << seed << " " << item << " " << t.iso();
      if (want) {
        EXPECT_EQ(*want, got->id);
      }
    }
  }
}

TEST(Property, HistoryMatchesBruteForce) {
  for (auto seed : kSeeds) {
    const auto c = sg::testing::random_corpus(seed);
    const auto s = sg::GraphStore::load(c);
    for (const auto& it : c.items) {
      ASSERT_EQ(ids(sg::get_item_history(*s, it.id)), oracle::item_history(c, it.id)) << seed << " " << it.id;
    }
  }
}

TEST(Property, HistoryIsConsistentWithCausality) {
  const auto c = sg::testing::random_corpus(5);
  const auto s = sg::GraphStore::load(c);
  for (const auto& v : c.versions) {
    const auto tr = sg::trace_causality(*s, v.id);
    EXPECT_EQ(tr.creating_action.produces_version, v.id);
    EXPECT_EQ(tr.creating_action.date, v.validity_interval.start);
    EXPECT_EQ(tr.terminating_action.has_value(), v.validity_interval.end.has_value());
    if (tr.terminating_action) {
      EXPECT_EQ(tr.terminating_action->date, *v.validity_interval.end);
    }
  }
}

TEST(Property, IntervalMatchesDayScan) {
  for (auto seed : kSeeds) {
    const auto c = sg::testing::random_corpus(seed);
    const auto s = sg::GraphStore::load(c);
    sg::testing::Rng rng(seed + 7);
    for (int k = 0; k < 200; ++k) {
      std::vector<sg::EntityId> items;
      const int n = rng.uniform(1, 4);
      for (int i = 0; i < n; ++i) items.push_back(rng.pick(c.items).id);
      const long long a = sg::testing::base_date().serial() + rng.uniform(-100, 8000);
      const long long b = a + rng.uniform(0, 1500);
      const auto got = ids(sg::get_versions_in_interval(*s, items, sg::Date::from_serial(a), sg::Date::from_serial(b)));
      ASSERT_EQ(got, oracle::versions_in_interval(c, items, sg::Date::from_serial(a), sg::Date::from_serial(b)))
          << seed << " " << k;
    }
  }
}

TEST(Property, HierarchyMatchesRecursion) {
  for (auto seed : kSeeds) {
    const auto c = sg::testing::random_corpus(seed);
    const auto s = sg::GraphStore::load(c);
    for (const auto& it : c.items) {
      for (int depth : {0, 1, 2, 5}) {
        const std::optional<int> d = depth ? std::optional<int>(depth) : std::nullopt;
        ASSERT_EQ(sg::get_hierarchy(*s, sg::HierarchyKind::kItem, it.id, d), oracle::item_descendants(c, it.id, depth))
            << seed << " " << it.id << " " << depth;
      }
    }
  }
}

TEST(Property, ThemeHierarchyIsTheClosure) {
  for (auto seed : kSeeds) {
    const auto c = sg::testing::random_corpus(seed);
    const auto s = sg::GraphStore::load(c);
    for (const auto& t : c.themes) {
      const auto got = sg::get_hierarchy(*s, sg::HierarchyKind::kTheme, t.id, std::nullopt);
      std::set<sg::EntityId> as_set(got.begin(), got.end());
      EXPECT_EQ(as_set.size(), got.size()) << "duplicates under " << t.id;
      as_set.insert(t.id);
      EXPECT_EQ(as_set, oracle::theme_closure(c, t.id));
    }
  }
}

TEST(Property, AncestorsInvertHierarchy) {
  const auto c = sg::testing::random_corpus(11);
  const auto s = sg::GraphStore::load(c);
  for (const auto& it : c.items) {
    for (const auto& a : sg::get_item_ancestors(*s, it.id)) {
      const auto below = sg::get_hierarchy(*s, sg::HierarchyKind::kItem, a.id, std::nullopt);
      EXPECT_NE(std::find(below.begin(), below.end(), it.id), below.end());
      EXPECT_NE(a.kind, sg::ItemKind::kWork);
    }
  }
}

TEST(Property, DiffRoundTripsAndIsMinimal) {
  for (auto seed : kSeeds) {
    sg::testing::Rng rng(seed);
    for (int k = 0; k < 300; ++k) {
      const auto a = sg::testing::random_words(rng, rng.uniform(0, 25));
      auto b = rng.chance(0.2) ? sg::testing::random_words(rng, rng.uniform(0, 25))
                               : sg::testing::mutate(rng, a, "fresh" + std::to_string(k));
      const auto edits = sg::diff_tokens(a, b);
      ASSERT_EQ(sg::apply_edits(a, edits), b);
      size_t deleted = 0, inserted = 0;
      for (const auto& e : edits) {
        deleted += e.tokens_a.size();
        inserted += e.tokens_b.size();
        EXPECT_FALSE(e.tokens_a.empty() && e.tokens_b.empty());
      }
      const size_t lcs = oracle::lcs_length(a, b);
      EXPECT_EQ(deleted + inserted, a.size() + b.size() - 2 * lcs);
      if (a == b) {
        EXPECT_TRUE(edits.empty());
      }
    }
  }
}

TEST(Property, CompareVersionsOnCorpusRoundTrips) {
  const auto c = sg::testing::random_corpus(42);
  const auto s = sg::GraphStore::load(c);
  int compared = 0;
  for (const auto& it : c.items) {
    const auto& vs = s->versions_of(it.id);
    for (size_t k = 1; k < vs.size(); ++k) {
      try {
        const auto r = sg::compare_versions(*s, vs[k - 1]->id, vs[k]->id);
        const auto a = sg::text::whitespace_tokens(oracle::text_for(c, vs[k - 1]->id, r.language, "canonical")->content);
        const auto b = sg::text::whitespace_tokens(oracle::text_for(c, vs[k]->id, r.language, "canonical")->content);
        EXPECT_EQ(sg::apply_edits(a, r.textual_edits), b);
        ++compared;
      } catch (const sg::Error& e) {
        EXPECT_EQ(e.code(), sg::ErrorCode::kNoComparableText);
      }
    }
  }
  EXPECT_GT(compared, 100);
}

TEST(Property, BatchEqualsMappedSingles) {
  for (auto seed : kSeeds) {
    const auto c = sg::testing::random_corpus(seed);
    const auto s = sg::GraphStore::load(c);
    sg::testing::Rng rng(seed ^ 0x5a5a);
    for (int k = 0; k < 50; ++k) {
      std::vector<sg::EntityId> items;
      for (int i = rng.uniform(0, 8); i > 0; --i) items.push_back(rng.chance(0.1) ? "ghost" : rng.pick(c.items).id);
      const sg::Date t = sg::Date::from_serial(sg::testing::base_date().serial() + rng.uniform(0, 8000));
      std::vector<sg::EntityId> singles;
      for (const auto& id : items) {
        try {
          singles.push_back(sg::get_valid_version(*s, id, t).id);
        } catch (const sg::Error&) {
        }
      }
      EXPECT_EQ(ids(sg::get_batch_valid_versions(*s, items, t)), singles);

      std::vector<sg::TextUnitRequest> reqs;
      std::vector<sg::EntityId> want;
      for (const auto& id : singles) {
        const std::string lang = rng.chance(0.5) ? "pt-BR" : "en";
        reqs.push_back({sg::NodeType::kVersion, id, lang, std::nullopt});
        try {
          want.push_back(sg::get_text_for_version(*s, id, lang).id);
        } catch (const sg::Error&) {
        }
      }
      std::vector<sg::EntityId> got;
      for (const auto& t : sg::get_batch_text_units(*s, reqs)) got.push_back(t.id);
      EXPECT_EQ(got, want);
    }
  }
}

TEST(Property, CoverageSpansVersions) {
  const auto c = sg::testing::random_corpus(8);
  const auto s = sg::GraphStore::load(c);
  for (const auto& it : c.items) {
    const auto cov = sg::get_temporal_coverage(*s, it.id);
    for (const auto* v : s->versions_of(it.id)) {
      EXPECT_LE(cov.start, v->validity_interval.start);
      if (cov.end) {
        ASSERT_TRUE(v->validity_interval.end);
        EXPECT_LE(*v->validity_interval.end, *cov.end);
      }
    }
  }
}

TEST(Engine, DispatchMatchesDirectCalls) {
  const sg::Engine engine(mini_store());
  const auto cc = sg::CallContext::at("2026-01-01");
  EXPECT_EQ(engine.call("getValidVersion", {{"item_id", "art6_cpt"}, {"timestamp", "2001-05-20"}}, cc)["id"], "v2");
  const auto hist = engine.call("getItemHistory", {{"item_id", "art6_cpt"}}, cc);
  ASSERT_EQ(hist.size(), 2u);
  EXPECT_EQ(hist[1]["id"], "act_ec26");
  EXPECT_EQ(code_of([&] { engine.call("getValidVersion", {{"item_id", "art6_cpt"}, {"bogus", 1}}, cc); }),
            sg::ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { engine.call("getValidVersion", {{"timestamp", "2001-05-20"}}, cc); }),
            sg::ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { engine.call("getBatchTexts", sg::Json::object(), cc); }), sg::ErrorCode::kUnknownPrimitive);
}
