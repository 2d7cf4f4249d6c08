#pragma once

// Primitive registry: every callable operation with its parameter schema,
// result schema and JSON handler. The plan executor, the HTTP service and
// the CLI all dispatch through Engine::call, so the three surfaces return the
// same canonical bytes for the same call.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "satgraph/canonical.hpp"
#include "satgraph/deterministic.hpp"
#include "satgraph/discovery.hpp"
#include "satgraph/scoring.hpp"
#include "satgraph/store.hpp"

namespace satgraph {

enum class ParamType {
  kString,
  kId,
  kDate,
  kInteger,
  kNumber,
  kStringList,
  kIdList,
  kEntityKind,
  kHierarchyKind,
  kMetadataFilter,
  kPredicateMap,
  kTextUnitRequests,
  kFusionWeights,
  kList,
  kObject,
  kAny,
};

// Deterministic primitives replay exactly; discovery primitives are checked
// for chain integrity and argument provenance only; combinators are pure
// plan helpers.
enum class PrimitiveClass { kDeterministic, kDiscovery, kCombinator };

inline constexpr std::string_view to_string(PrimitiveClass c) {
  switch (c) {
    case PrimitiveClass::kDeterministic: return "deterministic";
    case PrimitiveClass::kDiscovery: return "discovery";
    case PrimitiveClass::kCombinator: return "combinator";
  }
  return "deterministic";
}

struct ParamSpec {
  std::string name;
  ParamType type = ParamType::kString;
  bool required = false;
  std::string description;
};

// Per-call context. `now` stands in for every omitted "current instant".
struct CallContext {
  std::string pinned_now;  // ISO 8601 instant as echoed to callers
  Date now;

  static CallContext at(const std::string& instant) { return {instant, parse_date(instant)}; }
};

class Engine;
class Args;

struct PrimitiveSpec {
  std::string name;
  PrimitiveClass cls = PrimitiveClass::kDeterministic;
  std::string summary;
  std::vector<ParamSpec> params;
  Json result_schema;
  std::function<Json(const Engine&, const Args&, const CallContext&)> handler;

  const ParamSpec* param(const std::string& n) const {
    for (const auto& p : params) {
      if (p.name == n) return &p;
    }
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// Argument checking against a PrimitiveSpec. JSON null counts as absent.

class Args {
 public:
  Args(const Json& j, const PrimitiveSpec& spec) : j_(j), spec_(spec) {
    if (!j_.is_object()) bad("", "arguments must be a JSON object");
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      const ParamSpec* p = spec_.param(it.key());
      if (!p) bad(it.key(), "unknown parameter");
      if (!it.value().is_null()) check_type(*p, it.value());
    }
    for (const auto& p : spec_.params) {
      if (p.required && !has(p.name)) bad(p.name, "missing required parameter");
    }
  }

  bool has(const std::string& name) const { return j_.contains(name) && !j_[name].is_null(); }
  const Json& raw(const std::string& name) const { return j_[name]; }

  std::string str(const std::string& name) const { return raw(name).get<std::string>(); }
  std::optional<std::string> opt_str(const std::string& name) const {
    return has(name) ? std::optional(str(name)) : std::nullopt;
  }
  Date date(const std::string& name) const { return parse_date(str(name)); }
  std::optional<Date> opt_date(const std::string& name) const {
    return has(name) ? std::optional(date(name)) : std::nullopt;
  }
  std::optional<int> opt_int(const std::string& name) const {
    return has(name) ? std::optional(raw(name).get<int>()) : std::nullopt;
  }
  std::vector<std::string> list(const std::string& name) const { return raw(name).get<std::vector<std::string>>(); }
  std::optional<std::vector<std::string>> opt_list(const std::string& name) const {
    return has(name) ? std::optional(list(name)) : std::nullopt;
  }

 private:
  [[noreturn]] void bad(const std::string& param, const std::string& why) const {
    fail(ErrorCode::kInvalidArgument, spec_.name + (param.empty() ? "" : "." + param) + ": " + why,
         {{"primitive", spec_.name}, {"parameter", param}});
  }

  void check_type(const ParamSpec& p, const Json& v) const {
    auto string_list = [&](bool ids) {
      if (!v.is_array()) bad(p.name, "expected a list of strings");
      for (const auto& e : v) {
        if (!e.is_string() || (ids && e.get_ref<const std::string&>().empty())) bad(p.name, "expected a list of strings");
      }
    };
    switch (p.type) {
      case ParamType::kString:
        if (!v.is_string()) bad(p.name, "expected a string");
        break;
      case ParamType::kId:
        if (!v.is_string() || v.get_ref<const std::string&>().empty()) bad(p.name, "expected a non-empty id string");
        break;
      case ParamType::kDate:
        if (!v.is_string() || !try_parse_date(v.get_ref<const std::string&>())) {
          bad(p.name, "expected an ISO 8601 date or date-time");
        }
        break;
      case ParamType::kInteger:
        if (!v.is_number_integer()) bad(p.name, "expected an integer");
        if (v.get<std::int64_t>() > 1'000'000'000 || v.get<std::int64_t>() < -1'000'000'000) bad(p.name, "out of range");
        break;
      case ParamType::kNumber:
        if (!v.is_number()) bad(p.name, "expected a number");
        break;
      case ParamType::kStringList: string_list(false); break;
      case ParamType::kIdList: string_list(true); break;
      case ParamType::kEntityKind:
        if (!v.is_string() || !is_one_of(v, {"Item", "Theme", "Version", "Action"})) {
          bad(p.name, "expected one of Item, Theme, Version, Action");
        }
        break;
      case ParamType::kHierarchyKind:
        if (!v.is_string() || !is_one_of(v, {"Item", "Theme", "Version", "ItemType"})) {
          bad(p.name, "expected one of Item, Theme, Version, ItemType");
        }
        break;
      case ParamType::kMetadataFilter:
        metadata_filter_from_json(v);
        break;
      case ParamType::kPredicateMap:
        predicates_from_json(v);
        break;
      case ParamType::kTextUnitRequests:
        text_unit_requests(v);
        break;
      case ParamType::kFusionWeights:
        fusion_weights(v);
        break;
      case ParamType::kList:
        if (!v.is_array()) bad(p.name, "expected a list");
        break;
      case ParamType::kObject:
        if (!v.is_object()) bad(p.name, "expected an object");
        break;
      case ParamType::kAny: break;
    }
  }

  static bool is_one_of(const Json& v, std::initializer_list<const char*> xs) {
    for (const char* x : xs) {
      if (v.get_ref<const std::string&>() == x) return true;
    }
    return false;
  }

 public:
  static std::vector<TextUnitRequest> text_unit_requests(const Json& v) {
    if (!v.is_array()) fail(ErrorCode::kInvalidArgument, "requests must be a list");
    std::vector<TextUnitRequest> out;
    for (const auto& e : v) {
      try {
        StrictObject o(e, "text unit request");
        TextUnitRequest r;
        r.source_node_type = parse_node_type(o.str("source_node_type"));
        r.source_node_id = o.str("source_node_id");
        r.language = o.str("language");
        if (o.has("aspects") && !o.raw("aspects").is_null()) r.aspects = o.str_list("aspects");
        o.finish();
        out.push_back(std::move(r));
      } catch (const Error& err) {
        fail(ErrorCode::kInvalidArgument, err.message());
      }
    }
    return out;
  }

  static FusionWeights fusion_weights(const Json& v) {
    if (!v.is_object()) fail(ErrorCode::kInvalidArgument, "fusion_weights must be an object");
    FusionWeights w;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!it.value().is_number() || it.value().get<double>() < 0) {
        fail(ErrorCode::kInvalidArgument, "fusion weight '" + it.key() + "' must be a non-negative number");
      }
      if (it.key() == "lexical") w.lexical = it.value().get<double>();
      else if (it.key() == "semantic") w.semantic = it.value().get<double>();
      else fail(ErrorCode::kInvalidArgument, "unknown fusion weight '" + it.key() + "'");
    }
    return w;
  }

 private:
  const Json& j_;
  const PrimitiveSpec& spec_;
};

// ---------------------------------------------------------------------------

struct EngineConfig {
  std::string scorer = "trigram";
  FusionWeights weights{};
};

class Engine {
 public:
  explicit Engine(GraphStore::Ptr store, EngineConfig config = {},
                  std::shared_ptr<const ScorerRegistry> scorers = std::make_shared<ScorerRegistry>())
      : store_(std::move(store)), config_(std::move(config)), scorers_(std::move(scorers)),
        scorer_(scorers_->get(config_.scorer)) {}

  const GraphStore& store() const { return *store_; }
  const GraphStore::Ptr& store_ptr() const { return store_; }
  const EngineConfig& config() const { return config_; }
  DiscoveryContext discovery() const { return {*store_, *scorer_, config_.weights}; }

  // Runs a registered primitive on JSON arguments and returns its canonical
  // JSON result. Throws Error on failure.
  Json call(const std::string& primitive, const Json& args, const CallContext& cc) const;

 private:
  GraphStore::Ptr store_;
  EngineConfig config_;
  std::shared_ptr<const ScorerRegistry> scorers_;
  std::shared_ptr<const SemanticScorer> scorer_;
};

// ---------------------------------------------------------------------------
// Result schemas (component names refer to the interface document).

namespace schema {

inline Json ref(const std::string& component) { return {{"$ref", "#/components/schemas/" + component}}; }
inline Json array_of(Json items) { return {{"type", "array"}, {"items", std::move(items)}}; }
inline Json string_list() { return array_of({{"type", "string"}}); }
inline Json nullable(Json s) { return {{"anyOf", Json::array({std::move(s), {{"type", "null"}}})}}; }

inline Json for_param(ParamType t) {
  switch (t) {
    case ParamType::kString: return {{"type", "string"}};
    case ParamType::kId: return {{"type", "string"}, {"minLength", 1}};
    case ParamType::kDate:
      return {{"type", "string"}, {"pattern", "^[0-9]{4}-[0-9]{2}-[0-9]{2}"},
              {"description", "ISO 8601 date or date-time"}};
    case ParamType::kInteger: return {{"type", "integer"}};
    case ParamType::kNumber: return {{"type", "number"}};
    case ParamType::kStringList: return string_list();
    case ParamType::kIdList: return array_of({{"type", "string"}, {"minLength", 1}});
    case ParamType::kEntityKind: return {{"type", "string"}, {"enum", {"Item", "Theme", "Version", "Action"}}};
    case ParamType::kHierarchyKind: return {{"type", "string"}, {"enum", {"Item", "Theme", "Version", "ItemType"}}};
    case ParamType::kMetadataFilter: return ref("MetadataFilter");
    case ParamType::kPredicateMap: return ref("PredicateMap");
    case ParamType::kTextUnitRequests: return array_of(ref("TextUnitRequest"));
    case ParamType::kFusionWeights: return ref("FusionWeights");
    case ParamType::kList: return {{"type", "array"}};
    case ParamType::kObject: return {{"type", "object"}};
    case ParamType::kAny: return Json::object();
  }
  return Json::object();
}

}  // namespace schema

// ---------------------------------------------------------------------------

inline Json kind_record_schema(EntityKind k) {
  switch (k) {
    case EntityKind::kItem: return schema::ref("Item");
    case EntityKind::kTheme: return schema::ref("Theme");
    case EntityKind::kVersion: return schema::ref("Version");
    case EntityKind::kAction: return schema::ref("Action");
  }
  return Json::object();
}

namespace detail {

inline PrimitiveSpec fetch_spec(const char* name, EntityKind kind, const char* what) {
  return {name,
          PrimitiveClass::kDeterministic,
          std::string("Fetches one ") + what + " by id.",
          {{"id", ParamType::kId, true, std::string("id of the ") + what}},
          kind_record_schema(kind),
          [kind](const Engine& e, const Args& a, const CallContext&) { return get_entity(e.store(), kind, a.str("id")); }};
}

inline PrimitiveSpec batch_spec(const char* name, EntityKind kind, const char* what) {
  return {name,
          PrimitiveClass::kDeterministic,
          std::string("Fetches many ") + what + " records; unknown ids are dropped, input order is kept.",
          {{"ids", ParamType::kIdList, true, "ids to fetch"}},
          schema::array_of(kind_record_schema(kind)),
          [kind](const Engine& e, const Args& a, const CallContext&) { return get_batch(e.store(), kind, a.list("ids")); }};
}

inline PrimitiveSpec hierarchy_spec(const char* name, HierarchyKind kind, const char* root_param, const char* what) {
  return {name,
          PrimitiveClass::kDeterministic,
          std::string("Pre-order descendant ids of a ") + what + "; depth 1 gives direct children, omitted or negative gives all.",
          {{root_param, ParamType::kId, true, std::string("root ") + what + " id"},
           {"depth", ParamType::kInteger, false, "maximum depth; omitted or negative means unbounded"}},
          schema::string_list(),
          [kind, root = std::string(root_param)](const Engine& e, const Args& a, const CallContext&) {
            return Json(get_hierarchy(e.store(), kind, a.str(root), a.opt_int("depth")));
          }};
}

inline std::vector<PrimitiveSpec> build_registry();

}  // namespace detail

inline const std::vector<PrimitiveSpec>& primitive_registry() {
  static const std::vector<PrimitiveSpec> specs = detail::build_registry();
  return specs;
}

inline const std::map<std::string, std::string>& primitive_aliases() {
  static const std::map<std::string, std::string> aliases = {{"getBatchTexts", "getBatchTextUnits"}};
  return aliases;
}

inline const PrimitiveSpec* find_primitive(const std::string& name) {
  static const std::map<std::string, const PrimitiveSpec*> index = [] {
    std::map<std::string, const PrimitiveSpec*> m;
    for (const auto& s : primitive_registry()) m[s.name] = &s;
    return m;
  }();
  auto it = index.find(name);
  return it == index.end() ? nullptr : it->second;
}

inline const PrimitiveSpec& require_primitive(const std::string& name) {
  if (const PrimitiveSpec* p = find_primitive(name)) return *p;
  std::map<std::string, std::string> details{{"primitive", name}};
  std::string msg = "unknown primitive '" + name + "'";
  auto alias = primitive_aliases().find(name);
  if (alias != primitive_aliases().end()) {
    details["hint"] = alias->second;
    msg += "; did you mean '" + alias->second + "'?";
  }
  fail(ErrorCode::kUnknownPrimitive, msg, details);
}

inline Json Engine::call(const std::string& primitive, const Json& args, const CallContext& cc) const {
  const PrimitiveSpec& spec = require_primitive(primitive);
  const Args a(args, spec);
  return spec.handler(*this, a, cc);
}

}  // namespace satgraph

#include "satgraph/combinators.hpp"

namespace satgraph::detail {

inline std::vector<PrimitiveSpec> build_registry() {
  using P = ParamType;
  namespace sc = schema;
  std::vector<PrimitiveSpec> r;

  // Discovery ---------------------------------------------------------------
  r.push_back({"resolveItemReference",
               PrimitiveClass::kDiscovery,
               "Ranks Items whose label and ancestor labels match a textual reference.",
               {{"reference_text", P::kString, true, "natural-language reference"},
                {"context_id", P::kId, false, "Item giving structural context; same-Work candidates are preferred"},
                {"top_k", P::kInteger, false, "maximum candidates (default 3)"}},
               sc::array_of(sc::ref("RankedCandidate")),
               [](const Engine& e, const Args& a, const CallContext&) {
                 return to_json_list(resolve_item_reference(e.store(), a.str("reference_text"), a.opt_str("context_id"),
                                                            a.opt_int("top_k")));
               }});
  r.push_back({"resolveThemeReference",
               PrimitiveClass::kDiscovery,
               "Ranks Themes whose label and description match a textual reference.",
               {{"reference_text", P::kString, true, "natural-language theme name"},
                {"top_k", P::kInteger, false, "maximum candidates (default 3)"}},
               sc::array_of(sc::ref("RankedCandidate")),
               [](const Engine& e, const Args& a, const CallContext&) {
                 return to_json_list(resolve_theme_reference(e.store(), a.str("reference_text"), a.opt_int("top_k")));
               }});
  r.push_back({"searchTextUnits",
               PrimitiveClass::kDiscovery,
               "Hybrid lexical/semantic search over the TextUnits of Versions in scope.",
               {{"version_ids", P::kIdList, false, "explicit versions; exclusive with item_ids, theme_ids, timestamp"},
                {"item_ids", P::kIdList, false, "items whose valid version is searched (no descendant expansion)"},
                {"theme_ids", P::kIdList, false, "themes whose direct members are searched"},
                {"metadata_filter", P::kMetadataFilter, false, "item and version metadata predicates"},
                {"timestamp", P::kDate, false, "point in time; defaults to the pinned current instant"},
                {"semantic_query", P::kString, false, "query for the semantic scorer"},
                {"lexical_query", P::kString, false, "keywords or phrase"},
                {"language", P::kString, false, "language code filter"},
                {"aspects", P::kStringList, false, "aspects to search (default [\"canonical\"])"},
                {"top_k", P::kInteger, false, "maximum results (default unlimited)"},
                {"fusion_weights", P::kFusionWeights, false, "lexical/semantic weights (default 0.5 each)"}},
               sc::array_of(sc::ref("ScoredTextUnit")),
               [](const Engine& e, const Args& a, const CallContext& cc) {
                 TextSearchRequest q;
                 q.version_ids = a.opt_list("version_ids");
                 q.item_ids = a.opt_list("item_ids");
                 q.theme_ids = a.opt_list("theme_ids");
                 if (a.has("metadata_filter")) q.metadata_filter = metadata_filter_from_json(a.raw("metadata_filter"));
                 q.timestamp = a.opt_date("timestamp");
                 q.semantic_query = a.opt_str("semantic_query");
                 q.lexical_query = a.opt_str("lexical_query");
                 q.language = a.opt_str("language");
                 q.aspects = a.opt_list("aspects");
                 q.top_k = a.opt_int("top_k");
                 if (a.has("fusion_weights")) q.weights = Args::fusion_weights(a.raw("fusion_weights"));
                 return to_json_list(search_text_units(e.discovery(), q, cc.now));
               }});
  r.push_back({"searchItems",
               PrimitiveClass::kDiscovery,
               "Hybrid search for Items across their whole version history.",
               {{"item_ids", P::kIdList, false, "restrict to these items"},
                {"theme_ids", P::kIdList, false, "restrict to direct members of these themes"},
                {"item_metadata_filter", P::kPredicateMap, false, "item metadata predicates"},
                {"semantic_query", P::kString, false, "query for the semantic scorer"},
                {"lexical_query", P::kString, false, "keywords or phrase"},
                {"top_k", P::kInteger, false, "maximum results (default unlimited)"},
                {"fusion_weights", P::kFusionWeights, false, "lexical/semantic weights (default 0.5 each)"}},
               sc::array_of(sc::ref("ScoredItem")),
               [](const Engine& e, const Args& a, const CallContext&) {
                 ItemSearchRequest q;
                 q.item_ids = a.opt_list("item_ids");
                 q.theme_ids = a.opt_list("theme_ids");
                 if (a.has("item_metadata_filter")) q.item_metadata_filter = predicates_from_json(a.raw("item_metadata_filter"));
                 q.semantic_query = a.opt_str("semantic_query");
                 q.lexical_query = a.opt_str("lexical_query");
                 q.top_k = a.opt_int("top_k");
                 if (a.has("fusion_weights")) q.weights = Args::fusion_weights(a.raw("fusion_weights"));
                 return to_json_list(search_items(e.discovery(), q));
               }});

  // Fetch -------------------------------------------------------------------
  r.push_back({"getEntity",
               PrimitiveClass::kDeterministic,
               "Fetches one record of the given kind by id.",
               {{"kind", P::kEntityKind, true, "Item, Theme, Version or Action"}, {"id", P::kId, true, "entity id"}},
               {{"oneOf", {sc::ref("Item"), sc::ref("Theme"), sc::ref("Version"), sc::ref("Action")}}},
               [](const Engine& e, const Args& a, const CallContext&) {
                 return get_entity(e.store(), parse_entity_kind(a.str("kind")), a.str("id"));
               }});
  r.push_back(fetch_spec("getItem", EntityKind::kItem, "Item"));
  r.push_back(fetch_spec("getTheme", EntityKind::kTheme, "Theme"));
  r.push_back(fetch_spec("getVersion", EntityKind::kVersion, "Version"));
  r.push_back(fetch_spec("getAction", EntityKind::kAction, "Action"));
  r.push_back({"getValidVersion",
               PrimitiveClass::kDeterministic,
               "The unique Version of an Item valid at a point in time.",
               {{"item_id", P::kId, true, "item id"}, {"timestamp", P::kDate, true, "point in time"}},
               sc::ref("Version"),
               [](const Engine& e, const Args& a, const CallContext&) {
                 return to_json(get_valid_version(e.store(), a.str("item_id"), a.date("timestamp")));
               }});
  r.push_back({"getTextForVersion",
               PrimitiveClass::kDeterministic,
               "The canonical TextUnit of a Version in a language.",
               {{"version_id", P::kId, true, "version id"}, {"language", P::kString, true, "language code"}},
               sc::ref("TextUnit"),
               [](const Engine& e, const Args& a, const CallContext&) {
                 return to_json(get_text_for_version(e.store(), a.str("version_id"), a.str("language")));
               }});

  // Navigation --------------------------------------------------------------
  r.push_back({"getHierarchy",
               PrimitiveClass::kDeterministic,
               "Pre-order descendant ids of an Item, Theme, Version or ItemType.",
               {{"kind", P::kHierarchyKind, true, "Item, Theme, Version or ItemType"},
                {"root_id", P::kId, true, "root id"},
                {"depth", P::kInteger, false, "maximum depth; omitted or negative means unbounded"}},
               sc::string_list(),
               [](const Engine& e, const Args& a, const CallContext&) {
                 return Json(get_hierarchy(e.store(), parse_hierarchy_kind(a.str("kind")), a.str("root_id"),
                                           a.opt_int("depth")));
               }});
  r.push_back(hierarchy_spec("getItemHierarchy", HierarchyKind::kItem, "item_id", "Item"));
  r.push_back(hierarchy_spec("getThemeHierarchy", HierarchyKind::kTheme, "theme_id", "Theme"));
  r.push_back(hierarchy_spec("getVersionHierarchy", HierarchyKind::kVersion, "version_id", "Version"));
  r.push_back(hierarchy_spec("getItemTypeHierarchy", HierarchyKind::kItemType, "item_type_id", "ItemType"));
  r.push_back({"getItemAncestors",
               PrimitiveClass::kDeterministic,
               "Ancestors of an Item from the highest component below the Work down to the parent.",
               {{"item_id", P::kId, true, "item id"}},
               sc::array_of(sc::ref("Item")),
               [](const Engine& e, const Args& a, const CallContext&) {
                 return to_json_list(get_item_ancestors(e.store(), a.str("item_id")));
               }});
  r.push_back({"getThemesForItem",
               PrimitiveClass::kDeterministic,
               "Themes that list the Item as a direct member, by id.",
               {{"item_id", P::kId, true, "item id"}},
               sc::array_of(sc::ref("Theme")),
               [](const Engine& e, const Args& a, const CallContext&) {
                 return to_json_list(get_themes_for_item(e.store(), a.str("item_id")));
               }});

  // Causal / lineage ----------------------------------------------------------
  r.push_back({"getItemHistory",
               PrimitiveClass::kDeterministic,
               "Actions that created or terminated any Version of the Item, by (date, id).",
               {{"item_id", P::kId, true, "item id"}},
               sc::array_of(sc::ref("Action")),
               [](const Engine& e, const Args& a, const CallContext&) {
                 return to_json_list(get_item_history(e.store(), a.str("item_id")));
               }});
  r.push_back({"traceCausality",
               PrimitiveClass::kDeterministic,
               "The Action that produced a Version and the one that terminated it, if any.",
               {{"version_id", P::kId, true, "version id"}},
               sc::ref("CausalTrace"),
               [](const Engine& e, const Args& a, const CallContext&) {
                 return to_json(trace_causality(e.store(), a.str("version_id")));
               }});
  r.push_back({"getVersionsInInterval",
               PrimitiveClass::kDeterministic,
               "Versions of the given Items valid at any point of a closed date interval.",
               {{"item_ids", P::kIdList, true, "items (no descendant expansion); must be non-empty"},
                {"start_date", P::kDate, true, "interval start"},
                {"end_date", P::kDate, true, "interval end"}},
               sc::array_of(sc::ref("Version")),
               [](const Engine& e, const Args& a, const CallContext&) {
                 return to_json_list(get_versions_in_interval(e.store(), a.list("item_ids"), a.date("start_date"),
                                                              a.date("end_date")));
               }});
  r.push_back({"compareVersions",
               PrimitiveClass::kDeterministic,
               "Token-level and structural differences between two Versions of one Item.",
               {{"version_id_a", P::kId, true, "earlier version"}, {"version_id_b", P::kId, true, "later version"}},
               sc::ref("TextDiffReport"),
               [](const Engine& e, const Args& a, const CallContext&) {
                 return to_json(compare_versions(e.store(), a.str("version_id_a"), a.str("version_id_b")));
               }});
  r.push_back({"getActionsBySource",
               PrimitiveClass::kDeterministic,
               "Actions authorized by any Version inside a Work, by (date, id).",
               {{"source_work_id", P::kId, true, "id of a Work"},
                {"action_types", P::kStringList, false, "keep only these action types"}},
               sc::array_of(sc::ref("Action")),
               [](const Engine& e, const Args& a, const CallContext&) {
                 return to_json_list(get_actions_by_source(e.store(), a.str("source_work_id"), a.opt_list("action_types")));
               }});

  // Introspection -------------------------------------------------------------
  r.push_back({"getTemporalCoverage",
               PrimitiveClass::kDeterministic,
               "Earliest start and latest end over an Item's Versions; end is null while open.",
               {{"item_id", P::kId, true, "item id"}},
               sc::ref("TimeInterval"),
               [](const Engine& e, const Args& a, const CallContext&) {
                 return to_json(get_temporal_coverage(e.store(), a.str("item_id")));
               }});
  r.push_back({"getAvailableLanguages", PrimitiveClass::kDeterministic, "Distinct TextUnit languages, sorted.", {},
               sc::string_list(),
               [](const Engine& e, const Args&, const CallContext&) { return Json(get_available_languages(e.store())); }});
  r.push_back({"getSupportedActionTypes", PrimitiveClass::kDeterministic, "Declared action types, sorted.", {},
               sc::string_list(), [](const Engine& e, const Args&, const CallContext&) {
                 return Json(get_supported_action_types(e.store()));
               }});
  r.push_back({"getRootThemes", PrimitiveClass::kDeterministic, "Themes without parents, by id.", {},
               sc::array_of(sc::ref("Theme")),
               [](const Engine& e, const Args&, const CallContext&) { return to_json_list(get_root_themes(e.store())); }});

  // Batch ---------------------------------------------------------------------
  r.push_back({"getBatch",
               PrimitiveClass::kDeterministic,
               "Fetches many records of one kind; unknown ids are dropped, input order is kept.",
               {{"kind", P::kEntityKind, true, "Item, Theme, Version or Action"}, {"ids", P::kIdList, true, "ids"}},
               sc::array_of({{"oneOf", {sc::ref("Item"), sc::ref("Theme"), sc::ref("Version"), sc::ref("Action")}}}),
               [](const Engine& e, const Args& a, const CallContext&) {
                 return get_batch(e.store(), parse_entity_kind(a.str("kind")), a.list("ids"));
               }});
  r.push_back(batch_spec("getBatchItems", EntityKind::kItem, "Item"));
  r.push_back(batch_spec("getBatchActions", EntityKind::kAction, "Action"));
  r.push_back({"getBatchValidVersions",
               PrimitiveClass::kDeterministic,
               "Valid Version of each Item at one point in time; items without one are dropped.",
               {{"item_ids", P::kIdList, true, "item ids"}, {"timestamp", P::kDate, true, "point in time"}},
               sc::array_of(sc::ref("Version")),
               [](const Engine& e, const Args& a, const CallContext&) {
                 return to_json_list(get_batch_valid_versions(e.store(), a.list("item_ids"), a.date("timestamp")));
               }});
  r.push_back({"getBatchTextUnits",
               PrimitiveClass::kDeterministic,
               "TextUnits for many (source, language, aspects) requests, in request order; misses are dropped.",
               {{"requests", P::kTextUnitRequests, true, "text unit requests"}},
               sc::array_of(sc::ref("TextUnit")),
               [](const Engine& e, const Args& a, const CallContext&) {
                 return to_json_list(get_batch_text_units(e.store(), Args::text_unit_requests(a.raw("requests"))));
               }});

  append_combinators(r);
  return r;
}

}  // namespace satgraph::detail
