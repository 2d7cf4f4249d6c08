#pragma once

// Canonical JSON serialization of every record the engine returns, plus
// strict readers for the corpus interchange format. Field order is fixed
// and absent optionals serialize as null, so dumps are byte-comparable.

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "satgraph/model.hpp"

namespace satgraph {

using Json = nlohmann::ordered_json;

// Compact UTF-8 dump without insignificant whitespace.
inline std::string canonical_dump(const Json& j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::strict);
}

inline Json to_json(const MetadataValue& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

inline Json to_json(const Metadata& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = to_json(v);
  return j;
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json id_list(const std::vector<EntityId>& ids) {
  Json j = Json::array();
  for (const auto& id : ids) j.push_back(id);
  return j;
}

inline Json to_json(const TimeInterval& t) {
  Json j = Json::object();
  j["start"] = t.start.iso();
  j["end"] = t.end ? Json(t.end->iso()) : Json(nullptr);
  return j;
}

inline Json to_json(const Item& i) {
  Json j = Json::object();
  j["id"] = i.id;
  j["kind"] = std::string(to_string(i.kind));
  j["type_id"] = i.type_id;
  j["label"] = i.label;
  j["uri"] = optional_json(i.uri);
  j["parent"] = optional_json(i.parent);
  j["children"] = id_list(i.children);
  j["metadata"] = to_json(i.metadata);
  return j;
}

inline Json to_json(const Theme& t) {
  Json j = Json::object();
  j["id"] = t.id;
  j["label"] = t.label;
  j["uri"] = optional_json(t.uri);
  j["parents"] = id_list(t.parents);
  j["children"] = id_list(t.children);
  j["members"] = id_list(t.members);
  j["metadata"] = to_json(t.metadata);
  return j;
}

inline Json to_json(const Version& v) {
  Json j = Json::object();
  j["id"] = v.id;
  j["item"] = v.item;
  j["validity_interval"] = to_json(v.validity_interval);
  j["uri"] = optional_json(v.uri);
  j["parents"] = id_list(v.parents);
  j["metadata"] = to_json(v.metadata);
  return j;
}

inline Json to_json(const Action& a) {
  Json j = Json::object();
  j["id"] = a.id;
  j["type"] = a.type;
  j["date"] = a.date.iso();
  j["source_version"] = a.source_version;
  j["terminates_version"] = optional_json(a.terminates_version);
  j["produces_version"] = optional_json(a.produces_version);
  j["metadata"] = to_json(a.metadata);
  return j;
}

inline Json to_json(const TextUnit& t) {
  Json j = Json::object();
  j["id"] = t.id;
  j["source_node_type"] = std::string(to_string(t.source_node_type));
  j["source_node_id"] = t.source_node_id;
  j["language"] = t.language;
  j["aspect"] = t.aspect;
  j["content"] = t.content;
  return j;
}

inline Json to_json(const ItemType& t) {
  Json j = Json::object();
  j["id"] = t.id;
  j["label"] = t.label;
  j["parents"] = id_list(t.parents);
  return j;
}

inline Json to_json(const Ontology& o) {
  Json j = Json::object();
  j["action_types"] = o.action_types;
  Json types = Json::array();
  for (const auto& t : o.item_types) types.push_back(to_json(t));
  j["item_types"] = std::move(types);
  return j;
}

inline Json to_json(const RankedCandidate& c) {
  Json j = Json::object();
  j["id"] = c.id;
  j["confidence"] = c.confidence;
  return j;
}

inline Json to_json(const ScoredTextUnit& s) {
  Json j = Json::object();
  j["text_unit"] = to_json(s.text_unit);
  j["score"] = s.score;
  return j;
}

inline Json to_json(const ScoredItem& s) {
  Json j = Json::object();
  j["item"] = to_json(s.item);
  j["score"] = s.score;
  return j;
}

inline Json to_json(const CausalTrace& c) {
  Json j = Json::object();
  j["creating_action"] = to_json(c.creating_action);
  j["terminating_action"] = c.terminating_action ? to_json(*c.terminating_action) : Json(nullptr);
  return j;
}

inline Json to_json(const TextEdit& e) {
  Json j = Json::object();
  j["op"] = std::string(to_string(e.op));
  j["position"] = e.position;
  j["tokens_a"] = e.tokens_a;
  j["tokens_b"] = e.tokens_b;
  return j;
}

inline Json to_json(const StructuralChange& c) {
  Json j = Json::object();
  j["change"] = std::string(to_string(c.change));
  j["item"] = c.item;
  return j;
}

inline Json to_json(const TextDiffReport& r) {
  Json j = Json::object();
  j["version_a"] = r.version_a;
  j["version_b"] = r.version_b;
  j["language"] = r.language;
  Json edits = Json::array();
  for (const auto& e : r.textual_edits) edits.push_back(to_json(e));
  j["textual_edits"] = std::move(edits);
  Json changes = Json::array();
  for (const auto& c : r.structural_changes) changes.push_back(to_json(c));
  j["structural_changes"] = std::move(changes);
  return j;
}

template <typename T>
Json to_json_list(const std::vector<T>& xs) {
  Json j = Json::array();
  for (const auto& x : xs) j.push_back(to_json(x));
  return j;
}

// ---------------------------------------------------------------------------
// Strict readers
// ---------------------------------------------------------------------------

// Reads fields out of one JSON object and rejects anything it did not consume.
class StrictObject {
 public:
  StrictObject(const Json& j, std::string context) : j_(j), context_(std::move(context)) {
    if (!j_.is_object()) fail(ErrorCode::kParseError, context_ + ": expected an object");
  }

  std::string str(const char* name) {
    const Json* v = get(name);
    if (!v || !v->is_string()) fail(ErrorCode::kParseError, context_ + ": field '" + name + "' must be a string");
    return v->get<std::string>();
  }

  std::optional<std::string> opt_str(const char* name) {
    const Json* v = get(name);
    if (!v || v->is_null()) return std::nullopt;
    if (!v->is_string()) fail(ErrorCode::kParseError, context_ + ": field '" + name + "' must be a string or null");
    return v->get<std::string>();
  }

  Date date(const char* name) {
    const std::string s = str(name);
    auto d = try_parse_date(s);
    if (!d) fail(ErrorCode::kParseError, context_ + ": field '" + name + "' is not an ISO 8601 date");
    return *d;
  }

  std::optional<Date> opt_date(const char* name) {
    auto s = opt_str(name);
    if (!s) return std::nullopt;
    auto d = try_parse_date(*s);
    if (!d) fail(ErrorCode::kParseError, context_ + ": field '" + name + "' is not an ISO 8601 date");
    return d;
  }

  std::vector<std::string> str_list(const char* name) {
    std::vector<std::string> out;
    const Json* v = get(name);
    if (!v || v->is_null()) return out;
    if (!v->is_array()) fail(ErrorCode::kParseError, context_ + ": field '" + name + "' must be a list");
    for (const auto& e : *v) {
      if (!e.is_string()) fail(ErrorCode::kParseError, context_ + ": field '" + name + "' must hold strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  Metadata metadata(const char* name) {
    Metadata out;
    const Json* v = get(name);
    if (!v || v->is_null()) return out;
    if (!v->is_object()) fail(ErrorCode::kParseError, context_ + ": field '" + name + "' must be an object");
    for (auto it = v->begin(); it != v->end(); ++it) {
      const Json& x = it.value();
      if (x.is_boolean()) out[it.key()] = x.get<bool>();
      else if (x.is_number_integer()) out[it.key()] = x.get<std::int64_t>();
      else if (x.is_number_float()) out[it.key()] = x.get<double>();
      else if (x.is_string()) out[it.key()] = x.get<std::string>();
      else fail(ErrorCode::kParseError, context_ + ": metadata '" + it.key() + "' must be a scalar");
    }
    return out;
  }

  const Json& raw(const char* name) {
    const Json* v = get(name);
    if (!v) fail(ErrorCode::kParseError, context_ + ": missing field '" + name + "'");
    return *v;
  }

  bool has(const char* name) const { return j_.contains(name); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail(ErrorCode::kParseError, context_ + ": unknown field '" + it.key() + "'");
    }
  }

 private:
  const Json* get(const char* name) {
    seen_.insert(name);
    auto it = j_.find(name);
    return it == j_.end() ? nullptr : &*it;
  }

  const Json& j_;
  std::string context_;
  std::set<std::string> seen_;
};

inline std::string record_context(const char* kind, const Json& j) {
  if (j.is_object() && j.contains("id") && j["id"].is_string()) {
    return std::string(kind) + " '" + j["id"].get<std::string>() + "'";
  }
  return kind;
}

inline Item item_from_json(const Json& j) {
  StrictObject o(j, record_context("item", j));
  Item i;
  i.id = o.str("id");
  try {
    i.kind = parse_item_kind(o.str("kind"));
  } catch (const Error& e) {
    fail(ErrorCode::kParseError, record_context("item", j) + ": " + e.message());
  }
  i.type_id = o.str("type_id");
  i.label = o.str("label");
  i.uri = o.opt_str("uri");
  i.parent = o.opt_str("parent");
  i.children = o.str_list("children");
  i.metadata = o.metadata("metadata");
  o.finish();
  return i;
}

inline Theme theme_from_json(const Json& j) {
  StrictObject o(j, record_context("theme", j));
  Theme t;
  t.id = o.str("id");
  t.label = o.str("label");
  t.uri = o.opt_str("uri");
  t.parents = o.str_list("parents");
  t.children = o.str_list("children");
  t.members = o.str_list("members");
  t.metadata = o.metadata("metadata");
  o.finish();
  return t;
}

inline TimeInterval interval_from_json(const Json& j, const std::string& context) {
  StrictObject o(j, context + " validity_interval");
  TimeInterval t;
  t.start = o.date("start");
  t.end = o.opt_date("end");
  o.finish();
  return t;
}

inline Version version_from_json(const Json& j) {
  const std::string ctx = record_context("version", j);
  StrictObject o(j, ctx);
  Version v;
  v.id = o.str("id");
  v.item = o.str("item");
  v.validity_interval = interval_from_json(o.raw("validity_interval"), ctx);
  v.uri = o.opt_str("uri");
  v.parents = o.str_list("parents");
  v.metadata = o.metadata("metadata");
  o.finish();
  return v;
}

inline Action action_from_json(const Json& j) {
  StrictObject o(j, record_context("action", j));
  Action a;
  a.id = o.str("id");
  a.type = o.str("type");
  a.date = o.date("date");
  a.source_version = o.str("source_version");
  a.terminates_version = o.opt_str("terminates_version");
  a.produces_version = o.opt_str("produces_version");
  a.metadata = o.metadata("metadata");
  o.finish();
  return a;
}

inline TextUnit text_unit_from_json(const Json& j) {
  const std::string ctx = record_context("text unit", j);
  StrictObject o(j, ctx);
  TextUnit t;
  t.id = o.str("id");
  try {
    t.source_node_type = parse_node_type(o.str("source_node_type"));
  } catch (const Error& e) {
    fail(ErrorCode::kParseError, ctx + ": " + e.message());
  }
  t.source_node_id = o.str("source_node_id");
  t.language = o.str("language");
  t.aspect = o.str("aspect");
  t.content = o.str("content");
  o.finish();
  return t;
}

inline ItemType item_type_from_json(const Json& j) {
  StrictObject o(j, record_context("item type", j));
  ItemType t;
  t.id = o.str("id");
  t.label = o.str("label");
  t.parents = o.str_list("parents");
  o.finish();
  return t;
}

inline Ontology ontology_from_json(const Json& j) {
  StrictObject o(j, "ontology");
  Ontology ont;
  ont.action_types = o.str_list("action_types");
  const Json& types = o.has("item_types") ? o.raw("item_types") : Json::array();
  if (!types.is_array()) fail(ErrorCode::kParseError, "ontology: item_types must be a list");
  for (const auto& t : types) ont.item_types.push_back(item_type_from_json(t));
  o.finish();
  return ont;
}

template <typename T, typename F>
std::vector<T> list_from_json(const Json& j, const char* what, F&& parse) {
  if (!j.is_array()) fail(ErrorCode::kParseError, std::string(what) + ": expected a list of records");
  std::vector<T> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(parse(e));
  return out;
}

// Whole corpus as one JSON document (used by snapshots and digests).
inline Json to_json(const Corpus& c) {
  Json j = Json::object();
  j["items"] = to_json_list(c.items);
  j["themes"] = to_json_list(c.themes);
  j["versions"] = to_json_list(c.versions);
  j["actions"] = to_json_list(c.actions);
  j["textunits"] = to_json_list(c.text_units);
  j["ontology"] = to_json(c.ontology);
  return j;
}

inline Corpus corpus_from_json(const Json& j) {
  StrictObject o(j, "corpus");
  Corpus c;
  c.items = list_from_json<Item>(o.raw("items"), "items", item_from_json);
  c.themes = list_from_json<Theme>(o.raw("themes"), "themes", theme_from_json);
  c.versions = list_from_json<Version>(o.raw("versions"), "versions", version_from_json);
  c.actions = list_from_json<Action>(o.raw("actions"), "actions", action_from_json);
  c.text_units = list_from_json<TextUnit>(o.raw("textunits"), "textunits", text_unit_from_json);
  c.ontology = ontology_from_json(o.raw("ontology"));
  o.finish();
  return c;
}

}  // namespace satgraph
