#pragma once

// Plan combinators: small pure functions over the JSON results of earlier
// steps. Included from registry.hpp once Engine is complete.

#include <set>
#include <string>
#include <vector>

#include "satgraph/registry.hpp"
#include "satgraph/text.hpp"

namespace satgraph {

// Dotted path lookup: object keys, or decimal indices into arrays. Returns
// nullptr when any segment is missing.
inline const Json* lookup_path(const Json& root, const std::string& path) {
  const Json* cur = &root;
  if (path.empty()) return cur;
  size_t pos = 0;
  while (pos <= path.size()) {
    const size_t dot = path.find('.', pos);
    const std::string seg = path.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (seg.empty()) return nullptr;
    if (cur->is_object()) {
      auto it = cur->find(seg);
      if (it == cur->end()) return nullptr;
      cur = &*it;
    } else if (cur->is_array()) {
      if (seg.find_first_not_of("0123456789") != std::string::npos || seg.size() > 9) return nullptr;
      const size_t idx = std::stoul(seg);
      if (idx >= cur->size()) return nullptr;
      cur = &(*cur)[idx];
    } else {
      return nullptr;
    }
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  return cur;
}

// Replaces every string equal to "$item" inside a template.
inline Json substitute_item(const Json& tmpl, const Json& item) {
  if (tmpl.is_string() && tmpl.get_ref<const std::string&>() == "$item") return item;
  if (tmpl.is_array()) {
    Json out = Json::array();
    for (const auto& e : tmpl) out.push_back(substitute_item(e, item));
    return out;
  }
  if (tmpl.is_object()) {
    Json out = Json::object();
    for (auto it = tmpl.begin(); it != tmpl.end(); ++it) out[it.key()] = substitute_item(it.value(), item);
    return out;
  }
  return tmpl;
}

namespace detail {

inline void flatten_into(const Json& v, Json& out, std::set<std::string>& seen) {
  if (v.is_array()) {
    for (const auto& e : v) flatten_into(e, out, seen);
    return;
  }
  if (v.is_null()) return;
  if (seen.insert(canonical_dump(v)).second) out.push_back(v);
}

inline bool field_holds(const Json& actual, const std::string& op, const Json& want) {
  if (op == "eq") return actual == want;
  if (op == "ne") return actual != want;
  if (op == "in") {
    for (const auto& w : want) {
      if (actual == w) return true;
    }
    return false;
  }
  if (op == "contains") {
    if (actual.is_array()) {
      for (const auto& a : actual) {
        if (a == want) return true;
      }
      return false;
    }
    return actual.is_string() && want.is_string() &&
           actual.get_ref<const std::string&>().find(want.get_ref<const std::string&>()) != std::string::npos;
  }
  int c = 0;
  if (actual.is_number() && want.is_number()) {
    const double a = actual.get<double>(), b = want.get<double>();
    c = a < b ? -1 : (a > b ? 1 : 0);
  } else if (actual.is_string() && want.is_string()) {
    c = actual.get_ref<const std::string&>().compare(want.get_ref<const std::string&>());
    c = c < 0 ? -1 : (c > 0 ? 1 : 0);
  } else {
    return false;
  }
  if (op == "lt") return c < 0;
  if (op == "le") return c <= 0;
  if (op == "gt") return c > 0;
  return c >= 0;  // ge
}

inline const std::set<std::string> kFilterOps = {"eq", "ne", "lt", "le", "gt", "ge", "in", "contains"};

inline void append_combinators(std::vector<PrimitiveSpec>& r) {
  using P = ParamType;
  namespace sc = schema;

  r.push_back({"selectByRank",
               PrimitiveClass::kCombinator,
               "Element at a 1-based rank of a list.",
               {{"list", P::kList, true, "ranked list"}, {"rank", P::kInteger, false, "1-based rank (default 1)"}},
               Json::object(),
               [](const Engine&, const Args& a, const CallContext&) {
                 const Json& xs = a.raw("list");
                 const int rank = a.opt_int("rank").value_or(1);
                 if (rank < 1) fail(ErrorCode::kInvalidArgument, "rank must be at least 1");
                 if (static_cast<size_t>(rank) > xs.size()) {
                   fail(ErrorCode::kNotFound, "list has " + std::to_string(xs.size()) + " elements, rank " +
                                                  std::to_string(rank) + " requested");
                 }
                 return xs[static_cast<size_t>(rank - 1)];
               }});

  r.push_back({"firstTextContainingToken",
               PrimitiveClass::kCombinator,
               "First TextUnit in a list whose content contains a word token.",
               {{"texts", P::kList, true, "TextUnit records"}, {"token", P::kString, true, "single word"}},
               sc::ref("TextUnit"),
               [](const Engine&, const Args& a, const CallContext&) {
                 const auto want = text::word_tokens(a.str("token"));
                 if (want.size() != 1) fail(ErrorCode::kInvalidArgument, "token must be exactly one word");
                 for (const auto& t : a.raw("texts")) {
                   if (!t.is_object() || !t.contains("content") || !t["content"].is_string()) {
                     fail(ErrorCode::kInvalidArgument, "texts must hold TextUnit records");
                   }
                   for (const auto& tok : text::word_tokens(t["content"].get_ref<const std::string&>())) {
                     if (tok == want.front()) return t;
                   }
                 }
                 fail(ErrorCode::kNotFound, "no text contains token '" + want.front() + "'");
               }});

  r.push_back({"setUnion",
               PrimitiveClass::kCombinator,
               "Flattens nested lists and drops duplicates, keeping first-seen order.",
               {{"lists", P::kList, true, "lists to merge"}},
               {{"type", "array"}},
               [](const Engine&, const Args& a, const CallContext&) {
                 Json out = Json::array();
                 std::set<std::string> seen;
                 flatten_into(a.raw("lists"), out, seen);
                 return out;
               }});

  r.push_back({"extractField",
               PrimitiveClass::kCombinator,
               "Value at a dotted path of each list element; null values are skipped.",
               {{"list", P::kList, true, "records"}, {"field", P::kString, true, "dotted path"}},
               {{"type", "array"}},
               [](const Engine&, const Args& a, const CallContext&) {
                 Json out = Json::array();
                 const std::string field = a.str("field");
                 for (const auto& e : a.raw("list")) {
                   const Json* v = lookup_path(e, field);
                   if (!v) fail(ErrorCode::kInvalidArgument, "element has no field '" + field + "'");
                   if (!v->is_null()) out.push_back(*v);
                 }
                 return out;
               }});

  r.push_back({"mapOverList",
               PrimitiveClass::kCombinator,
               "Applies a primitive to each list element, or instantiates a template per element.",
               {{"list", P::kList, true, "input elements"},
                {"primitive", P::kString, false, "primitive to call per element"},
                {"param", P::kString, false, "parameter that receives the element"},
                {"args", P::kObject, false, "extra arguments; \"$item\" is replaced by the element"},
                {"template", P::kAny, false, "value to instantiate when no primitive is given"}},
               {{"type", "array"}},
               [](const Engine& e, const Args& a, const CallContext& cc) {
                 Json out = Json::array();
                 const Json& xs = a.raw("list");
                 if (!a.has("primitive")) {
                   if (!a.has("template")) fail(ErrorCode::kInvalidArgument, "mapOverList needs primitive or template");
                   for (const auto& x : xs) out.push_back(substitute_item(a.raw("template"), x));
                   return out;
                 }
                 const std::string prim = a.str("primitive");
                 require_primitive(prim);
                 const Json base = a.has("args") ? a.raw("args") : Json::object();
                 for (const auto& x : xs) {
                   Json call = substitute_item(base, x);
                   if (a.has("param")) call[a.str("param")] = x;
                   out.push_back(e.call(prim, call, cc));
                 }
                 return out;
               }});

  r.push_back({"filterByField",
               PrimitiveClass::kCombinator,
               "Keeps list elements whose field satisfies a comparison; missing or null fields drop the element.",
               {{"list", P::kList, true, "records"},
                {"field", P::kString, true, "dotted path"},
                {"op", P::kString, true, "eq, ne, lt, le, gt, ge, in or contains"},
                {"value", P::kAny, true, "comparison operand"}},
               {{"type", "array"}},
               [](const Engine&, const Args& a, const CallContext&) {
                 const std::string op = a.str("op");
                 if (!kFilterOps.count(op)) fail(ErrorCode::kInvalidArgument, "unknown filter op '" + op + "'");
                 const Json& want = a.raw("value");
                 if (op == "in" && !want.is_array()) fail(ErrorCode::kInvalidArgument, "'in' needs a list value");
                 Json out = Json::array();
                 const std::string field = a.str("field");
                 for (const auto& e : a.raw("list")) {
                   const Json* v = lookup_path(e, field);
                   if (v && !v->is_null() && field_holds(*v, op, want)) out.push_back(e);
                 }
                 return out;
               }});
}

}  // namespace detail
}  // namespace satgraph
