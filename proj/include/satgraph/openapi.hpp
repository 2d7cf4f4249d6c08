#pragma once

// OpenAPI 3.1 description generated from the primitive registry. Component
// schemas mirror the canonical serializers field for field and forbid extra
// properties, so every response validates against the schema it advertises.

#include <string>

#include "satgraph/registry.hpp"

namespace satgraph {

namespace detail {

inline Json object_schema(std::initializer_list<std::pair<const char*, Json>> props) {
  Json p = Json::object();
  Json req = Json::array();
  for (const auto& [k, v] : props) {
    p[k] = v;
    req.push_back(k);
  }
  return {{"type", "object"}, {"properties", p}, {"required", req}, {"additionalProperties", false}};
}

inline Json str() { return {{"type", "string"}}; }
inline Json nullable_str() { return {{"type", {"string", "null"}}}; }
inline Json metadata_schema() {
  return {{"type", "object"}, {"additionalProperties", {{"type", {"string", "number", "integer", "boolean"}}}}};
}

}  // namespace detail

inline Json openapi_components() {
  using namespace detail;
  namespace sc = schema;
  Json s = Json::object();
  s["TimeInterval"] = object_schema({{"start", {{"type", "string"}, {"format", "date"}}},
                                     {"end", {{"type", {"string", "null"}}, {"format", "date"}}}});
  s["Item"] = object_schema({{"id", str()},
                             {"kind", {{"type", "string"}, {"enum", {"Work", "WorkComponent"}}}},
                             {"type_id", str()},
                             {"label", str()},
                             {"uri", nullable_str()},
                             {"parent", nullable_str()},
                             {"children", sc::string_list()},
                             {"metadata", metadata_schema()}});
  s["Theme"] = object_schema({{"id", str()},
                              {"label", str()},
                              {"uri", nullable_str()},
                              {"parents", sc::string_list()},
                              {"children", sc::string_list()},
                              {"members", sc::string_list()},
                              {"metadata", metadata_schema()}});
  s["Version"] = object_schema({{"id", str()},
                                {"item", str()},
                                {"validity_interval", sc::ref("TimeInterval")},
                                {"uri", nullable_str()},
                                {"parents", sc::string_list()},
                                {"metadata", metadata_schema()}});
  s["Action"] = object_schema({{"id", str()},
                               {"type", str()},
                               {"date", {{"type", "string"}, {"format", "date"}}},
                               {"source_version", str()},
                               {"terminates_version", nullable_str()},
                               {"produces_version", nullable_str()},
                               {"metadata", metadata_schema()}});
  s["TextUnit"] = object_schema({{"id", str()},
                                 {"source_node_type", {{"type", "string"}, {"enum", {"Item", "Theme", "Version", "Action"}}}},
                                 {"source_node_id", str()},
                                 {"language", str()},
                                 {"aspect", str()},
                                 {"content", str()}});
  s["RankedCandidate"] = object_schema({{"id", str()}, {"confidence", {{"type", "number"}}}});
  s["ScoredTextUnit"] = object_schema({{"text_unit", sc::ref("TextUnit")}, {"score", {{"type", "number"}}}});
  s["ScoredItem"] = object_schema({{"item", sc::ref("Item")}, {"score", {{"type", "number"}}}});
  s["CausalTrace"] = object_schema({{"creating_action", sc::ref("Action")},
                                    {"terminating_action", {{"anyOf", {sc::ref("Action"), {{"type", "null"}}}}}}});
  s["TextEdit"] = object_schema({{"op", {{"type", "string"}, {"enum", {"insert", "delete", "replace"}}}},
                                 {"position", {{"type", "integer"}, {"minimum", 0}}},
                                 {"tokens_a", sc::string_list()},
                                 {"tokens_b", sc::string_list()}});
  s["StructuralChange"] = object_schema(
      {{"change", {{"type", "string"}, {"enum", {"component_added", "component_removed"}}}}, {"item", str()}});
  s["TextDiffReport"] = object_schema({{"version_a", str()},
                                       {"version_b", str()},
                                       {"language", str()},
                                       {"textual_edits", sc::array_of(sc::ref("TextEdit"))},
                                       {"structural_changes", sc::array_of(sc::ref("StructuralChange"))}});
  s["TextUnitRequest"] = {
      {"type", "object"},
      {"properties",
       {{"source_node_type", {{"type", "string"}, {"enum", {"Item", "Theme", "Version", "Action"}}}},
        {"source_node_id", str()},
        {"language", str()},
        {"aspects", {{"anyOf", {sc::string_list(), {{"type", "null"}}}}}}}},
      {"required", {"source_node_type", "source_node_id", "language"}},
      {"additionalProperties", false}};
  s["PredicateMap"] = {{"type", "object"},
                       {"description", "key -> scalar (equality) or {eq|in|<|<=|>|>=: operand}, ANDed"}};
  s["MetadataFilter"] = {{"type", "object"},
                         {"properties",
                          {{"item_metadata_filter", sc::ref("PredicateMap")},
                           {"version_metadata_filter", sc::ref("PredicateMap")}}},
                         {"additionalProperties", false}};
  s["FusionWeights"] = {{"type", "object"},
                        {"properties", {{"lexical", {{"type", "number"}, {"minimum", 0}}},
                                        {"semantic", {{"type", "number"}, {"minimum", 0}}}}},
                        {"additionalProperties", false}};
  Json codes = Json::array();
  for (ErrorCode c : kAllErrorCodes) codes.push_back(std::string(to_string(c)));
  s["ApiError"] = object_schema(
      {{"error", object_schema({{"code", {{"type", "string"}, {"enum", codes}}},
                                {"message", str()},
                                {"details", {{"type", "object"}, {"additionalProperties", {{"type", "string"}}}}}})}});
  return s;
}

inline Json openapi_document() {
  Json paths = Json::object();
  const Json error_response = {{"description", "error"},
                               {"content", {{"application/json", {{"schema", schema::ref("ApiError")}}}}}};
  for (const auto& spec : primitive_registry()) {
    if (spec.cls == PrimitiveClass::kCombinator) continue;
    Json props = Json::object();
    Json required = Json::array();
    for (const auto& p : spec.params) {
      Json ps = schema::for_param(p.type);
      ps["description"] = p.description;
      props[p.name] = ps;
      if (p.required) required.push_back(p.name);
    }
    Json body = {{"type", "object"}, {"properties", props}, {"additionalProperties", false}};
    if (!required.empty()) body["required"] = required;
    Json op = {{"operationId", spec.name},
               {"summary", spec.summary},
               {"x-primitive-class", std::string(to_string(spec.cls))},
               {"requestBody", {{"required", true}, {"content", {{"application/json", {{"schema", body}}}}}}},
               {"responses",
                {{"200",
                  {{"description", "canonical JSON result"},
                   {"headers", {{"X-SatGraph-Pinned-Now", {{"schema", {{"type", "string"}}}}}}},
                   {"content", {{"application/json", {{"schema", spec.result_schema}}}}}}},
                 {"400", error_response},
                 {"404", error_response},
                 {"409", error_response},
                 {"422", error_response}}}};
    paths["/v1/" + spec.name] = {{"post", op}};
  }
  paths["/v1/plans/execute"] = {
      {"post",
       {{"operationId", "executePlan"},
        {"summary", "Runs a plan; streams the audit log as NDJSON, one record per line."},
        {"requestBody", {{"required", true}, {"content", {{"application/json", {{"schema", {{"type", "object"}}}}}}}}},
        {"responses",
         {{"200", {{"description", "audit log"}, {"content", {{"application/x-ndjson", {{"schema", {{"type", "string"}}}}}}}}},
          {"400", error_response},
          {"503", {{"description", "too many plans in flight"}}}}}}}};
  paths["/v1/plans/verify"] = {
      {"post",
       {{"operationId", "verifyAuditLog"},
        {"summary", "Checks an audit log against its plan and the loaded store."},
        {"requestBody",
         {{"required", true},
          {"content",
           {{"application/json",
             {{"schema",
               {{"type", "object"},
                {"properties", {{"plan", {{"type", "object"}}}, {"audit", {{"type", "string"}}}}},
                {"required", {"plan", "audit"}}}}}}}}}},
        {"responses", {{"200", {{"description", "verification report"}}}, {"400", error_response}}}}}};
  Json doc = Json::object();
  doc["openapi"] = "3.1.0";
  doc["info"] = {{"title", "SatGraph query engine"}, {"version", "1.0.0"}};
  doc["paths"] = paths;
  doc["components"] = {{"schemas", openapi_components()}};
  return doc;
}

}  // namespace satgraph
