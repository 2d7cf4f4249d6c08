#pragma once

// Plan documents: a DAG of primitive calls whose arguments may bind to the
// results of earlier steps.
//
//   {"schema_version": "1", "id": "...",
//    "options": {"pinned_now": "...", "candidate_policy": "take_top"},
//    "steps": [{"id": "s1", "primitive": "...", "args": {...}, "bind_as": "x"}]}
//
// A binding is an object {"$ref": "<step id or bind_as>", "path": "a.0.b"}
// anywhere inside args; "path" is optional.

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "satgraph/canonical.hpp"
#include "satgraph/digest.hpp"
#include "satgraph/registry.hpp"

namespace satgraph {

inline constexpr std::string_view kPlanSchemaVersion = "1";

struct CandidatePolicy {
  enum class Mode { kTakeTop, kRequireUnique, kThreshold };
  Mode mode = Mode::kTakeTop;
  double threshold = 0.0;
};

inline Json to_json(const CandidatePolicy& p) {
  switch (p.mode) {
    case CandidatePolicy::Mode::kTakeTop: return "take_top";
    case CandidatePolicy::Mode::kRequireUnique: return {{"require_unique", p.threshold}};
    case CandidatePolicy::Mode::kThreshold: return {{"threshold", p.threshold}};
  }
  return "take_top";
}

// "take_top" | {"require_unique": theta} | {"threshold": theta}
inline CandidatePolicy candidate_policy_from_json(const Json& j) {
  if (j.is_string() && j.get_ref<const std::string&>() == "take_top") return {};
  if (j.is_object() && j.size() == 1 && j.begin().value().is_number()) {
    const double t = j.begin().value().get<double>();
    if (t >= 0.0 && t <= 1.0) {
      if (j.begin().key() == "require_unique") return {CandidatePolicy::Mode::kRequireUnique, t};
      if (j.begin().key() == "threshold") return {CandidatePolicy::Mode::kThreshold, t};
    }
  }
  fail(ErrorCode::kParseError,
       "candidate_policy must be \"take_top\", {\"require_unique\": t} or {\"threshold\": t} with t in [0, 1]");
}

struct PlanStep {
  std::string id;
  std::string primitive;
  Json args = Json::object();
  std::optional<std::string> bind_as;
  std::optional<CandidatePolicy> candidate_policy;
  std::vector<size_t> deps;  // indices of steps this one binds to
};

struct PlanOptions {
  std::optional<std::string> pinned_now;
  CandidatePolicy candidate_policy;
};

struct Plan {
  std::string schema_version{kPlanSchemaVersion};
  std::string id;
  PlanOptions options;
  std::vector<PlanStep> steps;
  std::vector<size_t> order;                // execution order
  std::map<std::string, size_t> names;      // step id and bind_as -> index

  const PlanStep& step(const std::string& name) const { return steps.at(names.at(name)); }
  CandidatePolicy policy_for(const PlanStep& s) const { return s.candidate_policy.value_or(options.candidate_policy); }
};

inline Json to_json(const Plan& p) {
  Json j = Json::object();
  j["schema_version"] = p.schema_version;
  j["id"] = p.id;
  j["options"] = {{"pinned_now", optional_json(p.options.pinned_now)},
                  {"candidate_policy", to_json(p.options.candidate_policy)}};
  Json steps = Json::array();
  for (const auto& s : p.steps) {
    Json sj = Json::object();
    sj["id"] = s.id;
    sj["primitive"] = s.primitive;
    sj["args"] = s.args;
    sj["bind_as"] = optional_json(s.bind_as);
    sj["candidate_policy"] = s.candidate_policy ? to_json(*s.candidate_policy) : Json(nullptr);
    steps.push_back(std::move(sj));
  }
  j["steps"] = std::move(steps);
  return j;
}

// Digest of the canonical re-serialization, so formatting of the source file
// does not matter.
inline std::string plan_digest(const Plan& p) { return sha256_hex(canonical_dump(to_json(p))); }

struct PlanDiagnostic {
  std::string step;  // empty for plan-level problems
  ErrorCode code = ErrorCode::kParseError;
  std::string reason;
};

class PlanError : public Error {
 public:
  explicit PlanError(std::vector<PlanDiagnostic> diags)
      : Error(diags.front().code, summarize(diags), {{"violations", std::to_string(diags.size())}}),
        diagnostics_(std::move(diags)) {}
  const std::vector<PlanDiagnostic>& diagnostics() const { return diagnostics_; }

 private:
  static std::string summarize(const std::vector<PlanDiagnostic>& ds) {
    std::string out;
    for (const auto& d : ds) {
      if (!out.empty()) out += "; ";
      out += (d.step.empty() ? std::string("plan") : "step '" + d.step + "'") + ": " + std::string(to_string(d.code)) +
             ": " + d.reason;
    }
    return out;
  }
  std::vector<PlanDiagnostic> diagnostics_;
};

inline Json to_json(const PlanDiagnostic& d) {
  return {{"step", d.step.empty() ? Json(nullptr) : Json(d.step)}, {"code", std::string(to_string(d.code))}, {"reason", d.reason}};
}

// Visits every binding object inside a JSON value.
template <typename F>
void for_each_binding(const Json& v, F&& f) {
  if (v.is_object()) {
    if (v.contains("$ref")) {
      f(v);
      return;
    }
    for (const auto& [k, x] : v.items()) for_each_binding(x, f);
  } else if (v.is_array()) {
    for (const auto& x : v) for_each_binding(x, f);
  }
}

namespace detail {

inline bool well_formed_binding(const Json& b) {
  if (!b["$ref"].is_string()) return false;
  for (const auto& [k, x] : b.items()) {
    if (k == "$ref") continue;
    if (k != "path" || !x.is_string()) return false;
  }
  return true;
}

// Steps that lie on a dependency cycle (including self-loops).
inline std::set<size_t> steps_on_cycles(const std::vector<std::set<size_t>>& edges) {
  const size_t n = edges.size();
  std::set<size_t> out;
  for (size_t s = 0; s < n; ++s) {
    std::vector<bool> seen(n, false);
    std::vector<size_t> stack(edges[s].begin(), edges[s].end());
    while (!stack.empty()) {
      const size_t u = stack.back();
      stack.pop_back();
      if (u == s) {
        out.insert(s);
        break;
      }
      if (seen[u]) continue;
      seen[u] = true;
      for (size_t w : edges[u]) stack.push_back(w);
    }
  }
  return out;
}

}  // namespace detail

// Parses and checks a plan. Throws PlanError listing every violation.
inline Plan parse_plan(const Json& j) {
  std::vector<PlanDiagnostic> diags;
  auto diag = [&](const std::string& step, ErrorCode code, std::string reason) {
    diags.push_back({step, code, std::move(reason)});
  };
  Plan plan;
  std::vector<Json> raw_steps;
  try {
    StrictObject o(j, "plan");
    plan.schema_version = o.str("schema_version");
    plan.id = o.str("id");
    if (o.has("options") && !o.raw("options").is_null()) {
      StrictObject opt(o.raw("options"), "plan options");
      plan.options.pinned_now = opt.opt_str("pinned_now");
      if (plan.options.pinned_now && !try_parse_date(*plan.options.pinned_now)) {
        fail(ErrorCode::kParseError, "options.pinned_now is not an ISO 8601 instant");
      }
      if (opt.has("candidate_policy") && !opt.raw("candidate_policy").is_null()) {
        plan.options.candidate_policy = candidate_policy_from_json(opt.raw("candidate_policy"));
      }
      opt.finish();
    }
    const Json& steps = o.raw("steps");
    if (!steps.is_array()) fail(ErrorCode::kParseError, "steps must be a list");
    raw_steps.assign(steps.begin(), steps.end());
    o.finish();
  } catch (const Error& e) {
    throw PlanError({{"", ErrorCode::kParseError, e.message()}});
  }
  if (plan.schema_version != kPlanSchemaVersion) {
    diag("", ErrorCode::kParseError, "unsupported schema_version '" + plan.schema_version + "'");
  }
  if (plan.id.empty()) diag("", ErrorCode::kParseError, "plan id is empty");

  for (size_t i = 0; i < raw_steps.size(); ++i) {
    PlanStep s;
    const std::string label = raw_steps[i].is_object() && raw_steps[i].contains("id") && raw_steps[i]["id"].is_string()
                                  ? raw_steps[i]["id"].get<std::string>()
                                  : "#" + std::to_string(i + 1);
    try {
      StrictObject o(raw_steps[i], "step");
      s.id = o.str("id");
      s.primitive = o.str("primitive");
      if (o.has("args") && !o.raw("args").is_null()) s.args = o.raw("args");
      s.bind_as = o.opt_str("bind_as");
      if (o.has("candidate_policy") && !o.raw("candidate_policy").is_null()) {
        s.candidate_policy = candidate_policy_from_json(o.raw("candidate_policy"));
      }
      o.finish();
      if (!s.args.is_object()) fail(ErrorCode::kParseError, "args must be an object");
      if (s.id.empty()) fail(ErrorCode::kParseError, "step id is empty");
    } catch (const Error& e) {
      diag(label, ErrorCode::kParseError, e.message());
      s.id = label;
    }
    plan.steps.push_back(std::move(s));
  }

  for (size_t i = 0; i < plan.steps.size(); ++i) {
    const PlanStep& s = plan.steps[i];
    if (!plan.names.emplace(s.id, i).second) diag(s.id, ErrorCode::kParseError, "duplicate step id");
  }
  for (size_t i = 0; i < plan.steps.size(); ++i) {
    const PlanStep& s = plan.steps[i];
    if (!s.bind_as || *s.bind_as == s.id) continue;
    if (!plan.names.emplace(*s.bind_as, i).second) {
      diag(s.id, ErrorCode::kParseError, "bind_as '" + *s.bind_as + "' collides with another step name");
    }
  }

  // Primitive names and parameter names.
  for (auto& s : plan.steps) {
    if (s.primitive.empty()) continue;
    const PrimitiveSpec* spec = find_primitive(s.primitive);
    if (!spec) {
      std::string reason = "unknown primitive '" + s.primitive + "'";
      auto alias = primitive_aliases().find(s.primitive);
      if (alias != primitive_aliases().end()) reason += "; did you mean '" + alias->second + "'?";
      diag(s.id, ErrorCode::kUnknownPrimitive, reason);
      continue;
    }
    for (const auto& [k, v] : s.args.items()) {
      if (!spec->param(k)) diag(s.id, ErrorCode::kParseError, "unknown parameter '" + k + "' for " + s.primitive);
    }
    for (const auto& p : spec->params) {
      if (p.required && (!s.args.contains(p.name) || s.args[p.name].is_null())) {
        diag(s.id, ErrorCode::kParseError, "missing required parameter '" + p.name + "' for " + s.primitive);
      }
    }
  }

  // Bindings.
  std::vector<std::set<size_t>> edges(plan.steps.size());
  std::vector<std::vector<std::pair<size_t, std::string>>> forward(plan.steps.size());
  for (size_t i = 0; i < plan.steps.size(); ++i) {
    PlanStep& s = plan.steps[i];
    for_each_binding(s.args, [&](const Json& b) {
      if (!detail::well_formed_binding(b)) {
        diag(s.id, ErrorCode::kBadBinding, "binding must be {\"$ref\": step, \"path\": string}");
        return;
      }
      const std::string target = b["$ref"].get<std::string>();
      auto it = plan.names.find(target);
      if (it == plan.names.end()) {
        diag(s.id, ErrorCode::kBadBinding, "reference to unknown step '" + target + "'");
        return;
      }
      edges[i].insert(it->second);
      if (it->second >= i) forward[i].emplace_back(it->second, target);
    });
  }
  const std::set<size_t> cyclic = detail::steps_on_cycles(edges);
  for (size_t i = 0; i < plan.steps.size(); ++i) {
    if (cyclic.count(i)) {
      diag(plan.steps[i].id, ErrorCode::kCycleDetected, "step is part of a dependency cycle");
      continue;
    }
    for (const auto& [t, name] : forward[i]) {
      diag(plan.steps[i].id, ErrorCode::kBadBinding, "reference to later step '" + name + "'");
    }
  }

  if (!diags.empty()) {
    // Declaration order, plan-level problems first.
    std::stable_sort(diags.begin(), diags.end(), [&](const PlanDiagnostic& a, const PlanDiagnostic& b) {
      auto rank = [&](const PlanDiagnostic& d) {
        if (d.step.empty()) return size_t{0};
        auto it = plan.names.find(d.step);
        return it == plan.names.end() ? plan.steps.size() + 1 : it->second + 1;
      };
      return rank(a) < rank(b);
    });
    throw PlanError(std::move(diags));
  }

  for (size_t i = 0; i < plan.steps.size(); ++i) {
    plan.steps[i].deps.assign(edges[i].begin(), edges[i].end());
  }

  // Kahn's algorithm; ties broken by step id.
  std::vector<size_t> indegree(plan.steps.size(), 0);
  std::vector<std::vector<size_t>> users(plan.steps.size());
  for (size_t i = 0; i < plan.steps.size(); ++i) {
    indegree[i] = plan.steps[i].deps.size();
    for (size_t d : plan.steps[i].deps) users[d].push_back(i);
  }
  auto later = [&](size_t a, size_t b) { return plan.steps[a].id > plan.steps[b].id; };
  std::priority_queue<size_t, std::vector<size_t>, decltype(later)> ready(later);
  for (size_t i = 0; i < plan.steps.size(); ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  while (!ready.empty()) {
    const size_t u = ready.top();
    ready.pop();
    plan.order.push_back(u);
    for (size_t w : users[u]) {
      if (--indegree[w] == 0) ready.push(w);
    }
  }
  return plan;
}

inline Plan parse_plan_text(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw PlanError({{"", ErrorCode::kParseError, std::string("plan is not valid JSON: ") + e.what()}});
  }
  return parse_plan(j);
}

}  // namespace satgraph
