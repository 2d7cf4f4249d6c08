#pragma once

// Plan execution with a hash-chained NDJSON audit log, and its verifier.
//
// Line 1 is a header; each following line is one step record. A record's
// chained_digest is sha256(prev_digest || canonical record without
// chained_digest), and the first record chains from the plan digest.

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "satgraph/plan.hpp"

namespace satgraph {

inline constexpr std::string_view kAuditFormat = "satgraph-audit/1";

inline bool is_resolver_primitive(const std::string& name) {
  return name == "resolveItemReference" || name == "resolveThemeReference";
}

inline Json to_json(const Error& e) {
  Json details = Json::object();
  for (const auto& [k, v] : e.details()) details[k] = v;
  return {{"code", std::string(to_string(e.code()))}, {"message", e.message()}, {"details", details}};
}

// Class used for verification; mapOverList inherits its inner primitive's.
inline PrimitiveClass step_class(const std::string& primitive, const Json& args) {
  const PrimitiveSpec& spec = require_primitive(primitive);
  if (primitive == "mapOverList" && args.is_object() && args.contains("primitive") && args["primitive"].is_string()) {
    if (const PrimitiveSpec* inner = find_primitive(args["primitive"].get<std::string>())) {
      if (inner->cls == PrimitiveClass::kDiscovery) return PrimitiveClass::kDiscovery;
    }
  }
  return spec.cls;
}

// Replaces bindings with values from `results` (keyed by step id).
inline Json resolve_bindings(const Plan& plan, const Json& v, const std::map<std::string, Json>& results) {
  if (v.is_object()) {
    if (v.contains("$ref")) {
      const std::string target = plan.steps.at(plan.names.at(v["$ref"].get<std::string>())).id;
      auto it = results.find(target);
      if (it == results.end()) fail(ErrorCode::kBadBinding, "step '" + target + "' has no result", {{"ref", target}});
      const std::string path = v.contains("path") ? v["path"].get<std::string>() : "";
      const Json* x = lookup_path(it->second, path);
      if (!x) {
        fail(ErrorCode::kBadBinding, "path '" + path + "' not found in result of step '" + target + "'",
             {{"ref", target}, {"path", path}});
      }
      return *x;
    }
    Json out = Json::object();
    for (auto it = v.begin(); it != v.end(); ++it) out[it.key()] = resolve_bindings(plan, it.value(), results);
    return out;
  }
  if (v.is_array()) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(resolve_bindings(plan, x, results));
    return out;
  }
  return v;
}

// Applies the candidate policy to a resolver's ranked list.
inline Json apply_candidate_policy(const Json& candidates, const CandidatePolicy& policy) {
  Json kept = Json::array();
  switch (policy.mode) {
    case CandidatePolicy::Mode::kTakeTop:
      if (candidates.empty()) fail(ErrorCode::kAmbiguousResolution, "resolver returned no candidates");
      return {{"candidates", candidates}, {"selected", candidates[0]}};
    case CandidatePolicy::Mode::kRequireUnique:
      for (const auto& c : candidates) {
        if (c["confidence"].get<double>() >= policy.threshold) kept.push_back(c);
      }
      if (kept.size() != 1) {
        fail(ErrorCode::kAmbiguousResolution,
             std::to_string(kept.size()) + " candidates reach confidence " + std::to_string(policy.threshold),
             {{"qualifying", std::to_string(kept.size())}});
      }
      return {{"candidates", candidates}, {"selected", kept[0]}};
    case CandidatePolicy::Mode::kThreshold:
      for (const auto& c : candidates) {
        if (c["confidence"].get<double>() >= policy.threshold) kept.push_back(c);
      }
      if (kept.empty()) {
        fail(ErrorCode::kAmbiguousResolution, "no candidate reaches confidence " + std::to_string(policy.threshold));
      }
      return {{"candidates", kept}, {"selected", kept[0]}};
  }
  return candidates;
}

inline Json run_step(const Engine& engine, const Plan& plan, const PlanStep& step, const Json& args,
                     const CallContext& cc) {
  Json result = engine.call(step.primitive, args, cc);
  if (is_resolver_primitive(step.primitive)) result = apply_candidate_policy(result, plan.policy_for(step));
  return result;
}

struct ExecutionOptions {
  std::optional<std::string> pinned_now;  // overrides the plan's
  bool record_timing = false;
};

struct ExecutionResult {
  std::string plan_digest;
  std::string pinned_now;
  Json outputs = Json::object();  // bind_as (or step id) -> result
  std::vector<std::string> audit;  // header then one line per executed step
  std::optional<Error> failure;

  bool ok() const { return !failure.has_value(); }
  std::string audit_text() const {
    std::string out;
    for (const auto& l : audit) out += l + "\n";
    return out;
  }
};

inline Json audit_header(const Plan& plan, const std::string& digest, const std::string& store_digest,
                         const std::string& pinned_now, bool record_timing) {
  Json h = Json::object();
  h["format"] = std::string(kAuditFormat);
  h["hash"] = std::string(kDigestAlgorithm);
  h["plan_id"] = plan.id;
  h["plan_digest"] = digest;
  h["store_digest"] = store_digest;
  h["pinned_now"] = pinned_now;
  h["record_timing"] = record_timing;
  return h;
}

inline std::string chain_digest(const std::string& prev, const Json& body) {
  return sha256_hex(prev + canonical_dump(body));
}

inline std::string resolve_pinned_now(const Plan& plan, const ExecutionOptions& opts) {
  std::string now = opts.pinned_now ? *opts.pinned_now : plan.options.pinned_now.value_or(utc_now_iso());
  if (!try_parse_date(now)) fail(ErrorCode::kInvalidArgument, "pinned_now is not an ISO 8601 instant: '" + now + "'");
  return now;
}

// Runs every step in order. Stops at the first failure, which is logged as
// the final record and reported in ExecutionResult::failure. `sink` sees
// each audit line as soon as it is written.
inline ExecutionResult execute_plan(const Engine& engine, const Plan& plan, const ExecutionOptions& opts = {},
                                    const std::function<void(const std::string&)>& sink = {}) {
  ExecutionResult out;
  out.plan_digest = plan_digest(plan);
  out.pinned_now = resolve_pinned_now(plan, opts);
  const CallContext cc = CallContext::at(out.pinned_now);
  auto emit = [&](std::string line) {
    if (sink) sink(line);
    out.audit.push_back(std::move(line));
  };
  emit(canonical_dump(audit_header(plan, out.plan_digest, engine.store().digest(), out.pinned_now, opts.record_timing)));

  std::map<std::string, Json> results;
  std::string prev = out.plan_digest;
  size_t seq = 0;
  for (size_t idx : plan.order) {
    const PlanStep& step = plan.steps[idx];
    Json args(nullptr);
    Json result(nullptr);
    std::optional<Error> err;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      args = resolve_bindings(plan, step.args, results);
      result = run_step(engine, plan, step, args, cc);
    } catch (const Error& e) {
      err = e;
    } catch (const std::exception& e) {
      err = Error(ErrorCode::kInvalidArgument, e.what());
    }
    const auto t1 = std::chrono::steady_clock::now();

    Json rec = Json::object();
    rec["seq"] = seq++;
    rec["step"] = step.id;
    rec["primitive"] = step.primitive;
    rec["class"] = std::string(to_string(step_class(step.primitive, args.is_null() ? step.args : args)));
    rec["args"] = args;
    rec["status"] = err ? "error" : "ok";
    rec["result"] = err ? Json(nullptr) : result;
    rec["error"] = err ? to_json(*err) : Json(nullptr);
    rec["result_digest"] = sha256_hex(canonical_dump(err ? rec["error"] : result));
    rec["pinned_now"] = out.pinned_now;
    if (opts.record_timing) {
      rec["duration_us"] = std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count();
    }
    rec["prev_digest"] = prev;
    const std::string chained = chain_digest(prev, rec);
    rec["chained_digest"] = chained;
    prev = chained;
    emit(canonical_dump(rec));

    if (err) {
      if (err->code() == ErrorCode::kAmbiguousResolution) {
        out.failure = Error(ErrorCode::kAmbiguousResolution, "step '" + step.id + "': " + err->message(),
                            {{"step", step.id}});
      } else {
        out.failure = Error(ErrorCode::kStepFailed,
                            "step '" + step.id + "' failed: " + std::string(to_string(err->code())) + ": " + err->message(),
                            {{"step", step.id}, {"cause", std::string(to_string(err->code()))}});
      }
      break;
    }
    results[step.id] = result;
    out.outputs[step.bind_as.value_or(step.id)] = result;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verification

enum class StepStatus { kVerified, kReplayMismatch, kChainBroken };

inline constexpr std::string_view to_string(StepStatus s) {
  switch (s) {
    case StepStatus::kVerified: return "verified";
    case StepStatus::kReplayMismatch: return "replay-mismatch";
    case StepStatus::kChainBroken: return "chain-broken";
  }
  return "chain-broken";
}

struct StepVerification {
  std::string step;
  StepStatus status = StepStatus::kVerified;
  std::string reason;
};

struct VerificationReport {
  std::vector<std::string> header_issues;
  std::vector<StepVerification> steps;
  std::vector<std::string> missing_steps;

  bool ok() const {
    if (!header_issues.empty() || !missing_steps.empty()) return false;
    for (const auto& s : steps) {
      if (s.status != StepStatus::kVerified) return false;
    }
    return true;
  }
};

inline Json to_json(const VerificationReport& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"step", s.step}, {"status", std::string(to_string(s.status))},
                     {"reason", s.reason.empty() ? Json(nullptr) : Json(s.reason)}});
  }
  Json j = Json::object();
  j["ok"] = r.ok();
  j["header_issues"] = r.header_issues;
  j["steps"] = std::move(steps);
  j["missing_steps"] = r.missing_steps;
  return j;
}

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  size_t pos = 0;
  while (pos < text.size()) {
    const size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      out.push_back(text.substr(pos));
      break;
    }
    out.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

inline const Json& field(const Json& j, const char* key) {
  static const Json null_json(nullptr);
  if (!j.is_object()) return null_json;
  auto it = j.find(key);
  return it == j.end() ? null_json : *it;
}

inline Json error_json(const std::function<Json()>& f) {
  try {
    return f();
  } catch (const Error& e) {
    return to_json(e);
  } catch (const std::exception& e) {
    return to_json(Error(ErrorCode::kInvalidArgument, e.what()));
  }
}

inline std::optional<Json> parse_line(std::string_view line) {
  try {
    return Json::parse(line.begin(), line.end());
  } catch (const Json::exception&) {
    return std::nullopt;
  }
}

}  // namespace detail

// Checks an audit log against the plan and the engine's store. Never throws
// on malformed input; every problem is reported.
inline VerificationReport verify_audit_log(const Engine& engine, const Plan& plan, std::string_view audit) {
  VerificationReport rep;
  const std::string digest = plan_digest(plan);
  const auto lines = detail::split_lines(audit);
  auto all_missing = [&] {
    for (size_t idx : plan.order) rep.missing_steps.push_back(plan.steps[idx].id);
    return rep;
  };
  if (lines.empty()) {
    rep.header_issues.push_back("audit log is empty");
    return all_missing();
  }

  // Header
  const auto header = detail::parse_line(lines[0]);
  using detail::field;
  if (!header || !field(*header, "pinned_now").is_string() || !field(*header, "record_timing").is_boolean()) {
    rep.header_issues.push_back("header is unreadable");
    return all_missing();
  }
  const std::string pinned_now = field(*header, "pinned_now").get<std::string>();
  const bool timing = field(*header, "record_timing").get<bool>();
  if (!try_parse_date(pinned_now)) {
    rep.header_issues.push_back("header pinned_now is not an ISO 8601 instant");
    return all_missing();
  }
  const Json expected = audit_header(plan, digest, engine.store().digest(), pinned_now, timing);
  if (std::string_view(canonical_dump(expected)) != lines[0]) {
    for (const char* k : {"format", "hash", "plan_id", "plan_digest", "store_digest"}) {
      if (field(*header, k) != field(expected, k)) {
        rep.header_issues.push_back(std::string("header ") + k + " does not match");
      }
    }
    if (rep.header_issues.empty()) rep.header_issues.push_back("header is not canonically encoded");
  }
  const CallContext cc = CallContext::at(pinned_now);

  std::map<std::string, Json> results;
  std::string running = digest;
  bool stopped = false;
  size_t k = 0;
  for (; k + 1 < lines.size(); ++k) {
    const std::string_view raw = lines[k + 1];
    const bool extra = k >= plan.order.size() || stopped;
    const PlanStep* step = extra ? nullptr : &plan.steps[plan.order[k]];
    StepVerification sv{step ? step->id : "#" + std::to_string(k), StepStatus::kVerified, ""};
    auto broken = [&](const std::string& why) {
      if (sv.status != StepStatus::kChainBroken) sv.reason = why;
      sv.status = StepStatus::kChainBroken;
    };
    auto mismatch = [&](const std::string& why) {
      if (sv.status == StepStatus::kVerified) {
        sv.status = StepStatus::kReplayMismatch;
        sv.reason = why;
      }
    };

    const auto rec = detail::parse_line(raw);
    if (!rec || !rec->is_object() || !rec->contains("chained_digest")) {
      broken("record is unreadable");
      running = sha256_hex(running + std::string(raw));
      rep.steps.push_back(sv);
      continue;
    }
    Json body = *rec;
    body.erase("chained_digest");
    const std::string computed = chain_digest(running, body);
    if (field(*rec, "prev_digest") != running || field(*rec, "chained_digest") != computed) {
      broken("hash chain does not link");
    }
    running = computed;
    if (std::string_view(canonical_dump(*rec)) != raw) broken("record is not canonically encoded");
    if (extra) {
      broken(stopped ? "record after a failed step" : "record beyond the end of the plan");
      rep.steps.push_back(sv);
      continue;
    }

    const Json& r = *rec;
    const bool is_error = field(r, "status") == "error";
    const bool shape_ok = field(r, "seq") == k && field(r, "step") == step->id &&
                          field(r, "primitive") == step->primitive && field(r, "pinned_now") == pinned_now &&
                          r.contains("args") && r.contains("result") && r.contains("error") &&
                          r.contains("duration_us") == timing && (is_error || field(r, "status") == "ok");
    if (!shape_ok) {
      broken("record does not match the plan step");
      rep.steps.push_back(sv);
      stopped = stopped || is_error;
      continue;
    }
    const Json& payload = is_error ? field(r, "error") : field(r, "result");
    if (field(r, "result_digest") != sha256_hex(canonical_dump(payload))) broken("result digest does not match result");

    // Provenance: arguments must re-derive from earlier logged results.
    std::optional<Error> derive_err;
    Json derived(nullptr);
    try {
      derived = resolve_bindings(plan, step->args, results);
    } catch (const Error& e) {
      derive_err = e;
    }
    if (derived != field(r, "args")) mismatch("arguments do not derive from earlier results");

    const PrimitiveClass cls = step_class(step->primitive, derived.is_null() ? step->args : derived);
    if (field(r, "class") != std::string(to_string(cls))) mismatch("record class does not match the primitive");

    // Deterministic steps and combinators are replayed.
    if (cls != PrimitiveClass::kDiscovery && sv.status == StepStatus::kVerified) {
      const Json replayed = derive_err ? to_json(*derive_err)
                                       : detail::error_json([&] { return run_step(engine, plan, *step, derived, cc); });
      if (field(r, "result_digest") != sha256_hex(canonical_dump(replayed))) {
        mismatch("replay produced a different result");
      }
    }

    if (!is_error) results[step->id] = field(r, "result");
    stopped = stopped || is_error;
    rep.steps.push_back(sv);
  }
  if (!stopped) {
    for (size_t i = k; i < plan.order.size(); ++i) rep.missing_steps.push_back(plan.steps[plan.order[i]].id);
  }
  return rep;
}

}  // namespace satgraph
