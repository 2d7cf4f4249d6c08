// satgraph: validate corpora, run primitives and plans, serve over HTTP.
//
// Exit codes: 0 success, 1 the input was checked and found invalid, a plan
// step failed or the query has no answer, 2 usage, I/O or parse error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "satgraph/satgraph.hpp"
#include "satgraph/service.hpp"

using namespace satgraph;

namespace {

struct Config {
  std::string format = "human";
  std::string scorer = "trigram";
  FusionWeights weights;
  std::string host = "127.0.0.1";
  int port = 8080;
  int max_plans_in_flight = 4;
  int plan_wait_ms = 2000;
};

// Optional JSON config named by SATGRAPH_CONFIG. Command-line flags win.
Config load_config() {
  Config c;
  const char* path = std::getenv("SATGRAPH_CONFIG");
  if (!path || !*path) return c;
  const Json j = parse_json(read_file(path), std::string("config ") + path);
  StrictObject o(j, "config");
  if (auto v = o.opt_str("format")) c.format = *v;
  if (auto v = o.opt_str("scorer")) c.scorer = *v;
  if (auto v = o.opt_str("host")) c.host = *v;
  if (o.has("port")) c.port = o.raw("port").get<int>();
  if (o.has("max_plans_in_flight")) c.max_plans_in_flight = o.raw("max_plans_in_flight").get<int>();
  if (o.has("plan_wait_ms")) c.plan_wait_ms = o.raw("plan_wait_ms").get<int>();
  if (o.has("fusion_weights")) c.weights = Args::fusion_weights(o.raw("fusion_weights"));
  o.finish();
  return c;
}

void print(const Json& j, const std::string& format) {
  if (format == "canonical") std::cout << canonical_dump(j) << "\n";
  else std::cout << j.dump(2) << "\n";
}

std::shared_ptr<const Engine> make_engine(const std::string& corpus, const Config& cfg) {
  return std::make_shared<const Engine>(open_store(corpus), EngineConfig{cfg.scorer, cfg.weights});
}

Json read_json_file(const std::string& path) { return parse_json(read_file(path), path); }

// Extra query flags: --<parameter> value, typed by the primitive's signature.
// Lists take JSON or a comma-separated string; objects take JSON.
Json flags_to_args(const PrimitiveSpec& spec, const std::vector<std::string>& extras, Json args) {
  static const std::map<std::string, std::string> kShort = {{"item", "item_id"}, {"at", "timestamp"}};
  for (size_t i = 0; i < extras.size(); ++i) {
    std::string name = extras[i], value;
    if (name.rfind("--", 0) != 0) fail(ErrorCode::kInvalidArgument, "unexpected argument '" + name + "'");
    name = name.substr(2);
    if (auto eq = name.find('='); eq != std::string::npos) {
      value = name.substr(eq + 1);
      name = name.substr(0, eq);
    } else {
      if (i + 1 >= extras.size()) fail(ErrorCode::kInvalidArgument, "flag --" + name + " needs a value");
      value = extras[++i];
    }
    if (!spec.param(name) && kShort.count(name)) name = kShort.at(name);
    const ParamSpec* p = spec.param(name);
    if (!p) fail(ErrorCode::kInvalidArgument, spec.name + " has no parameter '" + name + "'");
    switch (p->type) {
      case ParamType::kInteger:
      case ParamType::kNumber:
      case ParamType::kMetadataFilter:
      case ParamType::kPredicateMap:
      case ParamType::kTextUnitRequests:
      case ParamType::kFusionWeights:
      case ParamType::kList:
      case ParamType::kObject:
      case ParamType::kAny:
        args[name] = parse_json(value, "--" + name);
        break;
      case ParamType::kStringList:
      case ParamType::kIdList:
        if (!value.empty() && value.front() == '[') {
          args[name] = parse_json(value, "--" + name);
        } else {
          Json xs = Json::array();
          size_t pos = 0;
          while (pos <= value.size()) {
            const size_t comma = value.find(',', pos);
            xs.push_back(value.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
          }
          args[name] = xs;
        }
        break;
      default:
        args[name] = value;
    }
  }
  return args;
}

// Bad input exits 2; a well-formed request the data cannot answer exits 1.
int report_error(const Error& e) {
  std::cerr << canonical_dump(error_body(e)) << "\n";
  switch (e.code()) {
    case ErrorCode::kParseError:
    case ErrorCode::kIoError:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kUnknownPrimitive:
    case ErrorCode::kBadBinding:
    case ErrorCode::kCycleDetected:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  try {
    cfg = load_config();
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: bad config: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"satgraph: temporal graph of normative texts"};
  app.require_subcommand(1);
  std::string format = cfg.format;
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"human", "canonical"}));

  std::string corpus, primitive, args_text = "{}", args_file, now, plan_file, audit_file, out_file;
  bool timing = false;

  auto* validate = app.add_subcommand("validate", "check a corpus directory or snapshot against all invariants");
  validate->add_option("corpus", corpus, "corpus directory or snapshot")->required();

  auto* query = app.add_subcommand("query", "run one primitive");
  query->add_option("corpus", corpus, "corpus directory or snapshot")->required();
  query->add_option("primitive", primitive, "primitive name")->required();
  query->add_option("--args", args_text, "arguments as a JSON object");
  query->add_option("--args-file", args_file, "file holding the JSON arguments");
  query->add_option("--now", now, "pinned current instant (ISO 8601)");
  query->allow_extras();
  query->footer("Any primitive parameter may also be given as --<parameter> <value>.");

  auto* plan = app.add_subcommand("plan", "run or verify a plan");
  plan->require_subcommand(1);
  auto* run = plan->add_subcommand("run", "execute a plan and write its audit log");
  run->add_option("corpus", corpus, "corpus directory or snapshot")->required();
  run->add_option("plan", plan_file, "plan JSON file")->required();
  run->add_option("--audit", audit_file, "write the audit log here (default: stdout)");
  run->add_option("--now", now, "pinned current instant, overriding the plan's");
  run->add_flag("--timing", timing, "record step durations in the audit log");
  auto* verify = plan->add_subcommand("verify", "check an audit log against a plan and corpus");
  verify->add_option("corpus", corpus, "corpus directory or snapshot")->required();
  verify->add_option("plan", plan_file, "plan JSON file")->required();
  verify->add_option("audit", audit_file, "audit log (NDJSON)")->required();

  auto* snapshot = app.add_subcommand("snapshot", "write a binary snapshot of a validated corpus");
  snapshot->add_option("corpus", corpus, "corpus directory or snapshot")->required();
  snapshot->add_option("output", out_file, "snapshot file")->required();

  auto* serve = app.add_subcommand("serve", "serve the HTTP interface");
  serve->add_option("corpus", corpus, "corpus directory or snapshot")->required();
  serve->add_option("--host", cfg.host, "bind address");
  serve->add_option("--port", cfg.port, "port");
  serve->add_option("--max-plans", cfg.max_plans_in_flight, "plans executing at once");
  serve->add_option("--now", now, "pin the current instant for every request");

  app.add_subcommand("openapi", "print the interface description");
  app.add_subcommand("primitives", "list primitive names");

  for (CLI::App* sub : {validate, query, run, verify, snapshot, serve, app.get_subcommand("openapi"),
                        app.get_subcommand("primitives")}) {
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"human", "canonical"}));
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      try {
        const GraphStore::Ptr s = open_store(corpus);
        const StoreCounts n = s->counts();
        print({{"ok", true},
               {"digest", s->digest()},
               {"counts",
                {{"items", n.items}, {"themes", n.themes}, {"versions", n.versions}, {"actions", n.actions},
                 {"text_units", n.text_units}}}},
              format);
        return 0;
      } catch (const ValidationError& e) {
        print(to_json(e.report()), format);
        return 1;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kDuplicateId) throw;
        print({{"ok", false}, {"error", to_json(e)}}, format);
        return 1;
      }
    }
    if (query->parsed()) {
      const auto engine = make_engine(corpus, cfg);
      const Json base = args_file.empty() ? parse_json(args_text, "--args") : read_json_file(args_file);
      const Json args = flags_to_args(require_primitive(primitive), query->remaining(), base);
      const CallContext cc = CallContext::at(now.empty() ? utc_now_iso() : now);
      print(engine->call(primitive, args, cc), format);
      return 0;
    }
    if (run->parsed()) {
      const auto engine = make_engine(corpus, cfg);
      const Plan p = parse_plan(read_json_file(plan_file));
      ExecutionOptions eo;
      if (!now.empty()) eo.pinned_now = now;
      eo.record_timing = timing;
      const ExecutionResult r = execute_plan(*engine, p, eo);
      if (audit_file.empty()) {
        std::cout << r.audit_text();
      } else {
        write_file(audit_file, r.audit_text());
        print(r.outputs, format);
      }
      if (r.failure) {
        std::cerr << "error: " << to_string(r.failure->code()) << ": " << r.failure->message() << "\n";
        return 1;
      }
      return 0;
    }
    if (verify->parsed()) {
      const auto engine = make_engine(corpus, cfg);
      const Plan p = parse_plan(read_json_file(plan_file));
      const VerificationReport rep = verify_audit_log(*engine, p, read_file(audit_file));
      print(to_json(rep), format);
      return rep.ok() ? 0 : 1;
    }
    if (snapshot->parsed()) {
      const GraphStore::Ptr s = open_store(corpus);
      save_snapshot(*s, out_file);
      print({{"snapshot", out_file}, {"digest", s->digest()}}, format);
      return 0;
    }
    if (serve->parsed()) {
      ServiceOptions so;
      so.max_plans_in_flight = cfg.max_plans_in_flight;
      so.plan_wait = std::chrono::milliseconds(cfg.plan_wait_ms);
      if (!now.empty()) so.fixed_now = now;
      Service svc(make_engine(corpus, cfg), so);
      std::cerr << "listening on " << cfg.host << ":" << cfg.port << "\n";
      return svc.listen(cfg.host, cfg.port) ? 0 : 2;
    }
    if (app.got_subcommand("openapi")) {
      print(openapi_document(), format);
      return 0;
    }
    if (app.got_subcommand("primitives")) {
      Json out = Json::array();
      for (const auto& s : primitive_registry()) {
        out.push_back({{"name", s.name}, {"class", std::string(to_string(s.cls))}, {"summary", s.summary}});
      }
      print(out, format);
      return 0;
    }
  } catch (const ValidationError& e) {
    print(to_json(e.report()), format);
    return 2;
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
