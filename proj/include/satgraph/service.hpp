#pragma once

// HTTP binding. Router maps (method, path, body) to a response without any
// socket, so the transport adds nothing to the result bytes; Service mounts
// the same routes on a cpp-httplib server.

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>

#include <httplib.h>

#include "satgraph/executor.hpp"
#include "satgraph/openapi.hpp"

namespace satgraph {

inline constexpr const char* kPinnedNowHeader = "X-SatGraph-Pinned-Now";

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  std::map<std::string, std::string> headers;
};

struct ServiceOptions {
  int max_plans_in_flight = 4;
  std::chrono::milliseconds plan_wait{2000};
  std::optional<std::string> fixed_now;  // pins "now" for every request
  bool record_timing = false;
  size_t max_body_bytes = 16 << 20;
};

inline Json error_body(const Error& e) { return {{"error", to_json(e)}}; }

inline HttpResponse error_response(const Error& e) {
  return {http_status(e.code()), canonical_dump(error_body(e)), "application/json", {}};
}

class Router {
 public:
  Router(std::shared_ptr<const Engine> engine, ServiceOptions opts = {})
      : engine_(std::move(engine)), opts_(std::move(opts)), plan_slots_(opts_.max_plans_in_flight),
        openapi_(canonical_dump(openapi_document())) {}

  const Engine& engine() const { return *engine_; }
  const ServiceOptions& options() const { return opts_; }

  // `pinned_now` is the client's X-SatGraph-Pinned-Now request header, if any.
  HttpResponse handle(const std::string& method, const std::string& path, const std::string& body,
                      const std::optional<std::string>& pinned_now = std::nullopt) {
    try {
      if (path == "/v1/openapi.json") {
        if (method != "GET") return method_not_allowed();
        return {200, openapi_, "application/json", {}};
      }
      if (path == "/v1/health") {
        if (method != "GET") return method_not_allowed();
        return {200, canonical_dump(Json{{"status", "ok"}, {"store_digest", engine_->store().digest()}}),
                "application/json", {}};
      }
      if (method != "POST") return method_not_allowed();
      if (path == "/v1/plans/execute") return execute(body, pinned_now);
      if (path == "/v1/plans/verify") return verify(body);
      if (path.rfind("/v1/", 0) == 0 && path.find('/', 4) == std::string::npos) {
        return call(path.substr(4), body, pinned_now);
      }
      return {404, canonical_dump(Json{{"error", {{"code", "NotFound"}, {"message", "no route for " + path}, {"details", Json::object()}}}}),
              "application/json", {}};
    } catch (const Error& e) {
      return error_response(e);
    }
  }

  HttpResponse call(const std::string& primitive, const std::string& body, const std::optional<std::string>& now_hdr) {
    const PrimitiveSpec& spec = require_primitive(primitive);
    if (spec.cls == PrimitiveClass::kCombinator) {
      fail(ErrorCode::kUnknownPrimitive, "'" + primitive + "' is only available inside plans", {{"primitive", primitive}});
    }
    const Json args = parse_body(body, true);
    const std::string now = pinned(now_hdr);
    const CallContext cc = CallContext::at(now);
    HttpResponse r{200, canonical_dump(engine_->call(primitive, args, cc)), "application/json", {}};
    r.headers[kPinnedNowHeader] = now;
    return r;
  }

  // Runs a plan and returns the whole audit log. Returns 503 when no
  // execution slot frees up in time.
  HttpResponse execute(const std::string& body, const std::optional<std::string>& now_hdr) {
    const Plan plan = parse_plan(parse_body(body, false));
    const std::string now = plan_now(plan, now_hdr);
    if (!try_acquire_slot()) return overloaded();
    const std::shared_ptr<void> slot(nullptr, [this](void*) { release_slot(); });
    const ExecutionResult res = run_plan(plan, now, {});
    HttpResponse r{200, res.audit_text(), "application/x-ndjson", {}};
    r.headers[kPinnedNowHeader] = res.pinned_now;
    return r;
  }

  ExecutionResult run_plan(const Plan& plan, const std::string& now,
                           const std::function<void(const std::string&)>& line_sink) const {
    ExecutionOptions eo;
    eo.pinned_now = now;
    eo.record_timing = opts_.record_timing;
    return execute_plan(*engine_, plan, eo, line_sink);
  }

  bool try_acquire_slot() { return plan_slots_.try_acquire_for(opts_.plan_wait); }
  void release_slot() { plan_slots_.release(); }

  static HttpResponse overloaded() {
    return {503,
            canonical_dump(Json{{"error", {{"code", "Overloaded"}, {"message", "too many plans in flight"}, {"details", Json::object()}}}}),
            "application/json", {}};
  }

  HttpResponse verify(const std::string& body) {
    const Json req = parse_body(body, false);
    if (!req.is_object() || !req.contains("plan") || !req.contains("audit") || !req["audit"].is_string()) {
      fail(ErrorCode::kInvalidArgument, "verify expects {\"plan\": {...}, \"audit\": \"...\"}");
    }
    const Plan plan = parse_plan(req["plan"]);
    const VerificationReport rep = verify_audit_log(*engine_, plan, req["audit"].get<std::string>());
    return {200, canonical_dump(to_json(rep)), "application/json", {}};
  }

  // A plan's own pinned_now wins over the service clock, not over the header.
  std::string plan_now(const Plan& plan, const std::optional<std::string>& now_hdr) const {
    if (!now_hdr && plan.options.pinned_now) return *plan.options.pinned_now;
    return pinned(now_hdr);
  }

  std::string pinned(const std::optional<std::string>& now_hdr) const {
    const std::string now = now_hdr ? *now_hdr : opts_.fixed_now.value_or(utc_now_iso());
    if (!try_parse_date(now)) fail(ErrorCode::kInvalidArgument, std::string(kPinnedNowHeader) + " is not an ISO 8601 instant");
    return now;
  }

 private:
  static Json parse_body(const std::string& body, bool empty_is_object) {
    if (body.empty() && empty_is_object) return Json::object();
    try {
      return Json::parse(body);
    } catch (const Json::parse_error& e) {
      fail(ErrorCode::kParseError, std::string("request body is not valid JSON: ") + e.what());
    }
  }

  static HttpResponse method_not_allowed() {
    return {405, canonical_dump(Json{{"error", {{"code", "MethodNotAllowed"}, {"message", "method not allowed"}, {"details", Json::object()}}}}),
            "application/json", {}};
  }

  std::shared_ptr<const Engine> engine_;
  ServiceOptions opts_;
  std::counting_semaphore<> plan_slots_;
  std::string openapi_;
};

// Mounts a Router on an httplib server. Plan execution streams the audit
// log with chunked transfer encoding.
class Service {
 public:
  explicit Service(std::shared_ptr<const Engine> engine, ServiceOptions opts = {})
      : router_(std::make_shared<Router>(std::move(engine), std::move(opts))) {
    server_.set_payload_max_length(router_->options().max_body_bytes);
    auto header_now = [](const httplib::Request& req) -> std::optional<std::string> {
      if (!req.has_header(kPinnedNowHeader)) return std::nullopt;
      return req.get_header_value(kPinnedNowHeader);
    };
    auto send = [](httplib::Response& res, const HttpResponse& r) {
      res.status = r.status;
      for (const auto& [k, v] : r.headers) res.set_header(k, v);
      res.set_content(r.body, r.content_type);
    };
    auto router = router_;
    server_.Post("/v1/plans/execute", [router, header_now, send](const httplib::Request& req, httplib::Response& res) {
      std::shared_ptr<const Plan> plan;
      std::string now;
      try {
        Json j;
        try {
          j = Json::parse(req.body);
        } catch (const Json::parse_error& e) {
          fail(ErrorCode::kParseError, std::string("request body is not valid JSON: ") + e.what());
        }
        plan = std::make_shared<const Plan>(parse_plan(j));
        now = router->plan_now(*plan, header_now(req));
      } catch (const Error& e) {
        return send(res, error_response(e));
      }
      if (!router->try_acquire_slot()) return send(res, Router::overloaded());
      const std::shared_ptr<void> slot(nullptr, [router](void*) { router->release_slot(); });
      res.set_header(kPinnedNowHeader, now);
      res.set_chunked_content_provider("application/x-ndjson", [router, plan, now, slot](size_t, httplib::DataSink& sink) {
        router->run_plan(*plan, now, [&sink](const std::string& line) {
          const std::string l = line + "\n";
          sink.write(l.data(), l.size());
        });
        sink.done();
        return true;
      });
    });
    server_.Get(R"(/v1/.*)", [router, header_now, send](const httplib::Request& req, httplib::Response& res) {
      send(res, router->handle("GET", req.path, req.body, header_now(req)));
    });
    server_.Post(R"(/v1/.*)", [router, header_now, send](const httplib::Request& req, httplib::Response& res) {
      send(res, router->handle("POST", req.path, req.body, header_now(req)));
    });
    server_.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      std::string what = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        what = e.what();
      } catch (...) {
      }
      res.status = 500;
      res.set_content(canonical_dump(Json{{"error", {{"code", "Internal"}, {"message", what}, {"details", Json::object()}}}}),
                      "application/json");
    });
  }

  Router& router() { return *router_; }
  httplib::Server& server() { return server_; }

  // Binds to an ephemeral port and returns it (for tests).
  int bind_any(const std::string& host = "127.0.0.1") { return server_.bind_to_any_port(host); }
  bool listen_after_bind() { return server_.listen_after_bind(); }
  bool listen(const std::string& host, int port) { return server_.listen(host, port); }
  void stop() { server_.stop(); }
  void wait_until_ready() { server_.wait_until_ready(); }

 private:
  std::shared_ptr<Router> router_;
  httplib::Server server_;
};

}  // namespace satgraph
