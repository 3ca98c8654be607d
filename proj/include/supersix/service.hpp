#pragma once

#include <httplib.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "supersix/advisor.hpp"
#include "supersix/errors.hpp"
#include "supersix/export.hpp"

namespace supersix {

inline constexpr int kDefaultPort = 8650;

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = kDefaultPort;
  std::string cors_origin = "*";
};

// Pretty-printed JSON with a trailing newline; the CLI prints the same bytes.
inline std::string render_json(const Json& j) { return j.dump(2) + "\n"; }

struct ServiceReply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

inline ServiceReply json_reply(const Json& j, int status = 200) { return {status, render_json(j)}; }

inline ServiceReply error_reply(int status, const std::string& message) {
  return json_reply(Json{{"error", message}, {"status", status}}, status);
}

namespace detail {

inline std::optional<int> query_int(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  const std::string v = req.get_param_value(name);
  try {
    std::size_t used = 0;
    const int out = std::stoi(v, &used);
    if (used != v.size()) return std::nullopt;
    return out;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline std::optional<int> path_int(const std::string& text) {
  try {
    std::size_t used = 0;
    const int out = std::stoi(text, &used);
    if (used != text.size()) return std::nullopt;
    return out;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace detail

// Request handling without the socket layer, so it can be exercised directly.
inline ServiceReply advice_reply(const Advisor& advisor, std::optional<int> lid, std::optional<int> mover,
                                 std::optional<int> opponent) {
  if (!lid || !mover || !opponent) return error_reply(400, "lid, mover and opponent must be integers");
  try {
    return json_reply(advice_json(advisor.advice({*lid, *mover, *opponent})));
  } catch (const CapExceeded& e) {
    return error_reply(422, e.what());
  } catch (const InvalidState& e) {
    return error_reply(400, e.what());
  }
}

inline ServiceReply table_reply(const Advisor& advisor, std::optional<int> total) {
  if (!total) return error_reply(404, "no such table");
  try {
    return json_reply(advisor.level(*total));
  } catch (const MissingLevel& e) {
    return error_reply(404, e.what());
  }
}

inline ServiceReply optimal_reply(const Advisor& advisor, std::optional<int> total) {
  if (!total) return error_reply(404, "no such level");
  try {
    return json_reply(advisor.optimal(*total));
  } catch (const MissingLevel& e) {
    return error_reply(404, e.what());
  }
}

// Read-only HTTP front end over an Advisor. Tables are immutable after
// construction, so handlers can run concurrently.
class Service {
 public:
  Service(std::shared_ptr<const Advisor> advisor, ServiceConfig config)
      : advisor_(std::move(advisor)), config_(std::move(config)) {
    routes();
  }

  httplib::Server& server() noexcept { return server_; }
  const ServiceConfig& config() const noexcept { return config_; }

  // Blocks until stop().
  bool listen() { return server_.listen(config_.host, config_.port); }

  // Binds an ephemeral port and returns it; serve with listen_after_bind().
  int bind_any_port() { return server_.bind_to_any_port(config_.host); }
  bool listen_after_bind() { return server_.listen_after_bind(); }

  void stop() { server_.stop(); }
  void wait_until_ready() const { server_.wait_until_ready(); }

 private:
  void send(httplib::Response& res, const ServiceReply& reply) const {
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
  }

  void routes() {
    server_.set_default_headers({{"Access-Control-Allow-Origin", config_.cors_origin},
                                 {"Access-Control-Allow-Methods", "GET, OPTIONS"},
                                 {"Access-Control-Allow-Headers", "Content-Type"}});

    server_.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("ok", "text/plain");
    });
    server_.Get("/api/v1/advice", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, advice_reply(*advisor_, detail::query_int(req, "lid"), detail::query_int(req, "mover"),
                             detail::query_int(req, "opponent")));
    });
    server_.Get(R"(/api/v1/table/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, table_reply(*advisor_, detail::path_int(req.matches[1])));
    });
    server_.Get(R"(/api/v1/optimal/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, optimal_reply(*advisor_, detail::path_int(req.matches[1])));
    });
    server_.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server_.set_error_handler([this](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) send(res, error_reply(res.status, "not found"));
    });
    server_.set_exception_handler([this](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      std::string message = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        message = e.what();
      } catch (...) {
      }
      send(res, error_reply(500, message));
    });
  }

  std::shared_ptr<const Advisor> advisor_;
  ServiceConfig config_;
  httplib::Server server_;
};

}  // namespace supersix
