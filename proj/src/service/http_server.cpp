#include <iostream>

#include "fairnav/service.hpp"
#include "httplib.h"
#include "json_util.hpp"

namespace fairnav::service {

namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, const std::exception& e) {
  send_json(res, http_status(e), Json{{"error", e.what()}});
}

template <typename Handler>
httplib::Server::Handler guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const std::exception& e) {
      send_error(res, e);
    }
  };
}

}  // namespace

struct HttpServer::Impl {
  PlanService& service;
  httplib::Server server;

  explicit Impl(PlanService& s) : service(s) {
    const std::string origin = service.config().cors_origin;
    server.set_payload_max_length(std::size_t{512} << 20);
    server.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
      if (!origin.empty()) {
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
      }
    });
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, Json{{"status", "ok"}});
    });

    server.Post("/cities", guarded([this](const httplib::Request& req, httplib::Response& res) {
      send_json(res, 201, Json{{"city_id", service.add_city(req.body)}});
    }));

    server.Get(R"(/cities/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      res.status = 200;
      res.set_content(service.city_file(req.matches[1]), kJson);
    }));

    server.Get(R"(/cities/([^/]+)/distribution)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 if (!req.has_param("attribute")) throw ParseError("attribute: missing query parameter");
                 send_json(res, 200, to_json(service.distribution(req.matches[1], req.get_param_value("attribute"))));
               }));

    server.Post("/plans", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const Json body = detail::parse_document(req.body);
      const std::string& city_id = detail::as_string(detail::field(body, "city_id", ""), "city_id");
      const FairnessSpec spec = spec_from_json(detail::field(body, "spec", ""));
      const Json* params = detail::optional_field(body, "params");
      const PlannerParams planner = params_from_json(params ? *params : Json());
      send_json(res, 202, Json{{"job_id", service.submit(city_id, spec, planner)}});
    }));

    server.Get(R"(/plans/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      send_json(res, 200, to_json(service.job(req.matches[1])));
    }));

    server.Get(R"(/plans/([^/]+)/solutions/(\d+)/audit)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const auto k = static_cast<std::size_t>(std::stoull(req.matches[2]));
                 auto [audit, categories] = service.audit(req.matches[1], k);
                 Json body = to_json(audit, categories);
                 body["job_id"] = std::string(req.matches[1]);
                 body["solution"] = k;
                 send_json(res, 200, body);
               }));

    server.Post(R"(/plans/([^/]+)/refine)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const Json body = req.body.empty() ? Json::object() : detail::parse_document(req.body);
      std::vector<Coord> waypoints;
      if (const Json* w = detail::optional_field(body, "waypoints")) waypoints = waypoints_from_json(*w);
      send_json(res, 202, Json{{"job_id", service.refine(req.matches[1], waypoints)}});
    }));
  }
};

HttpServer::HttpServer(PlanService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool HttpServer::bind(const std::string& host, int port) { return impl_->server.bind_to_port(host, port); }

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace fairnav::service
