// Copyright 2026 The heart-timeline Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "heart/service.hpp"

#include "httplib.h"

namespace heart {

struct HttpServer::Impl {
  std::shared_ptr<const TimelineService> service;
  httplib::Server server;
};

namespace {

QueryParams to_query(const httplib::Request& req) {
  QueryParams q;
  for (const auto& [k, v] : req.params) q.emplace(k, v);
  return q;
}

void reply(httplib::Response& res, const HttpResponse& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

}  // namespace

HttpServer::HttpServer(std::shared_ptr<const TimelineService> service)
    : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  auto& server = impl_->server;
  const TimelineService* svc = impl_->service.get();
  const auto& config = svc->config();

  server.set_payload_max_length(config.max_request_bytes);
  server.Get("/api/health", [svc](const httplib::Request&, httplib::Response& res) {
    reply(res, svc->handle_health());
  });
  server.Post("/api/timeline", [svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc->handle_timeline_request(req.body, to_query(req)));
  });
  server.Post("/api/render", [svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc->handle_render_request(req.body, to_query(req)));
  });
  if (!config.static_dir.empty()) server.set_mount_point("/", config.static_dir);
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.status == 413) {
      res.set_content(diagnostics_document({make_error("request-too-large",
                                                       "request body is too large")}),
                      "application/json");
    }
  });
  server.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
        res.status = 500;
        res.set_content(diagnostics_document({make_error("internal", "internal error")}),
                        "application/json");
      });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  const auto& config = impl_->service->config();
  if (config.port == 0) return impl_->server.bind_to_any_port(config.host);
  return impl_->server.bind_to_port(config.host, config.port) ? config.port : -1;
}

void HttpServer::serve() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace heart
