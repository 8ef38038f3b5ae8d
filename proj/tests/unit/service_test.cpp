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

#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "doctest.h"
#include "httplib.h"

namespace heart {
namespace {

const char* kFever =
    R"(<doc dct="2021-04-01" id="f"><timex3 id="t1" type="date">April 3</timex3>: )"
    R"(<d id="d1" certainty="positive" rel="timeOn:t1">fever</d></doc>)";

TEST_CASE("timeline request returns the view JSON of the pipeline") {
  TimelineService service(ServiceConfig{});
  auto resp = service.handle_timeline_request(kFever, {});
  CHECK(resp.status == 200);
  CHECK(resp.content_type == "application/json");
  auto out = run_pipeline(kFever);
  REQUIRE(out.ok());
  CHECK(resp.body == timeline_to_view_json(*out.parse.document, *out.timeline, *out.layout));
  auto render = service.handle_render_request(kFever, {});
  CHECK(render.status == 200);
  CHECK(render.content_type == "image/svg+xml");
  CHECK(render.body == render_svg(*out.layout));
}

TEST_CASE("malformed input is a 400 with diagnostics") {
  TimelineService service(ServiceConfig{});
  auto resp = service.handle_timeline_request("<doc>", {});
  CHECK(resp.status == 400);
  auto j = nlohmann::json::parse(resp.body);
  CHECK(j["schema"] == "heart-diagnostics/1");
  REQUIRE_FALSE(j["diagnostics"].empty());
  CHECK(j["diagnostics"][0]["severity"] == "error");
}

TEST_CASE("query parameters") {
  TimelineService service(ServiceConfig{});
  QueryParams q{{"dct", "2021-05-01"}, {"spacing", "proportional"}, {"showEmptyDct", "true"}};
  auto resp = service.handle_timeline_request(kFever, q);
  REQUIRE(resp.status == 200);
  auto j = nlohmann::json::parse(resp.body);
  CHECK(j["timeline"]["dct"] == "2021-05-01");
  CHECK(j["layout"]["spacing"] == "proportional");
  CHECK(service.handle_timeline_request(kFever, {{"dct", "May 1"}}).status == 400);
  CHECK(service.handle_timeline_request(kFever, {{"spacing", "log"}}).status == 400);
  CHECK(service.handle_timeline_request(kFever, {{"showEmptyDct", "maybe"}}).status == 400);
}

TEST_CASE("oversized bodies are rejected with 413") {
  ServiceConfig config;
  config.max_request_bytes = 16;
  TimelineService service(config);
  CHECK(service.handle_timeline_request(kFever, {}).status == 413);
}

TEST_CASE("health") {
  TimelineService service(ServiceConfig{});
  auto resp = service.handle_health();
  CHECK(resp.status == 200);
  CHECK(resp.body == "ok");
}

TEST_CASE("configuration from the environment") {
  setenv("HEART_LISTEN", "0.0.0.0:9099", 1);
  unsetenv("HEART_LOCALE_TABLE");
  auto c = ServiceConfig::from_environment();
  CHECK(c.host == "0.0.0.0");
  CHECK(c.port == 9099);
  setenv("HEART_LISTEN", ":7000", 1);
  c = ServiceConfig::from_environment();
  CHECK(c.host == "127.0.0.1");
  CHECK(c.port == 7000);
  setenv("HEART_LISTEN", "localhost", 1);
  CHECK_THROWS_AS(ServiceConfig::from_environment(), std::invalid_argument);
  setenv("HEART_LISTEN", "localhost:99999", 1);
  CHECK_THROWS_AS(ServiceConfig::from_environment(), std::invalid_argument);
  unsetenv("HEART_LISTEN");
  ServiceConfig bad;
  bad.locale_table_path = "/nonexistent/locale.txt";
  CHECK_THROWS(TimelineService{bad});
}

TEST_CASE("HTTP server end to end") {
  ServiceConfig config;
  config.port = 0;
  auto service = std::make_shared<const TimelineService>(config);
  HttpServer server(service);
  const int port = server.bind();
  REQUIRE(port > 0);
  std::thread serving([&] { server.serve(); });
  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/api/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  auto ok = client.Post("/api/timeline", kFever, "application/xml");
  REQUIRE(ok);
  CHECK(ok->status == 200);
  CHECK(ok->body == service->handle_timeline_request(kFever, {}).body);
  auto bad = client.Post("/api/timeline", "<doc>", "application/xml");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  auto svg = client.Post("/api/render?spacing=ordinal", kFever, "application/xml");
  REQUIRE(svg);
  CHECK(svg->status == 200);
  CHECK(svg->get_header_value("Content-Type") == "image/svg+xml");
  auto missing = client.Get("/api/nothing");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  server.stop();
  serving.join();
}

}  // namespace
}  // namespace heart
