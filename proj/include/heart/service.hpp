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

#ifndef HEART_SERVICE_HPP_
#define HEART_SERVICE_HPP_

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "heart/annotation.hpp"
#include "heart/layout.hpp"
#include "heart/temporal.hpp"
#include "heart/timeline.hpp"

namespace heart {

struct PipelineOptions {
  std::optional<CalendarDate> dct;
  LayoutConfig layout;
  const PatternTable* table = nullptr;  // process default when null
};

// parse -> timeline -> layout. `timeline` and `layout` are set iff parsing
// succeeded.
struct PipelineOutput {
  ParseResult parse;
  std::optional<Timeline> timeline;
  std::optional<LayoutModel> layout;

  bool ok() const { return parse.ok(); }
  // Parse diagnostics followed by timeline and layout diagnostics.
  Diagnostics all_diagnostics() const;
};

PipelineOutput run_pipeline(std::string_view xml, const PipelineOptions& options = {});

// {"schema": "heart-diagnostics/1", "diagnostics": [...]}
std::string diagnostics_document(const Diagnostics& diagnostics);

// One compact JSON object per line.
std::string diagnostics_json_lines(const Diagnostics& diagnostics);

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  Spacing spacing = Spacing::Ordinal;
  std::string locale_table_path;
  std::string static_dir;
  bool show_empty_dct = false;
  std::size_t max_request_bytes = 1 << 20;

  // HEART_LISTEN ("host:port" or ":port") and HEART_LOCALE_TABLE.
  // Throws std::invalid_argument on a malformed HEART_LISTEN.
  static ServiceConfig from_environment();
};

struct HttpResponse {
  int status = 200;
  std::string content_type;
  std::string body;
};

using QueryParams = std::multimap<std::string, std::string>;

// Request handling without any socket; the HTTP server and tests share it.
class TimelineService {
 public:
  // Loads the locale table named in the config; throws on failure.
  explicit TimelineService(ServiceConfig config);

  const ServiceConfig& config() const { return config_; }

  // POST /api/timeline: heart-view/1 JSON.
  HttpResponse handle_timeline_request(std::string_view body, const QueryParams& query) const;
  // POST /api/render: SVG.
  HttpResponse handle_render_request(std::string_view body, const QueryParams& query) const;
  // GET /api/health
  HttpResponse handle_health() const;

 private:
  std::optional<PipelineOutput> run(std::string_view body, const QueryParams& query,
                                    HttpResponse& error) const;

  ServiceConfig config_;
  std::shared_ptr<const PatternTable> table_;
};

// Blocking HTTP/1.1 server over TimelineService.
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<const TimelineService> service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds host:port (port 0 picks a free port) and returns the bound port,
  // or -1 on failure.
  int bind();
  // Serves until stop(); call after bind().
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace heart

#endif  // HEART_SERVICE_HPP_
