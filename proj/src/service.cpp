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

namespace heart {

Diagnostics PipelineOutput::all_diagnostics() const {
  Diagnostics out = parse.diagnostics;
  if (timeline) {
    // The timeline re-validates the document; skip what parsing already said.
    for (const auto& d : timeline->diagnostics) {
      bool seen = false;
      for (const auto& p : parse.diagnostics) {
        if (p.code == d.code && p.message == d.message) seen = true;
      }
      if (!seen) out.push_back(d);
    }
  }
  if (layout) out.insert(out.end(), layout->diagnostics.begin(), layout->diagnostics.end());
  return out;
}

PipelineOutput run_pipeline(std::string_view xml, const PipelineOptions& options) {
  PipelineOutput out;
  out.parse = parse_document(xml, options.dct);
  if (!out.parse.ok()) return out;
  const PatternTable& table = options.table ? *options.table : default_pattern_table();
  out.timeline = build_timeline(*out.parse.document, table);
  out.layout = build_layout(*out.parse.document, *out.timeline, options.layout);
  return out;
}

std::string diagnostics_document(const Diagnostics& diagnostics) {
  nlohmann::json j = {{"schema", "heart-diagnostics/1"},
                      {"diagnostics", diagnostics_to_json(diagnostics)}};
  return j.dump(2) + "\n";
}

std::string diagnostics_json_lines(const Diagnostics& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics_to_json(diagnostics)) {
    out += d.dump();
    out += '\n';
  }
  return out;
}

ServiceConfig ServiceConfig::from_environment() {
  ServiceConfig config;
  if (const char* listen = std::getenv("HEART_LISTEN"); listen && *listen) {
    std::string value = listen;
    auto colon = value.rfind(':');
    if (colon == std::string::npos) throw std::invalid_argument("HEART_LISTEN must be host:port");
    if (colon > 0) config.host = value.substr(0, colon);
    const std::string port = value.substr(colon + 1);
    char* end = nullptr;
    long p = std::strtol(port.c_str(), &end, 10);
    if (port.empty() || *end != '\0' || p < 0 || p > 65535)
      throw std::invalid_argument("HEART_LISTEN has a bad port: '" + port + "'");
    config.port = static_cast<int>(p);
  }
  if (const char* table = std::getenv("HEART_LOCALE_TABLE"); table && *table)
    config.locale_table_path = table;
  return config;
}

TimelineService::TimelineService(ServiceConfig config) : config_(std::move(config)) {
  if (!config_.locale_table_path.empty()) {
    table_ = std::make_shared<const PatternTable>(PatternTable::load(config_.locale_table_path));
  } else {
    table_ = std::shared_ptr<const PatternTable>(std::shared_ptr<const PatternTable>{},
                                                 &PatternTable::builtin());
  }
}

namespace {

HttpResponse diagnostics_response(int status, const Diagnostics& diagnostics) {
  return {status, "application/json", diagnostics_document(diagnostics)};
}

const std::string* query_value(const QueryParams& query, const std::string& key) {
  auto it = query.find(key);
  return it == query.end() ? nullptr : &it->second;
}

}  // namespace

std::optional<PipelineOutput> TimelineService::run(std::string_view body, const QueryParams& query,
                                                   HttpResponse& error) const {
  if (body.size() > config_.max_request_bytes) {
    error = diagnostics_response(
        413, {make_error("request-too-large",
                         "request body exceeds " + std::to_string(config_.max_request_bytes) +
                             " bytes")});
    return std::nullopt;
  }
  PipelineOptions options;
  options.table = table_.get();
  options.layout.spacing = config_.spacing;
  options.layout.show_empty_dct = config_.show_empty_dct;
  Diagnostics bad;
  if (const auto* dct = query_value(query, "dct")) {
    options.dct = parse_iso_date(*dct);
    if (!options.dct) bad.push_back(make_error("invalid-parameter", "dct must be YYYY-MM-DD"));
  }
  if (const auto* spacing = query_value(query, "spacing")) {
    auto s = spacing_from_string(*spacing);
    if (!s) bad.push_back(make_error("invalid-parameter", "spacing must be ordinal or proportional"));
    else options.layout.spacing = *s;
  }
  if (const auto* show = query_value(query, "showEmptyDct")) {
    if (*show == "true" || *show == "1") options.layout.show_empty_dct = true;
    else if (*show == "false" || *show == "0") options.layout.show_empty_dct = false;
    else bad.push_back(make_error("invalid-parameter", "showEmptyDct must be true or false"));
  }
  if (!bad.empty()) {
    error = diagnostics_response(400, bad);
    return std::nullopt;
  }
  PipelineOutput out = run_pipeline(body, options);
  if (!out.ok()) {
    error = diagnostics_response(400, out.parse.diagnostics);
    return std::nullopt;
  }
  return out;
}

HttpResponse TimelineService::handle_timeline_request(std::string_view body,
                                                      const QueryParams& query) const {
  HttpResponse error;
  auto out = run(body, query, error);
  if (!out) return error;
  return {200, "application/json",
          timeline_to_view_json(*out->parse.document, *out->timeline, *out->layout)};
}

HttpResponse TimelineService::handle_render_request(std::string_view body,
                                                    const QueryParams& query) const {
  HttpResponse error;
  auto out = run(body, query, error);
  if (!out) return error;
  return {200, "image/svg+xml", render_svg(*out->layout)};
}

HttpResponse TimelineService::handle_health() const { return {200, "text/plain", "ok"}; }

}  // namespace heart
