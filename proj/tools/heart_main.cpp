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

// heart: command-line front end for the timeline engine.
//
// Exit status is 0 on success, 1 when the input produced an Error
// diagnostic, and 2 on usage or I/O problems. Diagnostics go to stderr as
// one JSON object per line.

#include <csignal>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "heart/annotation.hpp"
#include "heart/eval.hpp"
#include "heart/layout.hpp"
#include "heart/service.hpp"
#include "heart/temporal.hpp"
#include "heart/timeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitUsage = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(data.data(), static_cast<std::streamsize>(data.size())))
    throw IoError("cannot write " + path);
}

struct CommonOptions {
  std::string dct;
  std::string spacing = "ordinal";
  std::string locale_table;
  std::string output;
  bool show_empty_dct = false;
};

// Owns the locale table so the pipeline can borrow it.
struct Context {
  std::unique_ptr<heart::PatternTable> table;
  heart::PipelineOptions options;
};

Context make_context(const CommonOptions& common) {
  Context ctx;
  if (!common.dct.empty()) {
    ctx.options.dct = heart::parse_iso_date(common.dct);
    if (!ctx.options.dct) throw CLI::ValidationError("--dct", "expected YYYY-MM-DD");
  }
  auto spacing = heart::spacing_from_string(common.spacing);
  if (!spacing) throw CLI::ValidationError("--spacing", "expected ordinal or proportional");
  ctx.options.layout.spacing = *spacing;
  ctx.options.layout.show_empty_dct = common.show_empty_dct;
  std::string table_path = common.locale_table;
  if (table_path.empty()) table_path = heart::ServiceConfig::from_environment().locale_table_path;
  if (!table_path.empty()) {
    try {
      ctx.table = std::make_unique<heart::PatternTable>(heart::PatternTable::load(table_path));
    } catch (const std::exception& e) {
      throw IoError(e.what());
    }
    ctx.options.table = ctx.table.get();
  }
  return ctx;
}

int report(const heart::Diagnostics& diagnostics) {
  std::cerr << heart::diagnostics_json_lines(diagnostics);
  return heart::has_error(diagnostics) ? kExitDiagnostics : kExitOk;
}

void add_common(CLI::App* cmd, CommonOptions& common, bool layout_flags) {
  cmd->add_option("--dct", common.dct, "Document creation time override (YYYY-MM-DD)");
  cmd->add_option("--locale-table", common.locale_table, "Temporal pattern table file");
  cmd->add_option("-o,--output", common.output, "Output path (default stdout)");
  if (layout_flags) {
    cmd->add_option("--spacing", common.spacing, "Column spacing")
        ->check(CLI::IsMember({"ordinal", "proportional"}));
    cmd->add_flag("--show-empty-dct", common.show_empty_dct, "Keep an empty DCT column");
  }
}

heart::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clinical annotation timeline engine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "heart 0.1.0");

  CommonOptions common;
  std::string input = "-";
  std::string format = "svg";

  auto* parse_cmd = app.add_subcommand("parse", "Validate a document and print canonical XML");
  parse_cmd->add_option("input", input, "Annotated XML ('-' for stdin)");
  add_common(parse_cmd, common, false);

  auto* timeline_cmd = app.add_subcommand("timeline", "Print the heart-timeline/1 JSON");
  timeline_cmd->add_option("input", input, "Annotated XML ('-' for stdin)");
  add_common(timeline_cmd, common, false);

  auto* render_cmd = app.add_subcommand("render", "Render SVG or heart-view/1 JSON");
  render_cmd->add_option("input", input, "Annotated XML ('-' for stdin)");
  render_cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "svg"}));
  add_common(render_cmd, common, true);

  auto* gold_cmd = app.add_subcommand("gold", "Print heart-gold/1 placements for a document");
  gold_cmd->add_option("input", input, "Annotated XML ('-' for stdin)");
  add_common(gold_cmd, common, false);

  std::vector<std::string> eval_pairs;
  bool eval_json = false;
  auto* eval_cmd = app.add_subcommand("eval", "Score placements against gold files");
  eval_cmd->add_option("pairs", eval_pairs, "DOC.xml GOLD.json [DOC.xml GOLD.json ...]")
      ->required();
  eval_cmd->add_flag("--json", eval_json, "Print heart-report/1 JSON lines");
  add_common(eval_cmd, common, false);

  std::vector<std::string> similarity_inputs;
  auto* sim_cmd = app.add_subcommand("similarity", "Compare two reports of the same course");
  sim_cmd->add_option("documents", similarity_inputs, "Two annotated XML files")
      ->required()
      ->expected(2);
  add_common(sim_cmd, common, false);

  std::string listen;
  std::string static_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--listen", listen, "host:port (default HEART_LISTEN or 127.0.0.1:8080)");
  serve_cmd->add_option("--static", static_dir, "Directory served at /");
  serve_cmd->add_option("--locale-table", common.locale_table, "Temporal pattern table file");
  serve_cmd->add_option("--spacing", common.spacing, "Column spacing")
      ->check(CLI::IsMember({"ordinal", "proportional"}));
  serve_cmd->add_flag("--show-empty-dct", common.show_empty_dct, "Keep an empty DCT column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*serve_cmd) {
      if (!listen.empty()) setenv("HEART_LISTEN", listen.c_str(), 1);
      heart::ServiceConfig config = heart::ServiceConfig::from_environment();
      if (!common.locale_table.empty()) config.locale_table_path = common.locale_table;
      config.static_dir = static_dir;
      config.spacing = *heart::spacing_from_string(common.spacing);
      config.show_empty_dct = common.show_empty_dct;
      auto service = std::make_shared<const heart::TimelineService>(config);
      heart::HttpServer server(service);
      const int port = server.bind();
      if (port < 0) throw IoError("cannot listen on " + config.host + ":" +
                                  std::to_string(config.port));
      std::cerr << "listening on " << config.host << ":" << port << std::endl;
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.serve();
      g_server = nullptr;
      return kExitOk;
    }

    Context ctx = make_context(common);

    if (*eval_cmd) {
      if (eval_pairs.size() % 2 != 0) throw CLI::ValidationError("pairs", "expected DOC GOLD pairs");
      std::vector<heart::AccuracyReport> reports;
      int status = kExitOk;
      for (std::size_t i = 0; i < eval_pairs.size(); i += 2) {
        auto out = heart::run_pipeline(read_input(eval_pairs[i]), ctx.options);
        if (!out.ok()) {
          report(out.parse.diagnostics);
          status = kExitDiagnostics;
          continue;
        }
        heart::GoldPlacement gold;
        try {
          gold = heart::gold_from_json(nlohmann::json::parse(read_input(eval_pairs[i + 1])));
        } catch (const nlohmann::json::exception& e) {
          throw IoError(eval_pairs[i + 1] + ": " + e.what());
        } catch (const std::runtime_error& e) {
          throw IoError(eval_pairs[i + 1] + ": " + e.what());
        }
        reports.push_back(heart::placement_accuracy(*out.parse.document, *out.timeline, gold));
        report(reports.back().diagnostics);
      }
      std::string text;
      if (eval_json) {
        for (const auto& r : reports) text += heart::report_to_json(r).dump() + "\n";
      } else {
        text = heart::format_report_table(reports);
      }
      write_output(common.output, text);
      return status;
    }

    if (*sim_cmd) {
      std::vector<heart::PipelineOutput> outs;
      std::vector<std::string> texts;
      for (const auto& path : similarity_inputs) {
        outs.push_back(heart::run_pipeline(read_input(path), ctx.options));
        if (!outs.back().ok()) return report(outs.back().parse.diagnostics);
        texts.push_back(outs.back().parse.document->text);
      }
      auto overlap = heart::bigram_overlap(texts[0], texts[1]);
      report(overlap.diagnostics);
      nlohmann::json j = {
          {"bigramOverlap", overlap.ratio},
          {"similarity", heart::timeline_similarity(*outs[0].timeline, *outs[1].timeline)}};
      write_output(common.output, j.dump(2) + "\n");
      return kExitOk;
    }

    const std::string xml = read_input(input);

    if (*parse_cmd) {
      auto result = heart::parse_document(xml, ctx.options.dct);
      const int status = report(result.diagnostics);
      if (result.ok()) write_output(common.output, heart::serialize_document(*result.document));
      return status;
    }

    auto out = heart::run_pipeline(xml, ctx.options);
    const int status = report(out.all_diagnostics());
    if (!out.ok()) return status;
    const auto& doc = *out.parse.document;
    if (*timeline_cmd) {
      write_output(common.output, heart::timeline_to_json(*out.timeline));
    } else if (*gold_cmd) {
      write_output(common.output,
                   heart::gold_to_json(heart::gold_from_timeline(doc, *out.timeline)).dump(2) + "\n");
    } else if (format == "json") {
      write_output(common.output, heart::timeline_to_view_json(doc, *out.timeline, *out.layout));
    } else {
      write_output(common.output, heart::render_svg(*out.layout));
    }
    return status;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "heart: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "heart: " << e.what() << "\n";
    return kExitUsage;
  }
}
