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

// Python bindings. Documents cross the boundary as XML strings; structured
// results come back as JSON text that the package decodes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>
#include <string>

#include "heart/eval.hpp"
#include "heart/layout.hpp"
#include "heart/service.hpp"
#include "heart/temporal.hpp"
#include "heart/timeline.hpp"

namespace py = pybind11;

namespace {

std::optional<heart::CalendarDate> parse_dct(const std::optional<std::string>& dct) {
  if (!dct) return std::nullopt;
  auto d = heart::parse_iso_date(*dct);
  if (!d) throw py::value_error("dct must be YYYY-MM-DD, got '" + *dct + "'");
  return d;
}

heart::PipelineOutput pipeline(const std::string& xml, const std::optional<std::string>& dct,
                               const std::string& spacing, bool show_empty_dct) {
  heart::PipelineOptions options;
  options.dct = parse_dct(dct);
  auto s = heart::spacing_from_string(spacing);
  if (!s) throw py::value_error("spacing must be 'ordinal' or 'proportional'");
  options.layout.spacing = *s;
  options.layout.show_empty_dct = show_empty_dct;
  heart::PipelineOutput out;
  {
    py::gil_scoped_release release;
    out = heart::run_pipeline(xml, options);
  }
  if (!out.ok()) throw py::value_error(heart::diagnostics_document(out.parse.diagnostics));
  return out;
}

struct Loaded {
  heart::AnnotatedDocument doc;
  heart::Timeline timeline;
};

Loaded load(const std::string& xml) {
  auto out = pipeline(xml, std::nullopt, "ordinal", false);
  return {*out.parse.document, *out.timeline};
}

std::string anchor_json(const heart::TimeAnchor& anchor, const heart::CalendarDate& dct) {
  nlohmann::json j;
  std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, heart::AbsoluteDate>) {
          j = {{"kind", "absolute"}, {"value", heart::format_absolute(a)},
               {"granularity", heart::to_string(a.granularity)}};
        } else if constexpr (std::is_same_v<T, heart::RelativeOffset>) {
          j = {{"kind", "relative"}, {"amount", a.amount}, {"unit", heart::to_string(a.unit)}};
        } else if constexpr (std::is_same_v<T, heart::DurationAmount>) {
          j = {{"kind", "duration"}, {"amount", a.amount}, {"unit", heart::to_string(a.unit)}};
        } else {
          j = {{"kind", "unresolved"}, {"surface", a.surface}};
        }
      },
      anchor);
  if (auto r = heart::resolve(anchor, dct)) j["resolved"] = heart::format_absolute(*r);
  return j.dump();
}

}  // namespace

PYBIND11_MODULE(_heart, m) {
  m.doc() = "Clinical timeline engine: annotated documents to Gantt timelines.";

  m.def(
      "parse",
      [](const std::string& xml, const std::optional<std::string>& dct) {
        auto r = heart::parse_document(xml, parse_dct(dct));
        nlohmann::json j = {{"ok", r.ok()},
                            {"diagnostics", heart::diagnostics_to_json(r.diagnostics)}};
        if (r.ok()) j["canonical"] = heart::serialize_document(*r.document);
        return j.dump();
      },
      py::arg("xml"), py::arg("dct") = py::none(),
      "Parse and validate; returns JSON with ok, diagnostics and the canonical XML.");

  m.def(
      "timeline_json",
      [](const std::string& xml, const std::optional<std::string>& dct) {
        return heart::timeline_to_json(*pipeline(xml, dct, "ordinal", false).timeline);
      },
      py::arg("xml"), py::arg("dct") = py::none(), "heart-timeline/1 JSON for a document.");

  m.def(
      "view_json",
      [](const std::string& xml, const std::optional<std::string>& dct, const std::string& spacing,
         bool show_empty_dct) {
        auto out = pipeline(xml, dct, spacing, show_empty_dct);
        return heart::timeline_to_view_json(*out.parse.document, *out.timeline, *out.layout);
      },
      py::arg("xml"), py::arg("dct") = py::none(), py::arg("spacing") = "ordinal",
      py::arg("show_empty_dct") = false, "heart-view/1 JSON, as served by the HTTP service.");

  m.def(
      "render_svg",
      [](const std::string& xml, const std::optional<std::string>& dct, const std::string& spacing,
         bool show_empty_dct) {
        return heart::render_svg(*pipeline(xml, dct, spacing, show_empty_dct).layout);
      },
      py::arg("xml"), py::arg("dct") = py::none(), py::arg("spacing") = "ordinal",
      py::arg("show_empty_dct") = false, "Static SVG rendering of a document's timeline.");

  m.def(
      "normalize_timex",
      [](const std::string& surface, const std::string& dct, const std::optional<std::string>& type) {
        std::optional<heart::TimexType> t;
        if (type) {
          t = heart::timex_type_from_string(*type);
          if (!t) throw py::value_error("unknown TIMEX3 type '" + *type + "'");
        }
        const auto d = *parse_dct(dct);
        return anchor_json(heart::normalize_timex(surface, t, d), d);
      },
      py::arg("surface"), py::arg("dct"), py::arg("type") = py::none(),
      "Normalize a temporal expression against a document creation time.");

  m.def(
      "bigram_overlap",
      [](const std::string& a, const std::string& b) { return heart::bigram_overlap(a, b).ratio; },
      py::arg("a"), py::arg("b"), "Jaccard index of the word-bigram sets of two texts.");

  m.def(
      "timeline_similarity",
      [](const std::string& xml_a, const std::string& xml_b) {
        return heart::timeline_similarity(load(xml_a).timeline, load(xml_b).timeline);
      },
      py::arg("xml_a"), py::arg("xml_b"), "F1 similarity of two documents' timelines.");

  m.def(
      "gold_from_document",
      [](const std::string& xml) {
        auto l = load(xml);
        return heart::gold_to_json(heart::gold_from_timeline(l.doc, l.timeline)).dump(2);
      },
      py::arg("xml"), "heart-gold/1 JSON describing what the timeline shows.");

  m.def(
      "placement_accuracy",
      [](const std::string& xml, const std::string& gold_json) {
        auto l = load(xml);
        heart::GoldPlacement gold;
        try {
          gold = heart::gold_from_json(nlohmann::json::parse(gold_json));
        } catch (const std::exception& e) {
          throw py::value_error(std::string("bad gold: ") + e.what());
        }
        return heart::report_to_json(heart::placement_accuracy(l.doc, l.timeline, gold)).dump();
      },
      py::arg("xml"), py::arg("gold_json"), "heart-report/1 JSON scoring a document against gold.");

  m.def("format_score", [](std::size_t correct, std::size_t total) {
    return heart::format_score({correct, total});
  }, py::arg("correct"), py::arg("total"), "Accuracy in the \"18/20 (90.0%)\" style.");
}
