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

#include "heart/layout.hpp"

#include <algorithm>
#include <stdexcept>

#include "doctest.h"
#include "heart/timeline.hpp"

namespace heart {
namespace {

struct Built {
  AnnotatedDocument doc;
  Timeline timeline;
  LayoutModel layout;
};

Built build(std::string_view xml, LayoutConfig config = {}) {
  auto r = parse_document(xml);
  REQUIRE(r.ok());
  Built b{*r.document, {}, {}};
  b.timeline = build_timeline(b.doc);
  b.layout = build_layout(b.doc, b.timeline, config);
  return b;
}

const Row& row(const LayoutModel& m, std::string_view id) {
  auto it = std::find_if(m.rows.begin(), m.rows.end(), [&](const Row& r) { return r.row_id == id; });
  REQUIRE(it != m.rows.end());
  return *it;
}

const Bar& bar(const LayoutModel& m, std::string_view root) {
  auto it = std::find_if(m.bars.begin(), m.bars.end(),
                         [&](const Bar& b) { return b.bundle_root_id == root; });
  REQUIRE(it != m.bars.end());
  return *it;
}

TEST_CASE("anatomical bundle gets an orange anatomical row") {
  auto b = build(R"(<doc dct="2021-04-01"><a id="a1" rel="subRegion:d1">lung</a> <d id="d1">nodule</d></doc>)");
  REQUIRE(b.layout.rows.size() == 1);
  CHECK(b.layout.rows[0].category == RowCategory::AnatomicalGroup);
  CHECK(b.layout.rows[0].name == "lung");
  CHECK(b.layout.rows[0].color == ColorToken::Orange);
  CHECK(bar(b.layout, "a1").row_id == b.layout.rows[0].row_id);
  CHECK(bar(b.layout, "a1").entity_ids == std::vector<std::string>{"a1", "d1"});
}

TEST_CASE("a lone disease goes to the pink Diseases row") {
  auto b = build(R"(<doc dct="2021-04-01"><d id="d1">fever</d></doc>)");
  REQUIRE(b.layout.rows.size() == 1);
  CHECK(b.layout.rows[0].row_id == "diseases");
  CHECK(b.layout.rows[0].category == RowCategory::Diseases);
  CHECK(b.layout.rows[0].color == ColorToken::Pink);
  CHECK(bar(b.layout, "d1").lane == 0);
}

TEST_CASE("remedy and clinical context share the light green row") {
  auto b = build(R"(<doc dct="2021-04-01"><r id="r1">chemotherapy</r> and <cc id="cc1">follow-up</cc></doc>)");
  REQUIRE(b.layout.rows.size() == 1);
  CHECK(b.layout.rows[0].category == RowCategory::ClinicalTreatment);
  CHECK(b.layout.rows[0].color == ColorToken::LightGreen);
  CHECK(bar(b.layout, "r1").row_id == "clinical-treatment");
  CHECK(bar(b.layout, "cc1").row_id == "clinical-treatment");
}

TEST_CASE("first-fit packing: [0,2] and [1,3] take lanes 0 and 1") {
  auto b = build(
      R"(<doc dct="2021-01-01"><timex3 id="t1" type="date">2021-02-01</timex3> <timex3 id="t2" type="date">2021-03-01</timex3> )"
      R"(<timex3 id="t3" type="date">2021-04-01</timex3> )"
      R"(<d id="d1" rel="timeBegin:DCT;timeEnd:t2">a</d> <d id="d2" rel="timeBegin:t1;timeEnd:t3">b</d> )"
      R"(<d id="d3" rel="timeOn:t3">c</d></doc>)");
  CHECK(bar(b.layout, "d1").start_col == 0);
  CHECK(bar(b.layout, "d1").end_col == 2);
  CHECK(bar(b.layout, "d1").lane == 0);
  CHECK(bar(b.layout, "d2").start_col == 1);
  CHECK(bar(b.layout, "d2").end_col == 3);
  CHECK(bar(b.layout, "d2").lane == 1);
  // [3,3] fits after [0,2] in lane 0.
  CHECK(bar(b.layout, "d3").lane == 0);
  CHECK(row(b.layout, "diseases").lanes.size() == 2);
}

TEST_CASE("bars sharing a boundary column overlap") {
  auto b = build(
      R"(<doc dct="2021-01-01"><timex3 id="t1" type="date">2021-02-01</timex3> )"
      R"(<d id="d1" rel="timeBegin:DCT;timeEnd:t1">a</d> <d id="d2" rel="timeOn:t1">b</d></doc>)");
  CHECK(bar(b.layout, "d1").lane == 0);
  CHECK(bar(b.layout, "d2").lane == 1);
}

TEST_CASE("a medicine key-value pair becomes one table at the key's column") {
  auto b = build(
      R"(<doc dct="2021-01-01"><timex3 id="t1" type="date">2021-02-01</timex3> )"
      R"(<m-key id="m1" rel="keyValue:v1;timeOn:t1">tegafur</m-key> <m-val id="v1">300 mg</m-val></doc>)");
  CHECK(b.layout.bars.empty());
  REQUIRE(b.layout.tables.size() == 1);
  const auto& t = b.layout.tables[0];
  CHECK(t.row_id == "medicine");
  // The empty DCT column is hidden, so t1 is the first column.
  REQUIRE(b.layout.columns.size() == 1);
  CHECK(b.layout.columns[0].cluster_id == "c-t1");
  CHECK(t.start_col == 0);
  CHECK(t.end_col == 0);
  REQUIRE(t.entries.size() == 1);
  CHECK(t.entries[0].key == "tegafur");
  CHECK(t.entries[0].value == "300 mg");
  CHECK(row(b.layout, "medicine").color == ColorToken::Green);
}

TEST_CASE("key-value pairs at the same place share a table") {
  auto b = build(
      R"(<doc dct="2021-01-01"><t-key id="k1" rel="keyValue:v1">CRP</t-key> <t-val id="v1">2.3</t-val> )"
      R"(<t-key id="k2" rel="keyValue:v2">WBC</t-key> <t-val id="v2">9800</t-val></doc>)");
  REQUIRE(b.layout.tables.size() == 1);
  CHECK(b.layout.tables[0].entries.size() == 2);
  CHECK(row(b.layout, "test").color == ColorToken::Violet);
}

TEST_CASE("style flags follow certainty and state") {
  auto b = build(
      R"(<doc dct="2021-01-01"><d id="d1" certainty="negative">a</d> <d id="d2" certainty="suspicious">b</d> )"
      R"(<d id="d3" certainty="general">c</d> <d id="d4" certainty="positive">d</d> )"
      R"(<r id="r1" state="negated">e</r> <r id="r2" state="scheduled">f</r> <r id="r3" state="executed">g</r></doc>)");
  auto flags = [&](const char* id) { return bar(b.layout, id).style; };
  CHECK(flags("d1") == StyleFlags{true, true, false, false, false, false});
  CHECK(flags("d2") == StyleFlags{false, false, true, false, false, false});
  CHECK(flags("d3") == StyleFlags{false, false, false, true, false, false});
  CHECK(flags("d4") == StyleFlags{});
  CHECK(flags("r1") == StyleFlags{false, false, false, false, true, false});
  CHECK(flags("r2") == StyleFlags{false, false, false, false, false, true});
  CHECK(flags("r3") == StyleFlags{});
}

TEST_CASE("supplemental labels are truncated; the full text is kept") {
  LayoutConfig config;
  config.label_budget = 10;
  auto b = build(
      R"(<doc dct="2021-01-01"><d id="d1">nodule</d> <f id="f1" rel="featureSbj:d1">irregularly spiculated</f> )"
      R"(<c id="c1" rel="changeSbj:d1">grew</c></doc>)",
      config);
  const Bar& d = bar(b.layout, "d1");
  REQUIRE(d.supplemental_labels.size() == 2);
  CHECK(d.supplemental_full[0] == "irregularly spiculated");
  CHECK(d.supplemental_labels[0] == "irregular…");
  CHECK(d.supplemental_labels[1] == "grew");
  CHECK(d.supplemental_full[1] == "grew");
}

TEST_CASE("nested diseases become sub-labels capped at depth two") {
  auto b = build(
      R"(<doc dct="2021-01-01"><a id="a1" rel="subRegion:d1">liver</a> <d id="d1" rel="subRegion:d2">mass</d> )"
      R"(<d id="d2" rel="subRegion:d3">necrosis</d> <d id="d3" rel="subRegion:d4">bleed</d> <d id="d4">clot</d></doc>)");
  const Bar& a = bar(b.layout, "a1");
  CHECK(a.label == "mass");
  REQUIRE(a.sub_labels.size() == 3);
  CHECK(a.sub_labels[0].text == "necrosis");
  CHECK(a.sub_labels[0].depth == 1);
  CHECK(a.sub_labels[1].text == "bleed");
  CHECK(a.sub_labels[1].depth == 2);
  CHECK(a.sub_labels[2].text == "bleed › clot");
  CHECK(a.sub_labels[2].depth == 2);
}

TEST_CASE("anatomical rows group case-insensitively in first-mention order") {
  auto b = build(
      R"(<doc dct="2021-01-01"><a id="a1">Liver</a> <a id="a2">lung</a> <a id="a3">liver</a> <d id="d1">x</d></doc>)");
  REQUIRE(b.layout.rows.size() == 3);
  CHECK(b.layout.rows[0].name == "Liver");
  CHECK(b.layout.rows[1].name == "lung");
  CHECK(b.layout.rows[2].row_id == "diseases");
  CHECK(bar(b.layout, "a3").row_id == b.layout.rows[0].row_id);
}

TEST_CASE("an empty DCT column is hidden unless requested") {
  const char* xml = R"(<doc dct="2021-04-01"><timex3 id="t1" type="date">April 3</timex3> <d id="d1" rel="timeOn:t1">x</d></doc>)";
  auto hidden = build(xml);
  REQUIRE(hidden.layout.columns.size() == 1);
  CHECK(bar(hidden.layout, "d1").start_col == 0);
  LayoutConfig config;
  config.show_empty_dct = true;
  auto shown = build(xml, config);
  REQUIRE(shown.layout.columns.size() == 2);
  CHECK(shown.layout.columns[0].label == "DCT");
  CHECK(bar(shown.layout, "d1").start_col == 1);
}

TEST_CASE("empty timeline renders headers and axis only") {
  auto b = build(R"(<doc dct="2021-04-01"></doc>)");
  CHECK(b.layout.columns.empty());
  CHECK(b.layout.bars.empty());
  const std::string svg = render_svg(b.layout);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("class=\"bar\"") == std::string::npos);
  LayoutConfig config;
  config.show_empty_dct = true;
  auto shown = build(R"(<doc dct="2021-04-01"></doc>)", config);
  REQUIRE(shown.layout.columns.size() == 1);
  const std::string svg2 = render_svg(shown.layout);
  CHECK(svg2.find("class=\"axis\"") != std::string::npos);
  CHECK(svg2.find(">DCT<") != std::string::npos);
  auto view = nlohmann::json::parse(timeline_to_view_json(shown.doc, shown.timeline, shown.layout));
  CHECK(view["layout"]["bars"].empty());
  CHECK(view["layout"]["columns"].size() == 1);
}

TEST_CASE("proportional spacing places columns by day count") {
  LayoutConfig config;
  config.spacing = Spacing::Proportional;
  auto b = build(
      R"(<doc dct="2021-01-31"><timex3 id="t1" type="date">2021-01-01</timex3> <timex3 id="t2" type="date">2021-01-04</timex3> )"
      R"(<d id="d1" rel="timeOn:t1">a</d> <d id="d2" rel="timeOn:t2">b</d> <d id="d3">c</d></doc>)",
      config);
  REQUIRE(b.layout.columns.size() == 3);
  CHECK(b.layout.spacing == Spacing::Proportional);
  const int x0 = b.layout.columns[0].x;
  // 3 of 30 days across a 240-pixel track.
  CHECK(b.layout.columns[1].x - x0 == 24);
  CHECK(b.layout.columns[2].x - x0 == 240);
  CHECK(b.layout.diagnostics.empty());
}

TEST_CASE("proportional spacing falls back to ordinal with a warning") {
  LayoutConfig config;
  config.spacing = Spacing::Proportional;
  auto b = build(
      R"(<doc dct="2021-01-31"><timex3 id="t1" type="misc">at some point</timex3> <d id="d1" rel="timeOn:t1">a</d> <d id="d2">b</d></doc>)",
      config);
  CHECK(b.layout.spacing == Spacing::Ordinal);
  REQUIRE(b.layout.diagnostics.size() == 1);
  CHECK(b.layout.diagnostics[0].code == "proportional-fallback");
  CHECK(b.layout.diagnostics[0].severity == Severity::Warning);
  CHECK(b.layout.columns[1].x - b.layout.columns[0].x == b.layout.metrics.column_width);
}

TEST_CASE("rendering is deterministic and survives a JSON round trip") {
  auto b = build(
      R"(<doc dct="2021-01-10" id="x"><timex3 id="t1" type="date">2021-01-05</timex3> <a id="a1" rel="subRegion:d1;timeOn:t1">lung</a> )"
      R"(<d id="d1" certainty="negative">nodule &amp; mass</d> <f id="f1" rel="featureSbj:d1">small</f> )"
      R"(<m-key id="m1" state="negated" rel="keyValue:v1;timeBegin:t1">drug</m-key> <m-val id="v1">1 mg</m-val> <r id="r1" state="scheduled" rel="timeAfter:DCT">surgery</r></doc>)");
  const std::string svg = render_svg(b.layout);
  CHECK(svg == render_svg(b.layout));
  const std::string view = timeline_to_view_json(b.doc, b.timeline, b.layout);
  const LayoutModel back = layout_from_view_json(view);
  CHECK(back == b.layout);
  CHECK(render_svg(back) == svg);
  // The anatomical bar is labelled with its (escaped) disease and styled by it.
  CHECK(svg.find(">nodule &amp; mass<") != std::string::npos);
  CHECK(bar(b.layout, "a1").style.strikethrough);
  CHECK_THROWS(layout_from_view_json(R"({"schema": "heart-view/0"})"));
}

TEST_CASE("view JSON carries document text and entity offsets") {
  auto b = build(R"(<doc dct="2021-04-01" id="v"><d id="d1" certainty="positive">fever</d> today</doc>)");
  auto j = nlohmann::json::parse(timeline_to_view_json(b.doc, b.timeline, b.layout));
  CHECK(j["schema"] == "heart-view/1");
  CHECK(j["document"]["text"] == "fever today");
  CHECK(j["document"]["entities"][0]["id"] == "d1");
  CHECK(j["document"]["entities"][0]["begin"] == 0);
  CHECK(j["document"]["entities"][0]["end"] == 5);
  CHECK(j["timeline"]["schema"] == "heart-timeline/1");
  CHECK(j["theme"]["pink"] == "#F48FB1");
}

TEST_CASE("themes") {
  const Theme& t = Theme::builtin();
  CHECK(t.color(ColorToken::Orange) == "#F4A261");
  CHECK(t.color(ColorToken::LightGreen) == "#C5E1A5");
  auto custom = Theme::parse(
      "# comment\norange #000000\npink #111111\nviolet #222222\ngreen #333333\nlightgreen #444444\n");
  CHECK(custom.color(ColorToken::Green) == "#333333");
  CHECK_THROWS_AS(Theme::parse("orange red\n"), std::runtime_error);
  CHECK_THROWS_AS(Theme::parse("purple #123456\n"), std::runtime_error);
  RenderConfig rc;
  rc.theme = &custom;
  auto b = build(R"(<doc dct="2021-04-01"><d id="d1">fever</d></doc>)");
  CHECK(render_svg(b.layout, rc).find("#111111") != std::string::npos);
}

TEST_CASE("canvas geometry is consistent") {
  auto b = build(R"(<doc dct="2021-04-01"><d id="d1">a</d> <r id="r1">b</r></doc>)");
  const auto& m = b.layout.metrics;
  CHECK(m.width > 0);
  CHECK(m.height > 0);
  int last_bottom = 0;
  for (const auto& r : b.layout.rows) {
    CHECK(r.y >= last_bottom);
    CHECK(r.height == static_cast<int>(r.lanes.size()) * m.lane_height);
    last_bottom = r.y + r.height;
  }
  CHECK(last_bottom < m.height);
}

}  // namespace
}  // namespace heart
