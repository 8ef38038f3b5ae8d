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

#ifndef HEART_LAYOUT_HPP_
#define HEART_LAYOUT_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heart/annotation.hpp"
#include "heart/timeline.hpp"
#include "json.hpp"

namespace heart {

enum class RowCategory { AnatomicalGroup, Diseases, Test, Medicine, ClinicalTreatment };

// Theme-independent colour names; a theme maps them to concrete colours.
enum class ColorToken { Orange, Pink, Violet, Green, LightGreen };

enum class Spacing { Ordinal, Proportional };

std::string_view to_string(RowCategory category);
std::string_view to_string(ColorToken token);
std::string_view to_string(Spacing spacing);
std::optional<Spacing> spacing_from_string(std::string_view s);
ColorToken color_for(RowCategory category);

struct Lane {
  int index = 0;
  int y = 0;
  int height = 0;
  std::vector<std::string> items;  // bar and table ids

  bool operator==(const Lane&) const = default;
};

struct Row {
  std::string row_id;
  RowCategory category = RowCategory::Diseases;
  std::string name;
  ColorToken color = ColorToken::Pink;
  int y = 0;
  int height = 0;
  std::vector<Lane> lanes;

  bool operator==(const Row&) const = default;
};

struct StyleFlags {
  bool hollow = false;
  bool strikethrough = false;
  bool dashed = false;
  bool gray = false;
  bool cancelled = false;
  bool outline = false;

  bool operator==(const StyleFlags&) const = default;
};

struct SubLabel {
  std::string text;
  int depth = 1;

  bool operator==(const SubLabel&) const = default;
};

struct Bar {
  std::string bar_id;
  std::string bundle_root_id;
  std::string row_id;
  int lane = 0;
  int start_col = 0;
  int end_col = 0;
  bool open_start = false;
  bool open_end = false;
  std::string label;
  std::vector<SubLabel> sub_labels;
  std::vector<std::string> supplemental_labels;  // truncated for display
  std::vector<std::string> supplemental_full;
  StyleFlags style;
  std::vector<std::string> entity_ids;  // every entity the bar stands for

  bool operator==(const Bar&) const = default;
};

struct TableEntry {
  std::string bundle_root_id;
  std::string key;
  std::string value;
  StyleFlags style;
  std::vector<std::string> entity_ids;

  bool operator==(const TableEntry&) const = default;
};

struct KeyValueTable {
  std::string table_id;
  std::string row_id;
  int lane = 0;
  int start_col = 0;
  int end_col = 0;
  std::vector<TableEntry> entries;

  bool operator==(const KeyValueTable&) const = default;
};

struct Column {
  std::string cluster_id;
  std::string label;
  std::optional<std::string> resolved_date;
  int x = 0;
  int width = 0;

  bool operator==(const Column&) const = default;
};

struct CanvasMetrics {
  int column_width = 120;
  int lane_height = 22;
  int row_gap = 6;
  int header_height = 48;
  int row_label_width = 160;
  int margin = 16;
  int supplemental_width = 200;
  int legend_height = 28;
  int width = 0;
  int height = 0;

  bool operator==(const CanvasMetrics&) const = default;
};

struct LayoutModel {
  std::vector<Column> columns;
  std::vector<Row> rows;
  std::vector<Bar> bars;
  std::vector<KeyValueTable> tables;
  CanvasMetrics metrics;
  Spacing spacing = Spacing::Ordinal;
  Diagnostics diagnostics;

  bool operator==(const LayoutModel&) const = default;
};

struct LayoutConfig {
  Spacing spacing = Spacing::Ordinal;
  bool show_empty_dct = false;
  std::size_t label_budget = 24;
  CanvasMetrics metrics;
};

struct RowAssignment {
  std::vector<Row> rows;  // no lanes yet
  std::map<std::string, std::string> row_of;  // bundle root id -> row id
};

RowAssignment assign_rows(const AnnotatedDocument& doc, const Timeline& timeline);

LayoutModel layout_bars(const AnnotatedDocument& doc, const RowAssignment& rows,
                        const Timeline& timeline, const LayoutConfig& config = {});

LayoutModel build_layout(const AnnotatedDocument& doc, const Timeline& timeline,
                         const LayoutConfig& config = {});

// Token -> "#rrggbb".
struct Theme {
  std::map<ColorToken, std::string> colors;

  // Lines of "<token> #rrggbb"; throws std::runtime_error on bad input.
  static Theme parse(std::string_view source);
  static Theme load(const std::string& path);
  static const Theme& builtin();
  const std::string& color(ColorToken token) const;
};

struct RenderConfig {
  const Theme* theme = nullptr;  // builtin when null
  int font_size = 12;
};

std::string render_svg(const LayoutModel& layout, const RenderConfig& config = {});

nlohmann::json layout_to_json_value(const LayoutModel& layout);
LayoutModel layout_from_json_value(const nlohmann::json& j);

inline constexpr std::string_view kViewSchema = "heart-view/1";

// heart-view/1: timeline, layout, source text and entity offsets.
std::string timeline_to_view_json(const AnnotatedDocument& doc, const Timeline& timeline,
                                  const LayoutModel& layout);

// Recovers the layout from a heart-view/1 document; throws on schema mismatch.
LayoutModel layout_from_view_json(std::string_view view_json);

}  // namespace heart

#endif  // HEART_LAYOUT_HPP_
