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
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "heart/utf8.hpp"

namespace heart {

extern const char* const kBuiltinTheme;

namespace {

constexpr std::string_view kCategoryNames[] = {"anatomical", "diseases", "test", "medicine",
                                               "clinical-treatment"};
constexpr std::string_view kColorNames[] = {"orange", "pink", "violet", "green", "lightgreen"};

std::string truncate(const std::string& text, std::size_t budget) {
  if (budget == 0 || utf8::length(text) <= budget) return text;
  return utf8::slice(text, 0, budget - 1) + "…";
}

StyleFlags style_for(const Entity* e) {
  StyleFlags s;
  if (!e) return s;
  if (e->certainty) {
    switch (*e->certainty) {
      case Certainty::Negative:
        s.hollow = true;
        s.strikethrough = true;
        break;
      case Certainty::Suspicious: s.dashed = true; break;
      case Certainty::General: s.gray = true; break;
      case Certainty::Positive: break;
    }
  }
  if (e->state) {
    if (*e->state == ExecState::Negated) s.cancelled = true;
    if (*e->state == ExecState::Scheduled) s.outline = true;
  }
  return s;
}

struct Item {
  bool is_table = false;
  std::size_t index = 0;
  int start = 0;
  int end = 0;
  std::int64_t mention = 0;
  int lines = 1;
  // Last column the item occupies in its lane; supplemental text takes one more.
  int reach = 0;
};

}  // namespace

std::string_view to_string(RowCategory c) { return kCategoryNames[static_cast<int>(c)]; }
std::string_view to_string(ColorToken t) { return kColorNames[static_cast<int>(t)]; }
std::string_view to_string(Spacing s) {
  return s == Spacing::Ordinal ? "ordinal" : "proportional";
}

std::optional<Spacing> spacing_from_string(std::string_view s) {
  if (s == "ordinal") return Spacing::Ordinal;
  if (s == "proportional") return Spacing::Proportional;
  return std::nullopt;
}

ColorToken color_for(RowCategory category) {
  switch (category) {
    case RowCategory::AnatomicalGroup: return ColorToken::Orange;
    case RowCategory::Diseases: return ColorToken::Pink;
    case RowCategory::Test: return ColorToken::Violet;
    case RowCategory::Medicine: return ColorToken::Green;
    case RowCategory::ClinicalTreatment: return ColorToken::LightGreen;
  }
  return ColorToken::Pink;
}

RowAssignment assign_rows(const AnnotatedDocument& doc, const Timeline& timeline) {
  RowAssignment out;
  std::vector<std::pair<std::string, std::string>> anatomical;  // (key, name)
  std::set<RowCategory> used;

  auto anatomical_row = [&](const Entity& e) {
    std::string key = e.surface;
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (std::size_t i = 0; i < anatomical.size(); ++i)
      if (anatomical[i].first == key) return "anat-" + std::to_string(i);
    anatomical.emplace_back(key, e.surface);
    return "anat-" + std::to_string(anatomical.size() - 1);
  };

  // Bundles are in mention order, so anatomical rows follow first mention.
  for (const auto& b : timeline.bundles) {
    const Entity* root = doc.find(b.root_id);
    RowCategory category = RowCategory::Diseases;
    std::string row_id;
    switch (b.kind) {
      case EntityKind::Anatomical:
        if (root) row_id = anatomical_row(*root);
        category = RowCategory::AnatomicalGroup;
        break;
      case EntityKind::Disease:
        for (const auto& id : b.contained_ids) {
          const Entity* e = doc.find(id);
          if (e && e->kind == EntityKind::Anatomical) {
            row_id = anatomical_row(*e);
            category = RowCategory::AnatomicalGroup;
            break;
          }
        }
        break;
      case EntityKind::TestKey:
      case EntityKind::TestVal:
        category = RowCategory::Test;
        break;
      case EntityKind::MedKey:
      case EntityKind::MedVal:
        category = RowCategory::Medicine;
        break;
      case EntityKind::Remedy:
      case EntityKind::ClinicalContext:
        category = RowCategory::ClinicalTreatment;
        break;
      default:
        break;
    }
    if (category == RowCategory::AnatomicalGroup && row_id.empty())
      category = RowCategory::Diseases;
    if (category != RowCategory::AnatomicalGroup) {
      row_id = std::string(to_string(category));
      used.insert(category);
    }
    out.row_of[b.root_id] = row_id;
  }

  for (std::size_t i = 0; i < anatomical.size(); ++i) {
    Row r;
    r.row_id = "anat-" + std::to_string(i);
    r.category = RowCategory::AnatomicalGroup;
    r.name = anatomical[i].second;
    r.color = color_for(r.category);
    out.rows.push_back(std::move(r));
  }
  static constexpr std::pair<RowCategory, std::string_view> kFixed[] = {
      {RowCategory::Diseases, "Diseases"},
      {RowCategory::Test, "Test"},
      {RowCategory::Medicine, "Medicine"},
      {RowCategory::ClinicalTreatment, "Clinical treatment"}};
  for (const auto& [category, name] : kFixed) {
    if (!used.count(category)) continue;
    Row r;
    r.row_id = std::string(to_string(category));
    r.category = category;
    r.name = std::string(name);
    r.color = color_for(category);
    out.rows.push_back(std::move(r));
  }
  return out;
}

LayoutModel layout_bars(const AnnotatedDocument& doc, const RowAssignment& assignment,
                        const Timeline& timeline, const LayoutConfig& config) {
  LayoutModel layout;
  layout.metrics = config.metrics;
  const CanvasMetrics& m = layout.metrics;

  // Visible columns; an empty DCT cluster is hidden unless requested.
  int dct_index = -1;
  for (const auto& c : timeline.clusters)
    if (c.anchor_timex_id == kDctId) dct_index = c.order_index;
  bool hide_dct = false;
  if (!config.show_empty_dct && dct_index >= 0) {
    hide_dct = true;
    for (const auto& c : timeline.clusters)
      if (c.order_index == dct_index && !c.members.empty()) hide_dct = false;
    for (const auto& s : timeline.spans)
      if (s.begin_cluster == dct_index || s.end_cluster == dct_index) hide_dct = false;
  }
  auto column_of = [&](int cluster_index) {
    return hide_dct && cluster_index > dct_index ? cluster_index - 1 : cluster_index;
  };
  std::vector<const TimeCluster*> visible;
  for (const auto& c : timeline.clusters) {
    if (hide_dct && c.order_index == dct_index) continue;
    visible.push_back(&c);
  }

  std::map<std::string, std::int64_t> mention;
  for (const auto& e : doc.entities) mention[e.id] = static_cast<std::int64_t>(e.span.begin);
  auto surface = [&](const std::string& id) -> std::string {
    const Entity* e = doc.find(id);
    return e ? e->surface : id;
  };

  std::map<std::string, std::vector<Item>> items_by_row;
  std::map<std::tuple<std::string, int, int>, std::size_t> table_slot;

  for (const auto& b : timeline.bundles) {
    const EntitySpan* span = timeline.find_span(b.root_id);
    if (!span) continue;
    const std::string& row_id = assignment.row_of.at(b.root_id);
    const int start = column_of(span->begin_cluster);
    const int end = column_of(span->end_cluster);
    const Entity* root = doc.find(b.root_id);

    std::vector<std::string> entity_ids{b.root_id};
    entity_ids.insert(entity_ids.end(), b.contained_ids.begin(), b.contained_ids.end());
    if (b.key_value) entity_ids.push_back(*b.key_value);
    entity_ids.insert(entity_ids.end(), b.features.begin(), b.features.end());
    for (const auto& c : b.changes) entity_ids.push_back(c.change_id);
    entity_ids.insert(entity_ids.end(), b.durations.begin(), b.durations.end());

    if (b.key_value) {
      auto key = std::make_tuple(row_id, start, end);
      auto it = table_slot.find(key);
      if (it == table_slot.end()) {
        KeyValueTable t;
        t.table_id = "tbl-" + b.root_id;
        t.row_id = row_id;
        t.start_col = start;
        t.end_col = end;
        it = table_slot.emplace(key, layout.tables.size()).first;
        layout.tables.push_back(std::move(t));
        items_by_row[row_id].push_back(
            {true, it->second, start, end, mention[b.root_id], 0, end});
      }
      TableEntry entry;
      entry.bundle_root_id = b.root_id;
      entry.key = b.label;
      entry.value = surface(*b.key_value);
      entry.style = style_for(root);
      entry.entity_ids = std::move(entity_ids);
      layout.tables[it->second].entries.push_back(std::move(entry));
      continue;
    }

    Bar bar;
    bar.bar_id = "bar-" + b.root_id;
    bar.bundle_root_id = b.root_id;
    bar.row_id = row_id;
    bar.start_col = start;
    bar.end_col = end;
    bar.open_start = span->open_start;
    bar.open_end = span->open_end;
    bar.entity_ids = std::move(entity_ids);

    // Depth of each contained entity below the root.
    std::map<std::string, int> depth;
    std::map<std::string, std::string> parent;
    depth[b.root_id] = 0;
    for (std::size_t i = 0; i < b.contained_ids.size(); ++i) {
      parent[b.contained_ids[i]] = b.contained_parents[i];
      depth[b.contained_ids[i]] = depth[b.contained_parents[i]] + 1;
    }
    const bool anatomical_root = b.kind == EntityKind::Anatomical;
    const int shift = anatomical_root ? 1 : 0;  // the row already names the anatomy
    const Entity* style_source = root;
    std::vector<std::string> top;
    for (const auto& id : b.contained_ids) {
      int d = depth[id] - shift;
      if (d == 0) {
        top.push_back(surface(id));
        continue;
      }
      SubLabel sub;
      sub.depth = std::min(d, 2);
      if (d > 2) {
        std::vector<std::string> path;
        std::string cur = id;
        for (int k = d; k >= 2; --k) {
          path.push_back(surface(cur));
          cur = parent[cur];
        }
        std::reverse(path.begin(), path.end());
        for (std::size_t k = 0; k < path.size(); ++k) {
          if (k) sub.text += " › ";
          sub.text += path[k];
        }
      } else {
        sub.text = surface(id);
      }
      bar.sub_labels.push_back(std::move(sub));
    }
    if (anatomical_root) {
      for (const auto& id : b.contained_ids) {
        const Entity* e = doc.find(id);
        if (e && e->kind == EntityKind::Disease) {
          style_source = e;
          break;
        }
      }
      if (top.empty()) {
        bar.label = b.label;
      } else {
        for (std::size_t k = 0; k < top.size(); ++k) {
          if (k) bar.label += ", ";
          bar.label += top[k];
        }
      }
    } else {
      bar.label = b.label;
    }
    bar.style = style_for(style_source);

    for (const auto& f : b.features) bar.supplemental_full.push_back(surface(f));
    for (const auto& c : b.changes) {
      std::string text = surface(c.change_id);
      if (c.ref_id) text += " (vs. " + surface(*c.ref_id) + ")";
      bar.supplemental_full.push_back(std::move(text));
    }
    for (const auto& d : b.durations) bar.supplemental_full.push_back(surface(d));
    for (const auto& s : bar.supplemental_full)
      bar.supplemental_labels.push_back(truncate(s, config.label_budget));

    const int lines = std::max(1 + static_cast<int>(bar.sub_labels.size()),
                               static_cast<int>(bar.supplemental_labels.size()));
    const int reach = end + (bar.supplemental_labels.empty() ? 0 : 1);
    items_by_row[row_id].push_back(
        {false, layout.bars.size(), start, end, mention[b.root_id], lines, reach});
    layout.bars.push_back(std::move(bar));
  }
  for (auto& [row_id, items] : items_by_row) {
    for (auto& item : items)
      if (item.is_table) item.lines = static_cast<int>(layout.tables[item.index].entries.size());
  }

  // Columns.
  const int x0 = m.margin + m.row_label_width;
  layout.spacing = Spacing::Ordinal;
  std::vector<int> xs;
  for (std::size_t i = 0; i < visible.size(); ++i)
    xs.push_back(x0 + static_cast<int>(i) * m.column_width);
  if (config.spacing == Spacing::Proportional && visible.size() > 1) {
    std::vector<std::int64_t> days;
    for (const auto* c : visible) {
      auto abs = resolve(c->anchor, timeline.dct);
      if (!abs) break;
      days.push_back(to_epoch_days(abs->first_day()));
    }
    if (days.size() != visible.size()) {
      layout.diagnostics.push_back(make_warning(
          "proportional-fallback",
          "proportional spacing needs every column anchor resolved; using ordinal spacing"));
    } else if (!std::is_sorted(days.begin(), days.end())) {
      layout.diagnostics.push_back(make_warning(
          "proportional-fallback",
          "column anchors are not in calendar order; using ordinal spacing"));
    } else if (days.front() < days.back()) {
      const std::int64_t range = days.back() - days.front();
      const std::int64_t track = static_cast<std::int64_t>(m.column_width) *
                                 static_cast<std::int64_t>(visible.size() - 1);
      std::vector<int> scaled;
      for (std::size_t i = 0; i < visible.size(); ++i)
        scaled.push_back(x0 + static_cast<int>(((days[i] - days.front()) * track + range / 2) / range));
      if (std::adjacent_find(scaled.begin(), scaled.end(), std::greater_equal<int>()) !=
          scaled.end()) {
        layout.diagnostics.push_back(make_warning(
            "proportional-fallback",
            "columns would coincide under proportional spacing; using ordinal spacing"));
      } else {
        xs = std::move(scaled);
        layout.spacing = Spacing::Proportional;
      }
    } else {
      layout.diagnostics.push_back(make_warning(
          "proportional-fallback",
          "all column anchors fall on one day; using ordinal spacing"));
    }
  }
  for (std::size_t i = 0; i < visible.size(); ++i) {
    Column col;
    col.cluster_id = visible[i]->cluster_id;
    col.label = visible[i]->anchor_label;
    if (auto abs = resolve(visible[i]->anchor, timeline.dct))
      col.resolved_date = format_absolute(*abs);
    col.x = xs[i];
    col.width = m.column_width;
    layout.columns.push_back(std::move(col));
  }

  // First-fit lane packing per row, then vertical geometry.
  int y = m.margin + m.header_height;
  for (Row row : assignment.rows) {
    auto& items = items_by_row[row.row_id];
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
      return std::tie(a.start, a.end, a.mention) < std::tie(b.start, b.end, b.mention);
    });
    std::vector<int> lane_end;
    std::vector<int> lane_lines;
    for (const auto& item : items) {
      std::size_t lane = 0;
      while (lane < lane_end.size() && lane_end[lane] >= item.start) ++lane;
      if (lane == lane_end.size()) {
        lane_end.push_back(item.reach);
        lane_lines.push_back(item.lines);
        row.lanes.push_back({static_cast<int>(lane), 0, 0, {}});
      } else {
        lane_end[lane] = std::max(lane_end[lane], item.reach);
        lane_lines[lane] = std::max(lane_lines[lane], item.lines);
      }
      if (item.is_table) {
        layout.tables[item.index].lane = static_cast<int>(lane);
        row.lanes[lane].items.push_back(layout.tables[item.index].table_id);
      } else {
        layout.bars[item.index].lane = static_cast<int>(lane);
        row.lanes[lane].items.push_back(layout.bars[item.index].bar_id);
      }
    }
    row.y = y;
    int ly = y;
    for (std::size_t k = 0; k < row.lanes.size(); ++k) {
      row.lanes[k].y = ly;
      row.lanes[k].height = std::max(1, lane_lines[k]) * m.lane_height;
      ly += row.lanes[k].height;
    }
    row.height = std::max(ly - y, m.lane_height);
    y += row.height + m.row_gap;
    layout.rows.push_back(std::move(row));
  }

  int right = x0 + m.column_width;
  for (const auto& c : layout.columns) right = std::max(right, c.x + c.width);
  layout.metrics.width = right + m.supplemental_width + m.margin;
  layout.metrics.height = y + m.legend_height + m.margin;
  return layout;
}

LayoutModel build_layout(const AnnotatedDocument& doc, const Timeline& timeline,
                         const LayoutConfig& config) {
  return layout_bars(doc, assign_rows(doc, timeline), timeline, config);
}

// ---------------------------------------------------------------------------

Theme Theme::parse(std::string_view source) {
  Theme theme;
  std::istringstream in{std::string(source)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    std::string token, hex, extra;
    if (!(words >> token) || token[0] == '#') continue;
    auto fail = [&](const std::string& why) {
      throw std::runtime_error("theme line " + std::to_string(line_no) + ": " + why);
    };
    if (!(words >> hex) || (words >> extra)) fail("expected '<token> #rrggbb'");
    if (hex.size() != 7 || hex[0] != '#' ||
        hex.find_first_not_of("0123456789abcdefABCDEF", 1) != std::string::npos)
      fail("bad colour '" + hex + "'");
    bool found = false;
    for (int i = 0; i < 5; ++i) {
      if (kColorNames[i] == token) {
        theme.colors[static_cast<ColorToken>(i)] = hex;
        found = true;
      }
    }
    if (!found) fail("unknown colour token '" + token + "'");
  }
  for (int i = 0; i < 5; ++i) {
    if (!theme.colors.count(static_cast<ColorToken>(i)))
      throw std::runtime_error("theme lacks token '" + std::string(kColorNames[i]) + "'");
  }
  return theme;
}

Theme Theme::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open theme '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const Theme& Theme::builtin() {
  static const Theme theme = parse(kBuiltinTheme);
  return theme;
}

const std::string& Theme::color(ColorToken token) const { return colors.at(token); }

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

json style_json(const StyleFlags& s) {
  return {{"hollow", s.hollow}, {"strikethrough", s.strikethrough}, {"dashed", s.dashed},
          {"gray", s.gray},     {"cancelled", s.cancelled},         {"outline", s.outline}};
}

StyleFlags style_from(const json& j) {
  return {j.at("hollow").get<bool>(),    j.at("strikethrough").get<bool>(),
          j.at("dashed").get<bool>(),    j.at("gray").get<bool>(),
          j.at("cancelled").get<bool>(), j.at("outline").get<bool>()};
}

template <typename Enum, std::size_t N>
Enum enum_from(const std::string_view (&names)[N], const std::string& s) {
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == s) return static_cast<Enum>(i);
  throw std::runtime_error("unknown value '" + s + "'");
}

}  // namespace

nlohmann::json layout_to_json_value(const LayoutModel& layout) {
  json columns = json::array();
  for (const auto& c : layout.columns) {
    json j = {{"clusterId", c.cluster_id}, {"label", c.label}, {"x", c.x}, {"width", c.width}};
    if (c.resolved_date) j["resolvedDate"] = *c.resolved_date;
    columns.push_back(std::move(j));
  }
  json rows = json::array();
  for (const auto& r : layout.rows) {
    json lanes = json::array();
    for (const auto& l : r.lanes)
      lanes.push_back({{"index", l.index}, {"y", l.y}, {"height", l.height}, {"items", l.items}});
    rows.push_back({{"rowId", r.row_id},
                    {"category", to_string(r.category)},
                    {"name", r.name},
                    {"color", to_string(r.color)},
                    {"y", r.y},
                    {"height", r.height},
                    {"lanes", std::move(lanes)}});
  }
  json bars = json::array();
  for (const auto& b : layout.bars) {
    json subs = json::array();
    for (const auto& s : b.sub_labels) subs.push_back({{"text", s.text}, {"depth", s.depth}});
    bars.push_back({{"barId", b.bar_id},
                    {"bundleRootId", b.bundle_root_id},
                    {"rowId", b.row_id},
                    {"lane", b.lane},
                    {"startCol", b.start_col},
                    {"endCol", b.end_col},
                    {"openStart", b.open_start},
                    {"openEnd", b.open_end},
                    {"label", b.label},
                    {"subLabels", std::move(subs)},
                    {"supplementalLabels", b.supplemental_labels},
                    {"supplementalFull", b.supplemental_full},
                    {"style", style_json(b.style)},
                    {"entityIds", b.entity_ids}});
  }
  json tables = json::array();
  for (const auto& t : layout.tables) {
    json entries = json::array();
    for (const auto& e : t.entries) {
      entries.push_back({{"bundleRootId", e.bundle_root_id},
                         {"key", e.key},
                         {"value", e.value},
                         {"style", style_json(e.style)},
                         {"entityIds", e.entity_ids}});
    }
    tables.push_back({{"tableId", t.table_id},
                      {"rowId", t.row_id},
                      {"lane", t.lane},
                      {"startCol", t.start_col},
                      {"endCol", t.end_col},
                      {"entries", std::move(entries)}});
  }
  const auto& m = layout.metrics;
  json metrics = {{"columnWidth", m.column_width},     {"laneHeight", m.lane_height},
                  {"rowGap", m.row_gap},               {"headerHeight", m.header_height},
                  {"rowLabelWidth", m.row_label_width}, {"margin", m.margin},
                  {"supplementalWidth", m.supplemental_width},
                  {"legendHeight", m.legend_height},   {"width", m.width},
                  {"height", m.height}};
  return {{"columns", std::move(columns)}, {"rows", std::move(rows)},
          {"bars", std::move(bars)},       {"tables", std::move(tables)},
          {"metrics", std::move(metrics)}, {"spacing", to_string(layout.spacing)},
          {"diagnostics", diagnostics_to_json(layout.diagnostics)}};
}

LayoutModel layout_from_json_value(const nlohmann::json& j) {
  LayoutModel layout;
  for (const auto& c : j.at("columns")) {
    Column col;
    col.cluster_id = c.at("clusterId").get<std::string>();
    col.label = c.at("label").get<std::string>();
    if (c.contains("resolvedDate")) col.resolved_date = c.at("resolvedDate").get<std::string>();
    col.x = c.at("x").get<int>();
    col.width = c.at("width").get<int>();
    layout.columns.push_back(std::move(col));
  }
  for (const auto& r : j.at("rows")) {
    Row row;
    row.row_id = r.at("rowId").get<std::string>();
    row.category = enum_from<RowCategory>(kCategoryNames, r.at("category").get<std::string>());
    row.name = r.at("name").get<std::string>();
    row.color = enum_from<ColorToken>(kColorNames, r.at("color").get<std::string>());
    row.y = r.at("y").get<int>();
    row.height = r.at("height").get<int>();
    for (const auto& l : r.at("lanes")) {
      row.lanes.push_back({l.at("index").get<int>(), l.at("y").get<int>(),
                           l.at("height").get<int>(),
                           l.at("items").get<std::vector<std::string>>()});
    }
    layout.rows.push_back(std::move(row));
  }
  for (const auto& b : j.at("bars")) {
    Bar bar;
    bar.bar_id = b.at("barId").get<std::string>();
    bar.bundle_root_id = b.at("bundleRootId").get<std::string>();
    bar.row_id = b.at("rowId").get<std::string>();
    bar.lane = b.at("lane").get<int>();
    bar.start_col = b.at("startCol").get<int>();
    bar.end_col = b.at("endCol").get<int>();
    bar.open_start = b.at("openStart").get<bool>();
    bar.open_end = b.at("openEnd").get<bool>();
    bar.label = b.at("label").get<std::string>();
    for (const auto& s : b.at("subLabels"))
      bar.sub_labels.push_back({s.at("text").get<std::string>(), s.at("depth").get<int>()});
    bar.supplemental_labels = b.at("supplementalLabels").get<std::vector<std::string>>();
    bar.supplemental_full = b.at("supplementalFull").get<std::vector<std::string>>();
    bar.style = style_from(b.at("style"));
    bar.entity_ids = b.at("entityIds").get<std::vector<std::string>>();
    layout.bars.push_back(std::move(bar));
  }
  for (const auto& t : j.at("tables")) {
    KeyValueTable table;
    table.table_id = t.at("tableId").get<std::string>();
    table.row_id = t.at("rowId").get<std::string>();
    table.lane = t.at("lane").get<int>();
    table.start_col = t.at("startCol").get<int>();
    table.end_col = t.at("endCol").get<int>();
    for (const auto& e : t.at("entries")) {
      table.entries.push_back({e.at("bundleRootId").get<std::string>(),
                               e.at("key").get<std::string>(), e.at("value").get<std::string>(),
                               style_from(e.at("style")),
                               e.at("entityIds").get<std::vector<std::string>>()});
    }
    layout.tables.push_back(std::move(table));
  }
  const auto& m = j.at("metrics");
  layout.metrics = {m.at("columnWidth").get<int>(),     m.at("laneHeight").get<int>(),
                    m.at("rowGap").get<int>(),          m.at("headerHeight").get<int>(),
                    m.at("rowLabelWidth").get<int>(),   m.at("margin").get<int>(),
                    m.at("supplementalWidth").get<int>(), m.at("legendHeight").get<int>(),
                    m.at("width").get<int>(),           m.at("height").get<int>()};
  auto spacing = spacing_from_string(j.at("spacing").get<std::string>());
  if (!spacing) throw std::runtime_error("unknown spacing");
  layout.spacing = *spacing;
  for (const auto& d : j.at("diagnostics")) {
    Diagnostic diag;
    diag.severity = d.at("severity").get<std::string>() == "error" ? Severity::Error
                                                                   : Severity::Warning;
    diag.code = d.at("code").get<std::string>();
    diag.message = d.at("message").get<std::string>();
    if (d.contains("location")) diag.location = d.at("location").get<std::size_t>();
    layout.diagnostics.push_back(std::move(diag));
  }
  return layout;
}

std::string timeline_to_view_json(const AnnotatedDocument& doc, const Timeline& timeline,
                                  const LayoutModel& layout) {
  json entities = json::array();
  AnnotatedDocument canonical = doc;
  canonicalize(canonical);
  for (const auto& e : canonical.entities) {
    json j = {{"id", e.id},
              {"kind", to_string(e.kind)},
              {"begin", e.span.begin},
              {"end", e.span.end},
              {"surface", e.surface}};
    if (e.certainty) j["certainty"] = to_string(*e.certainty);
    if (e.timex_type) j["type"] = to_string(*e.timex_type);
    if (e.state) j["state"] = to_string(*e.state);
    entities.push_back(std::move(j));
  }
  json theme = json::object();
  for (const auto& [token, hex] : Theme::builtin().colors) theme[std::string(to_string(token))] = hex;
  json view = {{"schema", kViewSchema},
               {"timeline", timeline_to_json_value(timeline)},
               {"layout", layout_to_json_value(layout)},
               {"document",
                {{"docId", doc.doc_id},
                 {"dct", format_iso_date(doc.dct)},
                 {"text", doc.text},
                 {"entities", std::move(entities)}}},
               {"theme", std::move(theme)}};
  return view.dump(2) + "\n";
}

LayoutModel layout_from_view_json(std::string_view view_json) {
  json j = json::parse(view_json);
  if (!j.is_object() || j.value("schema", "") != kViewSchema)
    throw std::runtime_error("not a heart-view/1 document");
  return layout_from_json_value(j.at("layout"));
}

}  // namespace heart
