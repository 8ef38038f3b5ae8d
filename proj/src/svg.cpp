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

#include <algorithm>
#include <map>
#include <string>

#include "heart/layout.hpp"
#include "heart/utf8.hpp"

namespace heart {
namespace {

std::string esc(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

class SvgWriter {
 public:
  void line(const std::string& s) {
    out_ += s;
    out_ += '\n';
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

std::string num(int v) { return std::to_string(v); }

// Shortens `text` with an ellipsis so it fits `px` at an average glyph width
// of 0.55 em.
std::string fit(const std::string& text, int px, int font_size) {
  const double per_char = std::max(1.0, 0.55 * font_size);
  const auto room = static_cast<std::size_t>(std::max(px, 0) / per_char);
  if (utf8::length(text) <= room) return text;
  if (room == 0) return "";
  return utf8::slice(text, 0, room - 1) + "…";
}

std::string attr(std::string_view name, const std::string& value) {
  return " " + std::string(name) + "=\"" + value + "\"";
}

std::string attr(std::string_view name, int value) { return attr(name, num(value)); }

}  // namespace

std::string render_svg(const LayoutModel& layout, const RenderConfig& config) {
  const Theme& theme = config.theme ? *config.theme : Theme::builtin();
  const CanvasMetrics& m = layout.metrics;
  const int fs = config.font_size;
  const int x0 = m.margin + m.row_label_width;
  const int track_right = m.width - m.supplemental_width - m.margin;
  const int axis_y = m.margin + m.header_height - 6;

  std::map<std::string, const Row*> rows;
  for (const auto& r : layout.rows) rows[r.row_id] = &r;
  auto lane_of = [&](const std::string& row_id, int lane) -> const Lane* {
    auto it = rows.find(row_id);
    if (it == rows.end() || lane < 0 || lane >= static_cast<int>(it->second->lanes.size()))
      return nullptr;
    return &it->second->lanes[static_cast<std::size_t>(lane)];
  };
  auto col_left = [&](int c) {
    if (c < 0 || c >= static_cast<int>(layout.columns.size())) return x0;
    return layout.columns[static_cast<std::size_t>(c)].x;
  };
  auto col_right = [&](int c) {
    if (c < 0 || c >= static_cast<int>(layout.columns.size())) return x0 + m.column_width;
    const auto& col = layout.columns[static_cast<std::size_t>(c)];
    return col.x + col.width;
  };

  SvgWriter w;
  w.line("<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
  w.line("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"" + attr("width", m.width) +
         attr("height", m.height) +
         attr("viewBox", "0 0 " + num(m.width) + " " + num(m.height)) +
         " font-family=\"sans-serif\"" + attr("font-size", fs) + ">");
  w.line("<rect x=\"0\" y=\"0\"" + attr("width", m.width) + attr("height", m.height) +
         " fill=\"#FFFFFF\"/>");

  // Column headers and grid.
  w.line("<g class=\"columns\">");
  for (const auto& c : layout.columns) {
    const int cx = c.x + c.width / 2;
    w.line("<line" + attr("x1", c.x) + attr("y1", axis_y) + attr("x2", c.x) +
           attr("y2", m.height - m.margin - m.legend_height) +
           " stroke=\"#E0E0E0\" stroke-width=\"1\"/>");
    w.line("<text class=\"column-label\"" + attr("x", cx) + attr("y", m.margin + fs + 2) +
           " text-anchor=\"middle\" font-weight=\"bold\">" + esc(c.label) + "</text>");
    if (c.resolved_date) {
      w.line("<text class=\"column-date\"" + attr("x", cx) + attr("y", m.margin + 2 * fs + 8) +
             " text-anchor=\"middle\" fill=\"#757575\">" + esc(*c.resolved_date) + "</text>");
    }
  }
  w.line("<line class=\"axis\"" + attr("x1", x0) + attr("y1", axis_y) +
         attr("x2", std::max(track_right, x0 + m.column_width)) + attr("y2", axis_y) +
         " stroke=\"#424242\" stroke-width=\"2\"/>");
  w.line("</g>");

  // Row bands.
  w.line("<g class=\"rows\">");
  for (const auto& r : layout.rows) {
    const std::string& color = theme.color(r.color);
    w.line("<rect class=\"row-band\"" + attr("x", m.margin) + attr("y", r.y) +
           attr("width", m.width - 2 * m.margin) + attr("height", r.height) +
           attr("fill", color) + " fill-opacity=\"0.12\"/>");
    w.line("<text class=\"row-label\"" + attr("x", m.margin + 4) + attr("y", r.y + fs + 4) +
           " font-weight=\"bold\">" + esc(r.name) + "</text>");
  }
  w.line("</g>");

  auto icon_cancelled = [&](int x, int y) {
    w.line("<g class=\"cancelled\"><circle" + attr("cx", x) + attr("cy", y) +
           " r=\"5\" fill=\"#FFFFFF\" stroke=\"#C62828\" stroke-width=\"1.5\"/><line" +
           attr("x1", x - 3) + attr("y1", y + 3) + attr("x2", x + 3) + attr("y2", y - 3) +
           " stroke=\"#C62828\" stroke-width=\"1.5\"/></g>");
  };

  // Bars.
  w.line("<g class=\"bars\">");
  for (const auto& b : layout.bars) {
    const Lane* lane = lane_of(b.row_id, b.lane);
    auto row_it = rows.find(b.row_id);
    if (!lane || row_it == rows.end()) continue;
    const std::string& color = theme.color(row_it->second->color);
    const int x = col_left(b.start_col) + 4;
    const int right = col_right(b.end_col) - 4;
    const int y = lane->y + 2;
    const int h = (1 + static_cast<int>(b.sub_labels.size())) * m.lane_height - 4;
    std::string fill = color;
    std::string extra;
    if (b.style.gray) fill = "#BDBDBD";
    if (b.style.hollow || b.style.outline) fill = "#FFFFFF";
    if (b.style.dashed || b.style.outline) extra += " stroke-dasharray=\"4 3\"";
    w.line("<g class=\"bar\"" + attr("id", esc(b.bar_id)) +
           attr("data-entities", esc([&] {
             std::string ids;
             for (std::size_t i = 0; i < b.entity_ids.size(); ++i) {
               if (i) ids += ' ';
               ids += b.entity_ids[i];
             }
             return ids;
           }())) +
           ">");
    w.line("<rect" + attr("x", x) + attr("y", y) + attr("width", std::max(right - x, 4)) +
           attr("height", h) + " rx=\"4\"" + attr("fill", fill) + attr("stroke", color) +
           " stroke-width=\"1.5\"" + extra + "/>");
    const int mid = y + (m.lane_height - 4) / 2;
    if (b.open_start) {
      w.line("<polygon class=\"open-start\"" +
             attr("points", num(x) + "," + num(mid - 5) + " " + num(x - 6) + "," + num(mid) +
                                " " + num(x) + "," + num(mid + 5)) +
             attr("fill", color) + "/>");
    }
    if (b.open_end) {
      w.line("<polygon class=\"open-end\"" +
             attr("points", num(right) + "," + num(mid - 5) + " " + num(right + 6) + "," +
                                num(mid) + " " + num(right) + "," + num(mid + 5)) +
             attr("fill", color) + "/>");
    }
    std::string title = b.label;
    for (const auto& s : b.sub_labels) title += "\n" + s.text;
    for (const auto& s : b.supplemental_full) title += "\n" + s;
    w.line("<title>" + esc(title) + "</title>");
    std::string decoration = b.style.strikethrough ? " text-decoration=\"line-through\"" : "";
    const int label_room = right - x - 12 - (b.style.cancelled ? 14 : 0);
    w.line("<text class=\"bar-label\"" + attr("x", x + 6) + attr("y", y + fs + 3) +
           decoration + ">" + esc(fit(b.label, label_room, fs)) + "</text>");
    for (std::size_t k = 0; k < b.sub_labels.size(); ++k) {
      const auto& s = b.sub_labels[k];
      const int sx = x + 6 + 12 * s.depth;
      w.line("<text class=\"sub-label\"" + attr("x", sx) +
             attr("y", y + static_cast<int>(k + 1) * m.lane_height + fs + 3) + ">" +
             esc(fit(s.text, right - sx - 6, fs)) + "</text>");
    }
    if (b.style.cancelled) icon_cancelled(right - 10, mid);
    // Supplemental text uses the next column, or the right margin after the last one.
    const bool last = b.end_col + 1 >= static_cast<int>(layout.columns.size());
    const int supplemental_room =
        (last ? m.supplemental_width : col_right(b.end_col + 1) - right - 4) - 14;
    for (std::size_t k = 0; k < b.supplemental_labels.size(); ++k) {
      w.line("<text class=\"supplemental\"" + attr("x", right + 10) +
             attr("y", y + fs + 3 + static_cast<int>(k) * m.lane_height) +
             attr("font-size", fs - 1) + " fill=\"#616161\">" +
             esc(fit(b.supplemental_labels[k], supplemental_room, fs - 1)) + "</text>");
    }
    w.line("</g>");
  }
  w.line("</g>");

  // Key-value tables.
  w.line("<g class=\"tables\">");
  for (const auto& t : layout.tables) {
    const Lane* lane = lane_of(t.row_id, t.lane);
    auto row_it = rows.find(t.row_id);
    if (!lane || row_it == rows.end()) continue;
    const std::string& color = theme.color(row_it->second->color);
    const int x = col_left(t.start_col) + 4;
    const int right = col_right(t.end_col) - 4;
    const int y = lane->y + 2;
    const int h = static_cast<int>(t.entries.size()) * m.lane_height - 4;
    // Key and value cells share the width in proportion to their longest text.
    std::size_t key_chars = 1, value_chars = 1;
    for (const auto& e : t.entries) {
      key_chars = std::max(key_chars, utf8::length(e.key));
      value_chars = std::max(value_chars, utf8::length(e.value));
    }
    const double share =
        std::clamp(static_cast<double>(key_chars) / static_cast<double>(key_chars + value_chars),
                   0.3, 0.7);
    const int split = x + static_cast<int>((right - x) * share);
    w.line("<g class=\"kv-table\"" + attr("id", esc(t.table_id)) + ">");
    w.line("<rect" + attr("x", x) + attr("y", y) + attr("width", std::max(right - x, 4)) +
           attr("height", std::max(h, 4)) + " fill=\"#FFFFFF\"" + attr("stroke", color) +
           " stroke-width=\"1.5\"/>");
    w.line("<line" + attr("x1", split) + attr("y1", y) + attr("x2", split) + attr("y2", y + h) +
           attr("stroke", color) + "/>");
    for (std::size_t k = 0; k < t.entries.size(); ++k) {
      const auto& e = t.entries[k];
      const int ey = y + static_cast<int>(k) * m.lane_height;
      if (k) {
        w.line("<line" + attr("x1", x) + attr("y1", ey) + attr("x2", right) + attr("y2", ey) +
               attr("stroke", color) + "/>");
      }
      std::string style;
      if (e.style.outline) style = " font-style=\"italic\"";
      w.line("<text class=\"kv-key\"" + attr("x", x + 6) + attr("y", ey + fs + 3) + style + ">" +
             "<title>" + esc(e.key + ": " + e.value) + "</title>" +
             esc(fit(e.key, split - x - 12, fs)) + "</text>");
      w.line("<text class=\"kv-value\"" + attr("x", split + 6) + attr("y", ey + fs + 3) + ">" +
             esc(fit(e.value, right - split - 12 - (e.style.cancelled ? 14 : 0), fs)) + "</text>");
      if (e.style.cancelled) icon_cancelled(right - 10, ey + (m.lane_height - 4) / 2);
    }
    w.line("</g>");
  }
  w.line("</g>");

  // Legend.
  static constexpr std::pair<ColorToken, std::string_view> kLegend[] = {
      {ColorToken::Orange, "Anatomical"},
      {ColorToken::Pink, "Diseases"},
      {ColorToken::Violet, "Test"},
      {ColorToken::Green, "Medicine"},
      {ColorToken::LightGreen, "Clinical treatment"}};
  const int ly = m.height - m.margin - m.legend_height + 8;
  int lx = m.margin;
  w.line("<g class=\"legend\">");
  for (const auto& [token, name] : kLegend) {
    w.line("<rect" + attr("x", lx) + attr("y", ly) + " width=\"12\" height=\"12\"" +
           attr("fill", theme.color(token)) + "/>");
    w.line("<text" + attr("x", lx + 16) + attr("y", ly + 10) + attr("font-size", fs - 1) + ">" +
           std::string(name) + "</text>");
    lx += 24 + 8 * static_cast<int>(name.size());
  }
  w.line("</g>");
  w.line("</svg>");
  return w.take();
}

}  // namespace heart
