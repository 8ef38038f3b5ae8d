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

#include "heart/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

namespace heart {
namespace {

std::vector<std::string> tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    std::size_t b = 0, e = cur.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(cur[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(cur[e - 1]))) --e;
    if (e > b) out.push_back(cur.substr(b, e - b));
    cur.clear();
  };
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      flush();
    } else {
      cur += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
    }
  }
  flush();
  return out;
}

using Triple = std::tuple<int, int, bool, bool, std::string, std::string>;

std::vector<Triple> triples(const Timeline& tl) {
  std::set<int> used;
  for (const auto& s : tl.spans) {
    used.insert(s.begin_cluster);
    used.insert(s.end_cluster);
  }
  std::map<int, int> rank;
  int r = 0;
  for (int c : used) rank[c] = r++;
  std::vector<Triple> out;
  for (const auto& s : tl.spans) {
    const EntityBundle* b = tl.find_bundle(s.bundle_root_id);
    if (!b) continue;
    out.emplace_back(rank[s.begin_cluster], rank[s.end_cluster], s.open_start, s.open_end,
                     std::string(to_string(b->kind)), b->attribute.value_or(""));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string cluster_label(const Timeline& tl, int index) {
  for (const auto& c : tl.clusters)
    if (c.order_index == index) return c.anchor_label;
  return {};
}

std::vector<GoldChange> changes_of(const AnnotatedDocument& doc, const EntityBundle& b) {
  std::vector<GoldChange> out;
  for (const auto& c : b.changes) {
    GoldChange g;
    const Entity* e = doc.find(c.change_id);
    g.change = e ? e->surface : c.change_id;
    if (c.ref_id) {
      const Entity* ref = doc.find(*c.ref_id);
      g.ref = ref ? ref->surface : *c.ref_id;
    }
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end());
  return out;
}

nlohmann::json axis_json(const AxisScore& s) {
  return {{"correct", s.correct}, {"total", s.total}, {"formatted", format_score(s)}};
}

}  // namespace

BigramOverlap bigram_overlap(std::string_view a, std::string_view b) {
  BigramOverlap result;
  auto ta = tokens(a), tb = tokens(b);
  if (ta.size() < 2 || tb.size() < 2) {
    result.diagnostics.push_back(
        make_warning("too-few-tokens", "bigram overlap needs at least two tokens per text"));
    return result;
  }
  auto bigrams = [](const std::vector<std::string>& t) {
    std::set<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) out.emplace(t[i], t[i + 1]);
    return out;
  };
  auto ba = bigrams(ta), bb = bigrams(tb);
  std::size_t shared = 0;
  for (const auto& g : ba) shared += bb.count(g);
  const std::size_t uni = ba.size() + bb.size() - shared;
  result.ratio = uni == 0 ? 0.0 : static_cast<double>(shared) / static_cast<double>(uni);
  return result;
}

double timeline_similarity(const Timeline& a, const Timeline& b) {
  auto ta = triples(a), tb = triples(b);
  if (ta.empty() && tb.empty()) return 1.0;
  // Greedy matching in position order; triples match only when equal.
  std::vector<bool> used(tb.size(), false);
  std::size_t matched = 0;
  for (const auto& t : ta) {
    for (std::size_t j = 0; j < tb.size(); ++j) {
      if (!used[j] && tb[j] == t) {
        used[j] = true;
        ++matched;
        break;
      }
    }
  }
  return 2.0 * static_cast<double>(matched) / static_cast<double>(ta.size() + tb.size());
}

nlohmann::json gold_to_json(const GoldPlacement& gold) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : gold.entries) {
    nlohmann::json j = {{"surface", e.surface}, {"offset", e.offset}};
    if (e.onset) j["onset"] = *e.onset;
    if (e.span) {
      nlohmann::json s = {{"begin", e.span->begin}, {"end", e.span->end}};
      if (e.span->open_start) s["openStart"] = *e.span->open_start;
      if (e.span->open_end) s["openEnd"] = *e.span->open_end;
      j["span"] = std::move(s);
    }
    if (e.changes) {
      nlohmann::json cs = nlohmann::json::array();
      for (const auto& c : *e.changes) {
        nlohmann::json cj = {{"change", c.change}};
        cj["ref"] = c.ref ? nlohmann::json(*c.ref) : nlohmann::json(nullptr);
        cs.push_back(std::move(cj));
      }
      j["changes"] = std::move(cs);
    }
    entries.push_back(std::move(j));
  }
  return {{"schema", kGoldSchema}, {"docId", gold.doc_id}, {"entries", std::move(entries)}};
}

GoldPlacement gold_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("schema", "") != kGoldSchema)
    throw std::runtime_error("not a heart-gold/1 document");
  GoldPlacement gold;
  try {
    gold.doc_id = j.value("docId", "");
    for (const auto& e : j.at("entries")) {
      GoldEntry entry;
      entry.surface = e.at("surface").get<std::string>();
      entry.offset = e.at("offset").get<std::size_t>();
      if (e.contains("onset")) entry.onset = e.at("onset").get<std::string>();
      if (e.contains("span")) {
        const auto& s = e.at("span");
        GoldSpan span{s.at("begin").get<std::string>(), s.at("end").get<std::string>(), {}, {}};
        if (s.contains("openStart")) span.open_start = s.at("openStart").get<bool>();
        if (s.contains("openEnd")) span.open_end = s.at("openEnd").get<bool>();
        entry.span = std::move(span);
      }
      if (e.contains("changes")) {
        std::vector<GoldChange> changes;
        for (const auto& c : e.at("changes")) {
          GoldChange g{c.at("change").get<std::string>(), std::nullopt};
          if (c.contains("ref") && !c.at("ref").is_null()) g.ref = c.at("ref").get<std::string>();
          changes.push_back(std::move(g));
        }
        entry.changes = std::move(changes);
      }
      gold.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed gold file: ") + e.what());
  }
  return gold;
}

GoldPlacement gold_from_timeline(const AnnotatedDocument& doc, const Timeline& tl) {
  GoldPlacement gold;
  gold.doc_id = tl.doc_id;
  for (const auto& b : tl.bundles) {
    const Entity* root = doc.find(b.root_id);
    const EntitySpan* span = tl.find_span(b.root_id);
    if (!root || !span) continue;
    GoldEntry entry;
    entry.surface = root->surface;
    entry.offset = root->span.begin;
    entry.onset = cluster_label(tl, span->begin_cluster);
    if (span->begin_cluster != span->end_cluster || span->open_start || span->open_end) {
      entry.span = GoldSpan{cluster_label(tl, span->begin_cluster),
                            cluster_label(tl, span->end_cluster), span->open_start,
                            span->open_end};
    }
    if (!b.changes.empty()) entry.changes = changes_of(doc, b);
    gold.entries.push_back(std::move(entry));
  }
  return gold;
}

std::string format_score(const AxisScore& s) {
  if (s.total == 0) return "---";
  std::string out = std::to_string(s.correct) + "/" + std::to_string(s.total) + " (";
  if (s.correct == s.total) return out + "100%)";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%)",
                100.0 * static_cast<double>(s.correct) / static_cast<double>(s.total));
  return out + buf;
}

AccuracyReport placement_accuracy(const AnnotatedDocument& doc, const Timeline& tl,
                                  const GoldPlacement& gold) {
  AccuracyReport report;
  report.doc_id = gold.doc_id.empty() ? tl.doc_id : gold.doc_id;
  std::map<std::pair<std::string, std::size_t>, const EntityBundle*> by_key;
  for (const auto& b : tl.bundles) {
    if (const Entity* root = doc.find(b.root_id)) by_key[{root->surface, root->span.begin}] = &b;
  }
  for (const auto& g : gold.entries) {
    EntityVerdict v;
    v.surface = g.surface;
    v.offset = g.offset;
    auto it = by_key.find({g.surface, g.offset});
    const EntityBundle* b = it == by_key.end() ? nullptr : it->second;
    const EntitySpan* span = b ? tl.find_span(b->root_id) : nullptr;
    if (!b || !span) {
      report.diagnostics.push_back(make_warning(
          "unresolved-gold", "no timeline entity '" + g.surface + "' at offset " +
                                 std::to_string(g.offset), g.offset));
    }
    auto score = [](AxisScore& axis, std::optional<bool>& verdict, bool ok) {
      ++axis.total;
      if (ok) ++axis.correct;
      verdict = ok;
    };
    if (g.onset) {
      score(report.onset, v.onset, span && cluster_label(tl, span->begin_cluster) == *g.onset);
    }
    if (g.span) {
      bool ok = span && cluster_label(tl, span->begin_cluster) == g.span->begin &&
                cluster_label(tl, span->end_cluster) == g.span->end &&
                (!g.span->open_start || *g.span->open_start == span->open_start) &&
                (!g.span->open_end || *g.span->open_end == span->open_end);
      score(report.duration, v.duration, ok);
    }
    if (g.changes) {
      std::vector<GoldChange> expected = *g.changes;
      std::sort(expected.begin(), expected.end());
      score(report.change_info, v.change_info, b && changes_of(doc, *b) == expected);
    }
    report.verdicts.push_back(std::move(v));
  }
  return report;
}

nlohmann::json report_to_json(const AccuracyReport& report) {
  nlohmann::json verdicts = nlohmann::json::array();
  for (const auto& v : report.verdicts) {
    nlohmann::json j = {{"surface", v.surface}, {"offset", v.offset}};
    if (v.onset) j["onset"] = *v.onset;
    if (v.duration) j["duration"] = *v.duration;
    if (v.change_info) j["changeInfo"] = *v.change_info;
    verdicts.push_back(std::move(j));
  }
  return {{"schema", "heart-report/1"},
          {"docId", report.doc_id},
          {"onset", axis_json(report.onset)},
          {"duration", axis_json(report.duration)},
          {"changeInfo", axis_json(report.change_info)},
          {"verdicts", std::move(verdicts)},
          {"diagnostics", diagnostics_to_json(report.diagnostics)}};
}

std::string format_report_table(const std::vector<AccuracyReport>& reports) {
  std::size_t name_width = 8;
  for (const auto& r : reports) name_width = std::max(name_width, r.doc_id.size());
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  std::string out = pad("Document", name_width + 2) + pad("OnSet", 18) + pad("Duration", 18) +
                    "ChangeInfo\n";
  for (const auto& r : reports) {
    out += pad(r.doc_id, name_width + 2) + pad(format_score(r.onset), 18) +
           pad(format_score(r.duration), 18) + format_score(r.change_info) + "\n";
  }
  return out;
}

}  // namespace heart
