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

#ifndef HEART_EVAL_HPP_
#define HEART_EVAL_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heart/annotation.hpp"
#include "heart/timeline.hpp"
#include "json.hpp"

namespace heart {

struct BigramOverlap {
  double ratio = 0.0;
  Diagnostics diagnostics;
};

// Jaccard index of the word-bigram sets of two texts. Tokens are split on
// whitespace, lower-cased and stripped of surrounding ASCII punctuation.
BigramOverlap bigram_overlap(std::string_view a, std::string_view b);

// F1 over (relative begin/end position, entity kind, certainty-or-state)
// triples of the two timelines' spans.
double timeline_similarity(const Timeline& a, const Timeline& b);

struct GoldChange {
  std::string change;
  std::optional<std::string> ref;

  bool operator==(const GoldChange&) const = default;
  auto operator<=>(const GoldChange&) const = default;
};

struct GoldSpan {
  std::string begin;
  std::string end;
  std::optional<bool> open_start;
  std::optional<bool> open_end;

  bool operator==(const GoldSpan&) const = default;
};

// Expected placement of one bundle, keyed by its root's surface and offset.
struct GoldEntry {
  std::string surface;
  std::size_t offset = 0;
  std::optional<std::string> onset;
  std::optional<GoldSpan> span;
  std::optional<std::vector<GoldChange>> changes;

  bool operator==(const GoldEntry&) const = default;
};

struct GoldPlacement {
  std::string doc_id;
  std::vector<GoldEntry> entries;

  bool operator==(const GoldPlacement&) const = default;
};

inline constexpr std::string_view kGoldSchema = "heart-gold/1";

nlohmann::json gold_to_json(const GoldPlacement& gold);
// Throws std::runtime_error on a schema mismatch or missing fields.
GoldPlacement gold_from_json(const nlohmann::json& j);

// Gold describing exactly what the timeline shows. Duration is recorded for
// bundles whose span covers more than one column or is open; ChangeInfo for
// bundles with changes.
GoldPlacement gold_from_timeline(const AnnotatedDocument& doc, const Timeline& timeline);

struct AxisScore {
  std::size_t correct = 0;
  std::size_t total = 0;

  bool operator==(const AxisScore&) const = default;
};

// "18/20 (90.0%)", "15/15 (100%)", or "---" when nothing was assessed.
std::string format_score(const AxisScore& score);

struct EntityVerdict {
  std::string surface;
  std::size_t offset = 0;
  std::optional<bool> onset;
  std::optional<bool> duration;
  std::optional<bool> change_info;
};

struct AccuracyReport {
  std::string doc_id;
  AxisScore onset;
  AxisScore duration;
  AxisScore change_info;
  std::vector<EntityVerdict> verdicts;
  Diagnostics diagnostics;
};

AccuracyReport placement_accuracy(const AnnotatedDocument& doc, const Timeline& timeline,
                                  const GoldPlacement& gold);

nlohmann::json report_to_json(const AccuracyReport& report);

// Plain-text table with one line per report, OnSet/Duration/ChangeInfo columns.
std::string format_report_table(const std::vector<AccuracyReport>& reports);

}  // namespace heart

#endif  // HEART_EVAL_HPP_
