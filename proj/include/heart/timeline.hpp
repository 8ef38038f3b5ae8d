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

#ifndef HEART_TIMELINE_HPP_
#define HEART_TIMELINE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heart/annotation.hpp"
#include "heart/temporal.hpp"
#include "json.hpp"

namespace heart {

struct ChangeNote {
  std::string change_id;
  std::optional<std::string> ref_id;

  bool operator==(const ChangeNote&) const = default;
};

// A root entity with everything folded into it: SubRegion descendants,
// attached features/changes, and the value of a key-value pair.
struct EntityBundle {
  std::string root_id;
  EntityKind kind = EntityKind::Disease;
  std::string label;
  // certainty or state of the root, when annotated
  std::optional<std::string> attribute;
  // SubRegion closure in pre-order; contained_parents[i] contains contained_ids[i].
  std::vector<std::string> contained_ids;
  std::vector<std::string> contained_parents;
  std::vector<std::string> features;
  std::vector<ChangeNote> changes;
  std::optional<std::string> key_value;
  // Duration TIMEX3s linked to the bundle; they annotate length only.
  std::vector<std::string> durations;

  bool operator==(const EntityBundle&) const = default;
};

struct TimeCluster {
  std::string cluster_id;
  std::string anchor_timex_id;
  std::string anchor_label;
  TimeAnchor anchor;
  // Character offset of the anchor's mention; the DCT sorts before the text.
  std::int64_t mention = -1;
  std::vector<std::string> members;
  int order_index = -1;

  bool operator==(const TimeCluster&) const = default;
};

struct EntitySpan {
  std::string bundle_root_id;
  int begin_cluster = 0;
  int end_cluster = 0;
  bool open_start = false;
  bool open_end = false;

  bool operator==(const EntitySpan&) const = default;
};

struct Timeline {
  std::string doc_id;
  CalendarDate dct;
  std::vector<TimeCluster> clusters;  // sorted by order_index
  std::vector<EntitySpan> spans;
  std::vector<EntityBundle> bundles;
  Diagnostics diagnostics;

  const EntityBundle* find_bundle(std::string_view root_id) const;
  const EntitySpan* find_span(std::string_view root_id) const;

  bool operator==(const Timeline&) const = default;
};

struct BundleResult {
  std::vector<EntityBundle> bundles;
  Diagnostics diagnostics;
};

BundleResult bundle_entities(const AnnotatedDocument& doc,
                             const PatternTable& table = default_pattern_table());

struct ClusterResult {
  std::vector<TimeCluster> clusters;  // mention order, DCT first
  Diagnostics diagnostics;
};

ClusterResult build_clusters(const AnnotatedDocument& doc,
                             const std::vector<EntityBundle>& bundles,
                             const PatternTable& table = default_pattern_table());

// A "from precedes to" constraint between two clusters.
struct PrecedenceEdge {
  std::string from;
  std::string to;
  bool explicit_relation = false;  // from a TIMEX3 before/after relation

  bool operator==(const PrecedenceEdge&) const = default;
};

struct OrderResult {
  std::vector<TimeCluster> clusters;  // chronological, order_index assigned
  std::vector<PrecedenceEdge> edges;  // surviving edges
  std::vector<PrecedenceEdge> dropped;
  Diagnostics diagnostics;
};

// Anchor comparisons plus explicit TIMEX3-to-TIMEX3 before/after relations,
// topologically sorted with ties broken by first mention.
OrderResult order_clusters(const AnnotatedDocument& doc, std::vector<TimeCluster> clusters);

struct SpanResult {
  std::vector<EntitySpan> spans;
  Diagnostics diagnostics;
};

SpanResult infer_spans(const AnnotatedDocument& doc, const std::vector<TimeCluster>& ordered,
                       const std::vector<EntityBundle>& bundles,
                       const PatternTable& table = default_pattern_table());

Timeline build_timeline(const AnnotatedDocument& doc,
                        const PatternTable& table = default_pattern_table());

// Precedence edges implied by anchors alone; exposed for checking orderings.
std::vector<PrecedenceEdge> anchor_edges(const std::vector<TimeCluster>& clusters,
                                         const CalendarDate& dct);

// heart-timeline/1
nlohmann::json timeline_to_json_value(const Timeline& timeline);
std::string timeline_to_json(const Timeline& timeline);

nlohmann::json diagnostics_to_json(const Diagnostics& diagnostics);

inline constexpr std::string_view kTimelineSchema = "heart-timeline/1";

}  // namespace heart

#endif  // HEART_TIMELINE_HPP_
