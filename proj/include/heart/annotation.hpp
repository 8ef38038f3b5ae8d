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

#ifndef HEART_ANNOTATION_HPP_
#define HEART_ANNOTATION_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heart/date.hpp"
#include "heart/diagnostic.hpp"

namespace heart {

// Entity categories. Test and Medicine mentions are split into key/value.
enum class EntityKind {
  Disease,
  Anatomical,
  Feature,
  Change,
  Timex3,
  TestKey,
  TestVal,
  MedKey,
  MedVal,
  Remedy,
  ClinicalContext,
};

enum class Certainty { Positive, Negative, Suspicious, General };

enum class TimexType { Date, Time, Duration, Set, Age, Medical, Misc };

enum class ExecState { Executed, Negated, Scheduled, Other };

enum class RelationKind {
  ChangeSbj,
  ChangeRef,
  FeatureSbj,
  SubRegion,
  KeyValue,
  TimeOn,
  TimeBefore,
  TimeAfter,
  TimeBegin,
  TimeEnd,
};

inline constexpr std::string_view kDctId = "DCT";

// Half-open interval of character offsets into the document text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end > begin ? end - begin : 0; }
  bool contains(const Span& o) const { return begin <= o.begin && o.end <= end; }
  bool operator==(const Span&) const = default;
};

struct Entity {
  std::string id;
  EntityKind kind = EntityKind::Disease;
  Span span;
  std::string surface;
  std::optional<Certainty> certainty;
  std::optional<TimexType> timex_type;
  std::optional<ExecState> state;

  bool operator==(const Entity&) const = default;
};

struct Relation {
  RelationKind kind = RelationKind::TimeOn;
  std::string source;
  std::string target;

  bool operator==(const Relation&) const = default;
  auto operator<=>(const Relation&) const = default;
};

struct AnnotatedDocument {
  std::string doc_id;
  std::string text;
  CalendarDate dct;
  std::vector<Entity> entities;
  std::vector<Relation> relations;

  const Entity* find(std::string_view id) const;
};

// Equality over text, dct, doc id and the entity/relation sets; list order
// does not matter.
bool structurally_equal(const AnnotatedDocument& a, const AnnotatedDocument& b);

// Sorts entities by (begin, longest first, id) and relations by
// (source, kind, target). Parsing and serialization use this order.
void canonicalize(AnnotatedDocument& doc);

bool is_temporal(RelationKind kind);

// Names used by the wire format.
std::string_view tag_name(EntityKind kind);
std::string_view to_string(EntityKind kind);
std::string_view to_string(Certainty value);
std::string_view to_string(TimexType value);
std::string_view to_string(ExecState value);
std::string_view to_string(RelationKind kind);

std::optional<EntityKind> entity_kind_from_tag(std::string_view tag);
std::optional<Certainty> certainty_from_string(std::string_view s);
std::optional<TimexType> timex_type_from_string(std::string_view s);
std::optional<ExecState> exec_state_from_string(std::string_view s);
std::optional<RelationKind> relation_kind_from_string(std::string_view s);

struct ParseResult {
  std::optional<AnnotatedDocument> document;
  Diagnostics diagnostics;

  bool ok() const { return document.has_value(); }
};

// Parses the inline-XML annotation format. Tags are stripped and entity spans
// index the stripped text. On any Error diagnostic no document is returned.
ParseResult parse_document(std::string_view xml,
                           std::optional<CalendarDate> dct_override = {});

// Emits the canonical wire form; deterministic.
std::string serialize_document(const AnnotatedDocument& doc);

// All violations of the entity and relation constraints. Empty iff valid.
Diagnostics validate_document(const AnnotatedDocument& doc);

}  // namespace heart

#endif  // HEART_ANNOTATION_HPP_
