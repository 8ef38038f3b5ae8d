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

#include "heart/annotation.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "doctest.h"

namespace heart {
namespace {

const char* kFeverXml =
    R"(<doc dct="2021-04-01"><timex3 id="t1" type="date">April 3</timex3>: )"
    R"(<d id="d1" certainty="positive" rel="timeOn:t1">fever</d></doc>)";

bool has_code(const Diagnostics& ds, std::string_view code, Severity sev = Severity::Error) {
  return std::any_of(ds.begin(), ds.end(),
                     [&](const Diagnostic& d) { return d.code == code && d.severity == sev; });
}

Diagnostics parse_errors(std::string_view xml) {
  auto r = parse_document(xml);
  CHECK_FALSE(r.ok());
  return r.diagnostics;
}

TEST_CASE("empty document") {
  auto r = parse_document(R"(<doc dct="2021-04-01"></doc>)");
  REQUIRE(r.ok());
  CHECK(r.document->entities.empty());
  CHECK(r.document->relations.empty());
  CHECK(r.document->text.empty());
  CHECK(r.document->dct == CalendarDate{2021, 4, 1});
  CHECK(serialize_document(*r.document) == R"(<doc dct="2021-04-01"></doc>)");
}

TEST_CASE("two-entity example: spans index the stripped text") {
  auto r = parse_document(kFeverXml);
  REQUIRE(r.ok());
  const auto& doc = *r.document;
  CHECK(doc.text == "April 3: fever");
  REQUIRE(doc.entities.size() == 2);
  const Entity* t1 = doc.find("t1");
  const Entity* d1 = doc.find("d1");
  REQUIRE(t1);
  REQUIRE(d1);
  CHECK(t1->kind == EntityKind::Timex3);
  CHECK(t1->span == Span{0, 7});
  CHECK(t1->surface == "April 3");
  CHECK(t1->timex_type == TimexType::Date);
  CHECK(d1->kind == EntityKind::Disease);
  CHECK(d1->span == Span{9, 14});
  CHECK(d1->surface == "fever");
  CHECK(d1->certainty == Certainty::Positive);
  REQUIRE(doc.relations.size() == 1);
  CHECK(doc.relations[0] == Relation{RelationKind::TimeOn, "d1", "t1"});
  CHECK(validate_document(doc).empty());
}

TEST_CASE("round trip reproduces the two-entity example and is deterministic") {
  auto first = parse_document(kFeverXml);
  REQUIRE(first.ok());
  const std::string a = serialize_document(*first.document);
  const std::string b = serialize_document(*first.document);
  CHECK(a == b);
  CHECK(a == kFeverXml);
  auto second = parse_document(a);
  REQUIRE(second.ok());
  CHECK(structurally_equal(*first.document, *second.document));
}

TEST_CASE("tag vocabulary covers the eleven entity kinds one to one") {
  const std::vector<std::string> tags = {"d",  "a",     "f",     "c",     "timex3", "t-key",
                                         "t-val", "m-key", "m-val", "r",  "cc"};
  std::set<EntityKind> kinds;
  for (const auto& tag : tags) {
    auto kind = entity_kind_from_tag(tag);
    REQUIRE(kind.has_value());
    CHECK(tag_name(*kind) == tag);
    kinds.insert(*kind);
  }
  CHECK(kinds.size() == 11);
  CHECK_FALSE(entity_kind_from_tag("doc").has_value());
  CHECK_FALSE(entity_kind_from_tag("x").has_value());
}

TEST_CASE("relation and attribute names round-trip") {
  for (auto k : {RelationKind::ChangeSbj, RelationKind::ChangeRef, RelationKind::FeatureSbj,
                 RelationKind::SubRegion, RelationKind::KeyValue, RelationKind::TimeOn,
                 RelationKind::TimeBefore, RelationKind::TimeAfter, RelationKind::TimeBegin,
                 RelationKind::TimeEnd}) {
    CHECK(relation_kind_from_string(to_string(k)) == k);
  }
  CHECK(is_temporal(RelationKind::TimeEnd));
  CHECK_FALSE(is_temporal(RelationKind::KeyValue));
  for (auto c : {Certainty::Positive, Certainty::Negative, Certainty::Suspicious, Certainty::General})
    CHECK(certainty_from_string(to_string(c)) == c);
  for (auto t : {TimexType::Date, TimexType::Time, TimexType::Duration, TimexType::Set,
                 TimexType::Age, TimexType::Medical, TimexType::Misc})
    CHECK(timex_type_from_string(to_string(t)) == t);
  for (auto s : {ExecState::Executed, ExecState::Negated, ExecState::Scheduled, ExecState::Other})
    CHECK(exec_state_from_string(to_string(s)) == s);
}

TEST_CASE("offsets count scalar values, not bytes") {
  auto r = parse_document(
      R"(<doc dct="2021-04-01">café 日本 <d id="d1">fièvre</d> 🙂 <a id="a1">肺</a></doc>)");
  REQUIRE(r.ok());
  CHECK(r.document->find("d1")->span == Span{8, 14});
  CHECK(r.document->find("a1")->span == Span{17, 18});
  CHECK(r.document->find("a1")->surface == "肺");
}

TEST_CASE("character references, CDATA and comments") {
  auto r = parse_document(
      "<?xml version=\"1.0\"?>\xEF\xBB\xBF<!-- note --><doc dct=\"2021-04-01\">a &lt; b &amp; "
      "<d id=\"d1\">&#x3B1;-thal</d><![CDATA[ <raw> ]]><!-- x --></doc>");
  // The byte order mark is only accepted at the very start.
  CHECK_FALSE(r.ok());
  r = parse_document(
      "\xEF\xBB\xBF<?xml version=\"1.0\"?><!-- note --><doc dct=\"2021-04-01\">a &lt; b &amp; "
      "<d id=\"d1\">&#x3B1;-thal</d><![CDATA[ <raw> ]]><!-- x --></doc>");
  REQUIRE(r.ok());
  CHECK(r.document->text == "a < b & α-thal <raw> ");
  CHECK(r.document->find("d1")->span == Span{8, 14});
  auto again = parse_document(serialize_document(*r.document));
  REQUIRE(again.ok());
  CHECK(structurally_equal(*r.document, *again.document));
}

TEST_CASE("nested entities are allowed") {
  auto r = parse_document(
      R"(<doc dct="2021-04-01"><a id="a1" rel="subRegion:d1">right <d id="d1">lung</d> lobe</a></doc>)");
  REQUIRE(r.ok());
  CHECK(r.document->find("a1")->span == Span{0, 15});
  CHECK(r.document->find("d1")->span == Span{6, 10});
  CHECK(r.document->entities[0].id == "a1");  // canonical order: outer first
}

TEST_CASE("DCT: required unless overridden") {
  CHECK(has_code(parse_errors(R"(<doc><d id="d1">x</d></doc>)"), "missing-dct"));
  auto r = parse_document(R"(<doc><d id="d1">x</d></doc>)", CalendarDate{2020, 1, 2});
  REQUIRE(r.ok());
  CHECK(r.document->dct == CalendarDate{2020, 1, 2});
  auto o = parse_document(R"(<doc dct="2021-04-01"></doc>)", CalendarDate{2020, 1, 2});
  REQUIRE(o.ok());
  CHECK(o.document->dct == CalendarDate{2020, 1, 2});
  CHECK(has_code(parse_errors(R"(<doc dct="2021-13-01"></doc>)"), "invalid-dct"));
  CHECK(has_code(parse_errors(R"(<doc dct="yesterday"></doc>)"), "invalid-dct"));
}

TEST_CASE("DCT is a valid temporal target") {
  auto r = parse_document(R"(<doc dct="2021-04-01"><d id="d1" rel="timeOn:DCT">x</d></doc>)");
  REQUIRE(r.ok());
  CHECK(r.document->relations[0].target == "DCT");
}

TEST_CASE("malformed XML is rejected with offsets and no document") {
  for (const char* bad : {"<doc>", R"(<doc dct="2021-04-01"><d id="d1">x</doc>)",
                          R"(<doc dct="2021-04-01"><d id="d1">x</a></doc>)",
                          R"(<doc dct="2021-04-01">a &bogus; b</doc>)",
                          R"(<doc dct="2021-04-01"></doc>trailing)", "",
                          R"(<doc dct="2021-04-01"><d id="d1" certainty=positive>x</d></doc>)",
                          R"(<root dct="2021-04-01"></root>)"}) {
    CAPTURE(bad);
    auto r = parse_document(bad);
    CHECK_FALSE(r.ok());
    CHECK(has_error(r.diagnostics));
  }
  auto ds = parse_errors(R"(<doc dct="2021-04-01">abc <d id="d1">x</a></doc>)");
  REQUIRE_FALSE(ds.empty());
  CHECK(ds[0].location.has_value());
}

TEST_CASE("unknown tags and attributes") {
  CHECK(has_code(parse_errors(R"(<doc dct="2021-04-01"><x id="x1">a</x></doc>)"), "unknown-tag"));
  CHECK(has_code(parse_errors(R"(<doc dct="2021-04-01"><d id="d1" color="red">a</d></doc>)"),
                 "unknown-attribute"));
  CHECK(has_code(parse_errors(R"(<doc dct="2021-04-01"><d id="d1" certainty="maybe">a</d></doc>)"),
                 "invalid-attribute"));
  CHECK(has_code(parse_errors(R"(<doc dct="2021-04-01"><d>a</d></doc>)"), "missing-id"));
  CHECK(has_code(parse_errors(R"(<doc dct="2021-04-01"><d id="d1" rel="timeOn">a</d></doc>)"),
                 "invalid-relation"));
  CHECK(has_code(parse_errors(R"(<doc dct="2021-04-01"><d id="d1" rel="during:DCT">a</d></doc>)"),
                 "invalid-relation"));
  CHECK(has_code(parse_errors("<doc dct=\"2021-04-01\">\xC3</doc>"), "invalid-utf8"));
}

TEST_CASE("attributes must match the entity kind") {
  CHECK(has_code(parse_errors(R"(<doc dct="2021-04-01"><a id="a1" certainty="positive">x</a></doc>)"),
                 "attribute-kind-mismatch"));
  CHECK(has_code(parse_errors(R"(<doc dct="2021-04-01"><d id="d1" type="date">x</d></doc>)"),
                 "attribute-kind-mismatch"));
  CHECK(has_code(parse_errors(R"(<doc dct="2021-04-01"><d id="d1" state="executed">x</d></doc>)"),
                 "attribute-kind-mismatch"));
  for (const char* tag : {"t-key", "m-key", "r"}) {
    const std::string xml =
        std::string(R"(<doc dct="2021-04-01"><)") + tag + R"( id="k" state="scheduled">x</)" + tag + "></doc>";
    CAPTURE(xml);
    CHECK(parse_document(xml).ok());
  }
}

TEST_CASE("relation endpoint rules") {
  CHECK(has_code(parse_errors(R"(<doc dct="2021-04-01"><d id="d1" rel="timeOn:t9">x</d></doc>)"),
                 "dangling-relation"));
  CHECK(has_code(parse_errors(R"(<doc dct="2021-04-01"><d id="d1" rel="subRegion:d1">x</d></doc>)"),
                 "self-relation"));
  CHECK(has_code(
      parse_errors(R"(<doc dct="2021-04-01"><f id="f1" rel="changeSbj:d1">x</f> <d id="d1">y</d></doc>)"),
      "relation-kind"));
  CHECK(has_code(
      parse_errors(R"(<doc dct="2021-04-01"><r id="r1" rel="subRegion:d1">x</r> <d id="d1">y</d></doc>)"),
      "relation-kind"));
  CHECK(has_code(
      parse_errors(
          R"(<doc dct="2021-04-01"><t-key id="k1" rel="keyValue:v1">x</t-key> <m-val id="v1">y</m-val></doc>)"),
      "relation-kind"));
  CHECK(has_code(parse_errors(R"(<doc dct="2021-04-01"><f id="f1" rel="featureSbj:DCT">x</f></doc>)"),
                 "relation-kind"));
}

TEST_CASE("validate: temporal target must be a TIMEX3") {
  auto r = parse_document(R"(<doc dct="2021-04-01"><d id="d1">x</d> <d id="d2">y</d></doc>)");
  REQUIRE(r.ok());
  AnnotatedDocument doc = *r.document;
  CHECK(validate_document(doc).empty());
  doc.relations.push_back({RelationKind::TimeOn, "d1", "d2"});
  auto ds = validate_document(doc);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].severity == Severity::Error);
  CHECK(ds[0].message == "temporal relation target must be TIMEX3");
}

TEST_CASE("validate: orphan change is a single warning") {
  auto r = parse_document(R"(<doc dct="2021-04-01"><c id="c1">worse</c></doc>)");
  REQUIRE(r.ok());
  auto ds = validate_document(*r.document);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].severity == Severity::Warning);
  CHECK(ds[0].message == "orphan change");
  CHECK(r.diagnostics.size() == 1);  // parse surfaces the warning too
}

TEST_CASE("validate: span and id invariants") {
  AnnotatedDocument doc;
  doc.text = "abcdef";
  doc.entities = {{"e1", EntityKind::Disease, {0, 4}, "abcd", {}, {}, {}},
                  {"e2", EntityKind::Disease, {2, 6}, "cdef", {}, {}, {}}};
  CHECK(has_code(validate_document(doc), "partial-overlap"));
  doc.entities[1] = {"e1", EntityKind::Disease, {4, 6}, "ef", {}, {}, {}};
  CHECK(has_code(validate_document(doc), "duplicate-id"));
  doc.entities[1] = {"DCT", EntityKind::Disease, {4, 6}, "ef", {}, {}, {}};
  CHECK(has_code(validate_document(doc), "reserved-id"));
  doc.entities[1] = {"e2", EntityKind::Disease, {4, 4}, "", {}, {}, {}};
  CHECK(has_code(validate_document(doc), "empty-span"));
  doc.entities[1] = {"e2", EntityKind::Disease, {4, 9}, "ef", {}, {}, {}};
  CHECK(has_code(validate_document(doc), "span-out-of-bounds"));
  doc.entities[1] = {"e2", EntityKind::Disease, {4, 6}, "xx", {}, {}, {}};
  CHECK(has_code(validate_document(doc), "surface-mismatch"));
  doc.entities[1] = {"e 2", EntityKind::Disease, {4, 6}, "ef", {}, {}, {}};
  CHECK(has_code(validate_document(doc), "invalid-id"));
  doc.entities[1] = {"e2", EntityKind::Disease, {4, 6}, "ef", {}, TimexType::Date, {}};
  CHECK(has_code(validate_document(doc), "attribute-kind-mismatch"));
  doc.entities[1] = {"e2", EntityKind::Disease, {4, 6}, "ef", {}, {}, {}};
  CHECK(validate_document(doc).empty());
}

TEST_CASE("cross-nested markup is rejected") {
  auto r = parse_document(R"(<doc dct="2021-04-01"><d id="d1">ab <f id="f1">cd</d> ef</f></doc>)");
  CHECK_FALSE(r.ok());
  CHECK(has_error(r.diagnostics));
}

TEST_CASE("structural equality ignores list order") {
  auto r = parse_document(
      R"(<doc dct="2021-04-01" id="x"><d id="d1" rel="timeOn:DCT;subRegion:d2">a <d id="d2">b</d></d></doc>)");
  REQUIRE(r.ok());
  AnnotatedDocument shuffled = *r.document;
  std::reverse(shuffled.entities.begin(), shuffled.entities.end());
  std::reverse(shuffled.relations.begin(), shuffled.relations.end());
  CHECK(structurally_equal(*r.document, shuffled));
  shuffled.doc_id = "y";
  CHECK_FALSE(structurally_equal(*r.document, shuffled));
}

TEST_CASE("serializer escapes markup characters and keeps attribute order") {
  AnnotatedDocument doc;
  doc.doc_id = "a&b";
  doc.dct = {2021, 4, 1};
  doc.text = "x<y & \"z\"";
  doc.entities = {{"k1", EntityKind::TestKey, {0, 3}, "x<y", {}, {}, ExecState::Negated}};
  doc.relations = {{RelationKind::TimeOn, "k1", "DCT"}};
  const std::string xml = serialize_document(doc);
  CHECK(xml ==
        R"(<doc dct="2021-04-01" id="a&amp;b"><t-key id="k1" state="negated" rel="timeOn:DCT">x&lt;y</t-key> &amp; "z"</doc>)");
  auto back = parse_document(xml);
  REQUIRE(back.ok());
  CHECK(structurally_equal(doc, *back.document));
}

}  // namespace
}  // namespace heart
