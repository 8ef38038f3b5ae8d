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
#include <array>
#include <map>
#include <set>
#include <utility>

#include "heart/utf8.hpp"

namespace heart {
namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names,
                           std::string_view s) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

constexpr std::array<std::string_view, 11> kTags = {
    "d", "a", "f", "c", "timex3", "t-key", "t-val", "m-key", "m-val", "r", "cc"};
constexpr std::array<std::string_view, 11> kKindNames = {
    "Disease", "Anatomical", "Feature", "Change",  "Timex3",         "TestKey",
    "TestVal", "MedKey",     "MedVal",  "Remedy", "ClinicalContext"};
constexpr std::array<std::string_view, 4> kCertainty = {"positive", "negative",
                                                        "suspicious", "general"};
constexpr std::array<std::string_view, 7> kTimexType = {
    "date", "time", "duration", "set", "age", "medical", "misc"};
constexpr std::array<std::string_view, 4> kExecState = {"executed", "negated",
                                                        "scheduled", "other"};
constexpr std::array<std::string_view, 10> kRelation = {
    "changeSbj", "changeRef",  "featureSbj", "subRegion", "keyValue",
    "timeOn",    "timeBefore", "timeAfter",  "timeBegin", "timeEnd"};

bool entity_less(const Entity& a, const Entity& b) {
  if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
  if (a.span.end != b.span.end) return a.span.end > b.span.end;
  return a.id < b.id;
}

bool id_is_well_formed(std::string_view id) {
  if (id.empty()) return false;
  for (char ch : id) {
    auto c = static_cast<unsigned char>(ch);
    if (c <= ' ' || ch == ';' || ch == ':' || ch == '"' || ch == '\'' ||
        ch == '<' || ch == '>' || ch == '&')
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Inline XML reader.

class Reader {
 public:
  explicit Reader(std::string_view xml) : xml_(xml) {}

  ParseResult run(std::optional<CalendarDate> dct_override);

 private:
  struct Open {
    std::string tag;
    Entity entity;
    std::string rel;
    std::size_t input_pos = 0;
  };

  bool at_end() const { return pos_ >= xml_.size(); }
  bool starts_with(std::string_view s) const {
    return xml_.substr(pos_, s.size()) == s;
  }
  std::size_t char_pos(std::size_t byte) const {
    return utf8::length(xml_.substr(0, byte));
  }
  void error(std::string code, std::string message) {
    error_at(std::move(code), std::move(message), pos_);
  }
  void error_at(std::string code, std::string message, std::size_t byte) {
    diagnostics_.push_back(make_error(std::move(code), std::move(message), char_pos(byte)));
  }

  void skip_space() {
    while (!at_end() && (xml_[pos_] == ' ' || xml_[pos_] == '\t' ||
                         xml_[pos_] == '\n' || xml_[pos_] == '\r'))
      ++pos_;
  }
  bool skip_misc();
  bool read_name(std::string& name);
  bool read_attributes(std::vector<std::pair<std::string, std::string>>& attrs,
                       bool& self_closing);
  bool decode_reference(std::string& out);
  void emit_char_bytes(std::string_view bytes, std::size_t input_byte) {
    text_ += bytes;
    text_to_input_.push_back(char_pos_cache(input_byte));
  }
  std::size_t char_pos_cache(std::size_t byte) {
    // Incremental conversion; bytes are visited in increasing order.
    while (cache_byte_ < byte && cache_byte_ < xml_.size()) {
      cache_byte_ += utf8::sequence_length(static_cast<unsigned char>(xml_[cache_byte_]));
      ++cache_char_;
    }
    return cache_char_;
  }
  bool open_entity(const std::string& tag,
                   const std::vector<std::pair<std::string, std::string>>& attrs,
                   std::size_t tag_pos);
  void close_entity(Open open);

  std::string_view xml_;
  std::size_t pos_ = 0;
  std::size_t cache_byte_ = 0;
  std::size_t cache_char_ = 0;
  std::string text_;
  std::size_t text_chars_ = 0;
  std::vector<std::size_t> text_to_input_;
  std::vector<Open> stack_;
  std::vector<Entity> entities_;
  std::vector<Relation> relations_;
  Diagnostics diagnostics_;
};

bool Reader::skip_misc() {
  for (;;) {
    skip_space();
    if (starts_with("<?")) {
      auto end = xml_.find("?>", pos_);
      if (end == std::string_view::npos) {
        error("malformed-xml", "unterminated processing instruction");
        return false;
      }
      pos_ = end + 2;
    } else if (starts_with("<!--")) {
      auto end = xml_.find("-->", pos_ + 4);
      if (end == std::string_view::npos) {
        error("malformed-xml", "unterminated comment");
        return false;
      }
      pos_ = end + 3;
    } else {
      return true;
    }
  }
}

bool Reader::read_name(std::string& name) {
  std::size_t start = pos_;
  auto is_name_char = [](char c, bool first) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':')
      return true;
    return !first && ((c >= '0' && c <= '9') || c == '-' || c == '.');
  };
  while (!at_end() && is_name_char(xml_[pos_], pos_ == start)) ++pos_;
  if (pos_ == start) {
    error("malformed-xml", "expected a name");
    return false;
  }
  name.assign(xml_.substr(start, pos_ - start));
  return true;
}

bool Reader::decode_reference(std::string& out) {
  // xml_[pos_] == '&'
  auto semi = xml_.find(';', pos_);
  if (semi == std::string_view::npos || semi - pos_ > 12) {
    error("malformed-xml", "unterminated character reference");
    return false;
  }
  std::string_view ref = xml_.substr(pos_ + 1, semi - pos_ - 1);
  if (ref == "amp") out += '&';
  else if (ref == "lt") out += '<';
  else if (ref == "gt") out += '>';
  else if (ref == "quot") out += '"';
  else if (ref == "apos") out += '\'';
  else if (ref.size() > 1 && ref[0] == '#') {
    char32_t cp = 0;
    bool hex = ref[1] == 'x' || ref[1] == 'X';
    std::string_view digits = ref.substr(hex ? 2 : 1);
    if (digits.empty()) {
      error("malformed-xml", "empty character reference");
      return false;
    }
    for (char c : digits) {
      int v;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (hex && c >= 'a' && c <= 'f') v = c - 'a' + 10;
      else if (hex && c >= 'A' && c <= 'F') v = c - 'A' + 10;
      else {
        error("malformed-xml", "bad character reference");
        return false;
      }
      cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(v);
      if (cp > 0x10FFFF) break;
    }
    if (cp == 0 || !utf8::append(out, cp)) {
      error("malformed-xml", "character reference out of range");
      return false;
    }
  } else {
    error("malformed-xml", "unknown entity reference '&" + std::string(ref) + ";'");
    return false;
  }
  pos_ = semi + 1;
  return true;
}

bool Reader::read_attributes(std::vector<std::pair<std::string, std::string>>& attrs,
                             bool& self_closing) {
  self_closing = false;
  for (;;) {
    skip_space();
    if (at_end()) {
      error("malformed-xml", "unterminated tag");
      return false;
    }
    if (xml_[pos_] == '>') {
      ++pos_;
      return true;
    }
    if (starts_with("/>")) {
      pos_ += 2;
      self_closing = true;
      return true;
    }
    std::size_t attr_pos = pos_;
    std::string name;
    if (!read_name(name)) return false;
    skip_space();
    if (at_end() || xml_[pos_] != '=') {
      error("malformed-xml", "expected '=' after attribute '" + name + "'");
      return false;
    }
    ++pos_;
    skip_space();
    if (at_end() || (xml_[pos_] != '"' && xml_[pos_] != '\'')) {
      error("malformed-xml", "expected quoted value for attribute '" + name + "'");
      return false;
    }
    char quote = xml_[pos_++];
    std::string value;
    while (!at_end() && xml_[pos_] != quote) {
      if (xml_[pos_] == '<') {
        error("malformed-xml", "'<' in attribute value");
        return false;
      }
      if (xml_[pos_] == '&') {
        if (!decode_reference(value)) return false;
      } else {
        value += xml_[pos_++];
      }
    }
    if (at_end()) {
      error("malformed-xml", "unterminated attribute value");
      return false;
    }
    ++pos_;
    for (const auto& [n, v] : attrs) {
      if (n == name) {
        error_at("malformed-xml", "duplicate attribute '" + name + "'", attr_pos);
        return false;
      }
    }
    attrs.emplace_back(std::move(name), std::move(value));
  }
}

bool Reader::open_entity(const std::string& tag,
                         const std::vector<std::pair<std::string, std::string>>& attrs,
                         std::size_t tag_pos) {
  auto kind = entity_kind_from_tag(tag);
  if (!kind) {
    error_at("unknown-tag", "unknown tag <" + tag + ">", tag_pos);
    return false;
  }
  Open open;
  open.tag = tag;
  open.input_pos = tag_pos;
  open.entity.kind = *kind;
  open.entity.span.begin = text_chars_;
  bool has_id = false;
  bool ok = true;
  for (const auto& [name, value] : attrs) {
    if (name == "id") {
      open.entity.id = value;
      has_id = true;
    } else if (name == "certainty") {
      open.entity.certainty = certainty_from_string(value);
      if (!open.entity.certainty) {
        error_at("invalid-attribute", "invalid certainty '" + value + "'", tag_pos);
        ok = false;
      }
    } else if (name == "type") {
      open.entity.timex_type = timex_type_from_string(value);
      if (!open.entity.timex_type) {
        error_at("invalid-attribute", "invalid TIMEX3 type '" + value + "'", tag_pos);
        ok = false;
      }
    } else if (name == "state") {
      open.entity.state = exec_state_from_string(value);
      if (!open.entity.state) {
        error_at("invalid-attribute", "invalid state '" + value + "'", tag_pos);
        ok = false;
      }
    } else if (name == "rel") {
      open.rel = value;
    } else {
      error_at("unknown-attribute", "unknown attribute '" + name + "' on <" + tag + ">",
               tag_pos);
      ok = false;
    }
  }
  if (!has_id) {
    error_at("missing-id", "<" + tag + "> requires an id attribute", tag_pos);
    ok = false;
  }
  stack_.push_back(std::move(open));
  return ok;
}

void Reader::close_entity(Open open) {
  open.entity.span.end = text_chars_;
  open.entity.surface =
      utf8::slice(text_, open.entity.span.begin, open.entity.span.end);
  std::string_view rel = open.rel;
  while (!rel.empty()) {
    auto semi = rel.find(';');
    std::string_view item = rel.substr(0, semi);
    rel = semi == std::string_view::npos ? std::string_view{} : rel.substr(semi + 1);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) continue;
    auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      error_at("invalid-relation", "relation '" + std::string(item) + "' lacks ':'",
               open.input_pos);
      continue;
    }
    auto kind = relation_kind_from_string(item.substr(0, colon));
    std::string_view target = item.substr(colon + 1);
    while (!target.empty() && target.front() == ' ') target.remove_prefix(1);
    if (!kind) {
      error_at("invalid-relation",
               "unknown relation kind '" + std::string(item.substr(0, colon)) + "'",
               open.input_pos);
      continue;
    }
    relations_.push_back({*kind, open.entity.id, std::string(target)});
  }
  entities_.push_back(std::move(open.entity));
}

ParseResult Reader::run(std::optional<CalendarDate> dct_override) {
  ParseResult result;
  if (!utf8::valid(xml_)) {
    result.diagnostics.push_back(make_error("invalid-utf8", "input is not valid UTF-8"));
    return result;
  }
  if (starts_with("\xEF\xBB\xBF")) pos_ += 3;
  if (!skip_misc()) return {std::nullopt, diagnostics_};
  if (!starts_with("<doc")) {
    error("malformed-xml", "expected <doc> root element");
    return {std::nullopt, diagnostics_};
  }
  std::size_t root_pos = pos_;
  ++pos_;
  std::string root_name;
  std::vector<std::pair<std::string, std::string>> attrs;
  bool self_closing = false;
  if (!read_name(root_name) || root_name != "doc") {
    error_at("malformed-xml", "expected <doc> root element", root_pos);
    return {std::nullopt, diagnostics_};
  }
  if (!read_attributes(attrs, self_closing)) return {std::nullopt, diagnostics_};

  AnnotatedDocument doc;
  std::optional<CalendarDate> dct;
  for (const auto& [name, value] : attrs) {
    if (name == "dct") {
      dct = parse_iso_date(value);
      if (!dct && !dct_override)
        error_at("invalid-dct", "dct '" + value + "' is not a YYYY-MM-DD date", root_pos);
    } else if (name == "id") {
      doc.doc_id = value;
    } else {
      error_at("unknown-attribute", "unknown attribute '" + name + "' on <doc>", root_pos);
    }
  }
  if (dct_override) dct = dct_override;

  bool closed = self_closing;
  while (!closed) {
    if (at_end()) {
      error("malformed-xml", "unexpected end of input inside <doc>");
      break;
    }
    char c = xml_[pos_];
    if (c == '<') {
      std::size_t tag_pos = pos_;
      if (starts_with("<!--")) {
        auto end = xml_.find("-->", pos_ + 4);
        if (end == std::string_view::npos) {
          error("malformed-xml", "unterminated comment");
          break;
        }
        pos_ = end + 3;
      } else if (starts_with("<![CDATA[")) {
        auto end = xml_.find("]]>", pos_ + 9);
        if (end == std::string_view::npos) {
          error("malformed-xml", "unterminated CDATA section");
          break;
        }
        for (std::size_t i = pos_ + 9; i < end;) {
          std::size_t n = utf8::sequence_length(static_cast<unsigned char>(xml_[i]));
          emit_char_bytes(xml_.substr(i, n), i);
          ++text_chars_;
          i += n;
        }
        pos_ = end + 3;
      } else if (starts_with("</")) {
        pos_ += 2;
        std::string name;
        if (!read_name(name)) break;
        skip_space();
        if (at_end() || xml_[pos_] != '>') {
          error("malformed-xml", "expected '>' in end tag");
          break;
        }
        ++pos_;
        if (stack_.empty()) {
          if (name == "doc") {
            closed = true;
          } else {
            error_at("malformed-xml", "unexpected end tag </" + name + ">", tag_pos);
            break;
          }
        } else if (stack_.back().tag != name) {
          error_at("malformed-xml",
                   "end tag </" + name + "> does not match <" + stack_.back().tag +
                       ">; annotations must nest",
                   tag_pos);
          break;
        } else {
          Open open = std::move(stack_.back());
          stack_.pop_back();
          close_entity(std::move(open));
        }
      } else {
        ++pos_;
        std::string name;
        if (!read_name(name)) break;
        std::vector<std::pair<std::string, std::string>> entity_attrs;
        bool empty_element = false;
        if (!read_attributes(entity_attrs, empty_element)) break;
        if (name == "doc") {
          error_at("malformed-xml", "nested <doc> element", tag_pos);
          break;
        }
        open_entity(name, entity_attrs, tag_pos);
        if (empty_element) {
          Open open = std::move(stack_.back());
          stack_.pop_back();
          close_entity(std::move(open));
        }
      }
    } else if (c == '&') {
      std::size_t ref_pos = pos_;
      std::string decoded;
      if (!decode_reference(decoded)) break;
      for (std::size_t i = 0; i < decoded.size();) {
        std::size_t n = utf8::sequence_length(static_cast<unsigned char>(decoded[i]));
        emit_char_bytes(std::string_view(decoded).substr(i, n), ref_pos);
        ++text_chars_;
        i += n;
      }
    } else if (c == '>') {
      error("malformed-xml", "unescaped '>' in text");
      break;
    } else {
      std::size_t n = utf8::sequence_length(static_cast<unsigned char>(c));
      emit_char_bytes(xml_.substr(pos_, n), pos_);
      ++text_chars_;
      pos_ += n;
    }
  }
  if (closed) {
    if (skip_misc() && !at_end()) error("malformed-xml", "content after </doc>");
  }
  if (!dct && !has_error(diagnostics_)) {
    error_at("missing-dct", "<doc> lacks a dct attribute and no override was given",
             root_pos);
  }
  if (has_error(diagnostics_)) return {std::nullopt, std::move(diagnostics_)};

  text_to_input_.push_back(char_pos_cache(pos_));
  doc.text = std::move(text_);
  doc.dct = *dct;
  doc.entities = std::move(entities_);
  doc.relations = std::move(relations_);
  canonicalize(doc);

  // Validation reports text offsets; point them back into the input.
  for (auto d : validate_document(doc)) {
    if (d.location && *d.location < text_to_input_.size())
      d.location = text_to_input_[*d.location];
    diagnostics_.push_back(std::move(d));
  }
  result.diagnostics = std::move(diagnostics_);
  if (!has_error(result.diagnostics)) result.document = std::move(doc);
  return result;
}

void escape_into(std::string& out, std::string_view s, bool attribute) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attribute) out += "&quot;";
        else out += c;
        break;
      default: out += c;
    }
  }
}

}  // namespace

const char* to_string(Severity severity) {
  return severity == Severity::Error ? "error" : "warning";
}

const Entity* AnnotatedDocument::find(std::string_view id) const {
  for (const auto& e : entities) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

bool is_temporal(RelationKind kind) {
  switch (kind) {
    case RelationKind::TimeOn:
    case RelationKind::TimeBefore:
    case RelationKind::TimeAfter:
    case RelationKind::TimeBegin:
    case RelationKind::TimeEnd:
      return true;
    default:
      return false;
  }
}

std::string_view tag_name(EntityKind kind) { return kTags[static_cast<std::size_t>(kind)]; }
std::string_view to_string(EntityKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}
std::string_view to_string(Certainty v) { return kCertainty[static_cast<std::size_t>(v)]; }
std::string_view to_string(TimexType v) { return kTimexType[static_cast<std::size_t>(v)]; }
std::string_view to_string(ExecState v) { return kExecState[static_cast<std::size_t>(v)]; }
std::string_view to_string(RelationKind k) { return kRelation[static_cast<std::size_t>(k)]; }

std::optional<EntityKind> entity_kind_from_tag(std::string_view s) {
  return lookup<EntityKind>(kTags, s);
}
std::optional<Certainty> certainty_from_string(std::string_view s) {
  return lookup<Certainty>(kCertainty, s);
}
std::optional<TimexType> timex_type_from_string(std::string_view s) {
  return lookup<TimexType>(kTimexType, s);
}
std::optional<ExecState> exec_state_from_string(std::string_view s) {
  return lookup<ExecState>(kExecState, s);
}
std::optional<RelationKind> relation_kind_from_string(std::string_view s) {
  return lookup<RelationKind>(kRelation, s);
}

void canonicalize(AnnotatedDocument& doc) {
  std::sort(doc.entities.begin(), doc.entities.end(), entity_less);
  std::sort(doc.relations.begin(), doc.relations.end());
}

bool structurally_equal(const AnnotatedDocument& a, const AnnotatedDocument& b) {
  if (a.doc_id != b.doc_id || a.text != b.text || a.dct != b.dct) return false;
  AnnotatedDocument ca = a, cb = b;
  canonicalize(ca);
  canonicalize(cb);
  return ca.entities == cb.entities && ca.relations == cb.relations;
}

ParseResult parse_document(std::string_view xml, std::optional<CalendarDate> dct_override) {
  return Reader(xml).run(dct_override);
}

std::string serialize_document(const AnnotatedDocument& input) {
  AnnotatedDocument doc = input;
  canonicalize(doc);

  std::map<std::string, std::vector<const Relation*>, std::less<>> outgoing;
  for (const auto& r : doc.relations) outgoing[r.source].push_back(&r);

  std::string out = "<doc dct=\"" + format_iso_date(doc.dct) + "\"";
  if (!doc.doc_id.empty()) {
    out += " id=\"";
    escape_into(out, doc.doc_id, true);
    out += '"';
  }
  out += '>';

  auto open_tag = [&](const Entity& e) {
    out += '<';
    out += tag_name(e.kind);
    out += " id=\"";
    escape_into(out, e.id, true);
    out += '"';
    if (e.certainty) (out += " certainty=\"") += std::string(to_string(*e.certainty)) + '"';
    if (e.timex_type) (out += " type=\"") += std::string(to_string(*e.timex_type)) + '"';
    if (e.state) (out += " state=\"") += std::string(to_string(*e.state)) + '"';
    if (auto it = outgoing.find(e.id); it != outgoing.end()) {
      out += " rel=\"";
      bool first = true;
      for (const Relation* r : it->second) {
        if (!first) out += ';';
        first = false;
        out += to_string(r->kind);
        out += ':';
        escape_into(out, r->target, true);
      }
      out += '"';
    }
    out += '>';
  };

  std::vector<const Entity*> stack;
  std::size_t next = 0;
  std::size_t char_index = 0;
  std::string_view text = doc.text;
  auto flush_at = [&](std::size_t position) {
    while (!stack.empty() && stack.back()->span.end <= position) {
      out += "</";
      out += tag_name(stack.back()->kind);
      out += '>';
      stack.pop_back();
    }
    while (next < doc.entities.size() && doc.entities[next].span.begin <= position) {
      open_tag(doc.entities[next]);
      stack.push_back(&doc.entities[next]);
      ++next;
    }
  };
  for (std::size_t i = 0; i < text.size();) {
    flush_at(char_index);
    std::size_t n = utf8::sequence_length(static_cast<unsigned char>(text[i]));
    escape_into(out, text.substr(i, n), false);
    i += n;
    ++char_index;
  }
  flush_at(char_index);
  while (!stack.empty()) {
    out += "</";
    out += tag_name(stack.back()->kind);
    out += '>';
    stack.pop_back();
  }
  out += "</doc>";
  return out;
}

Diagnostics validate_document(const AnnotatedDocument& input) {
  AnnotatedDocument doc = input;
  canonicalize(doc);
  Diagnostics out;
  const std::size_t text_len = utf8::length(doc.text);

  std::map<std::string, const Entity*, std::less<>> by_id;
  for (const auto& e : doc.entities) {
    const auto at = e.span.begin;
    if (!id_is_well_formed(e.id)) {
      out.push_back(make_error("invalid-id", "entity id '" + e.id + "' is not well formed", at));
    } else if (e.id == kDctId) {
      out.push_back(make_error("reserved-id", "entity id 'DCT' is reserved", at));
    } else if (!by_id.emplace(e.id, &e).second) {
      out.push_back(make_error("duplicate-id", "duplicate entity id '" + e.id + "'", at));
    }
    if (e.span.begin >= e.span.end) {
      out.push_back(make_error("empty-span", "entity '" + e.id + "' has an empty span", at));
    } else if (e.span.end > text_len) {
      out.push_back(make_error("span-out-of-bounds",
                               "entity '" + e.id + "' extends past the end of the text", at));
    } else if (utf8::slice(doc.text, e.span.begin, e.span.end) != e.surface) {
      out.push_back(make_error("surface-mismatch",
                               "surface of '" + e.id + "' does not match the text", at));
    }
    if (e.certainty && e.kind != EntityKind::Disease) {
      out.push_back(make_error("attribute-kind-mismatch",
                               "certainty is only allowed on Disease entities", at));
    }
    if (e.timex_type && e.kind != EntityKind::Timex3) {
      out.push_back(make_error("attribute-kind-mismatch",
                               "type is only allowed on TIMEX3 entities", at));
    }
    if (e.state && e.kind != EntityKind::TestKey && e.kind != EntityKind::MedKey &&
        e.kind != EntityKind::Remedy) {
      out.push_back(make_error("attribute-kind-mismatch",
                               "state is only allowed on test-key, medicine-key and remedy "
                               "entities",
                               at));
    }
  }

  // Crossing spans. Entities are sorted by (begin, end desc).
  std::vector<const Entity*> open;
  for (const auto& e : doc.entities) {
    if (e.span.begin >= e.span.end) continue;
    while (!open.empty() && open.back()->span.end <= e.span.begin) open.pop_back();
    if (!open.empty() && open.back()->span.end < e.span.end) {
      out.push_back(make_error("partial-overlap",
                               "entities '" + open.back()->id + "' and '" + e.id +
                                   "' partially overlap",
                               e.span.begin));
      continue;
    }
    open.push_back(&e);
  }

  std::set<std::string, std::less<>> has_change_subject;
  for (const auto& r : doc.relations) {
    const Entity* src = nullptr;
    if (auto it = by_id.find(r.source); it != by_id.end()) src = it->second;
    std::optional<std::size_t> at;
    if (src) at = src->span.begin;
    if (!src) {
      out.push_back(make_error("dangling-relation",
                               "relation source '" + r.source + "' does not exist", at));
      continue;
    }
    const Entity* dst = nullptr;
    bool target_is_dct = r.target == kDctId;
    if (!target_is_dct) {
      if (auto it = by_id.find(r.target); it != by_id.end()) dst = it->second;
      if (!dst) {
        out.push_back(make_error("dangling-relation",
                                 std::string(to_string(r.kind)) + " target '" + r.target +
                                     "' does not exist",
                                 at));
        continue;
      }
    }
    if (r.source == r.target) {
      out.push_back(make_error("self-relation",
                               "entity '" + r.source + "' relates to itself", at));
      continue;
    }
    if (is_temporal(r.kind)) {
      if (!target_is_dct && dst->kind != EntityKind::Timex3) {
        out.push_back(
            make_error("temporal-target", "temporal relation target must be TIMEX3", at));
      }
      continue;
    }
    if (target_is_dct) {
      out.push_back(make_error("relation-kind",
                               std::string(to_string(r.kind)) + " cannot target DCT", at));
      continue;
    }
    auto bad = [&](std::string message) {
      out.push_back(make_error("relation-kind", std::move(message), at));
    };
    switch (r.kind) {
      case RelationKind::ChangeSbj:
      case RelationKind::ChangeRef:
        if (src->kind != EntityKind::Change)
          bad(std::string(to_string(r.kind)) + " source must be a Change entity");
        else if (r.kind == RelationKind::ChangeSbj)
          has_change_subject.insert(src->id);
        break;
      case RelationKind::FeatureSbj:
        if (src->kind != EntityKind::Feature) bad("featureSbj source must be a Feature entity");
        break;
      case RelationKind::SubRegion:
        if (src->kind != EntityKind::Anatomical && src->kind != EntityKind::Disease)
          bad("subRegion source must be an Anatomical or Disease entity");
        break;
      case RelationKind::KeyValue:
        if (src->kind == EntityKind::TestKey) {
          if (dst->kind != EntityKind::TestVal) bad("keyValue from a test key must target a test value");
        } else if (src->kind == EntityKind::MedKey) {
          if (dst->kind != EntityKind::MedVal)
            bad("keyValue from a medicine key must target a medicine value");
        } else {
          bad("keyValue source must be a test or medicine key");
        }
        break;
      default:
        break;
    }
  }

  for (const auto& e : doc.entities) {
    if (e.kind == EntityKind::Change && !has_change_subject.count(e.id)) {
      out.push_back(make_warning("orphan-change", "orphan change", e.span.begin));
    }
  }
  return out;
}

}  // namespace heart
