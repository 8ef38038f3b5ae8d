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

#include "heart/temporal.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace heart {

extern const char* const kBuiltinLocaleTable;

namespace {

std::string lower_collapsed(std::string_view s) {
  std::string out;
  bool space = false;
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(c));
  }
  while (!out.empty() && (out.back() == '.' || out.back() == ',')) out.pop_back();
  return out;
}

std::string regex_escape(std::string_view word) {
  std::string out;
  for (char c : word) {
    if (std::string_view("\\^$.|?*+()[]{}").find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
  return out;
}

template <typename T>
std::string alternation(std::vector<std::pair<std::string, T>> words) {
  std::sort(words.begin(), words.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
    return a.first < b.first;
  });
  std::string out = "(?:";
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += '|';
    out += regex_escape(words[i].first);
  }
  return out + ")";
}

void replace_all(std::string& s, std::string_view from, const std::string& to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

std::int64_t month_index(int year, int month) {
  return static_cast<std::int64_t>(year) * 12 + (month - 1);
}

}  // namespace

std::string_view to_string(AnchorOrder order) {
  switch (order) {
    case AnchorOrder::Less: return "less";
    case AnchorOrder::Greater: return "greater";
    case AnchorOrder::Equal: return "equal";
    case AnchorOrder::Incomparable: return "incomparable";
  }
  return "incomparable";
}

std::string_view to_string(TimeUnit unit) {
  switch (unit) {
    case TimeUnit::Day: return "day";
    case TimeUnit::Week: return "week";
    case TimeUnit::Month: return "month";
    case TimeUnit::Year: return "year";
  }
  return "day";
}

std::string_view to_string(Granularity g) {
  switch (g) {
    case Granularity::Year: return "year";
    case Granularity::Month: return "month";
    case Granularity::Day: return "day";
  }
  return "year";
}

std::string format_absolute(const AbsoluteDate& date) {
  char buf[32];
  switch (date.granularity) {
    case Granularity::Year:
      std::snprintf(buf, sizeof buf, "%04d", date.year);
      break;
    case Granularity::Month:
      std::snprintf(buf, sizeof buf, "%04d-%02d", date.year, date.month.value_or(1));
      break;
    case Granularity::Day:
      std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", date.year, date.month.value_or(1),
                    date.day.value_or(1));
      break;
  }
  return buf;
}

std::optional<AbsoluteDate> resolve(const TimeAnchor& anchor, const CalendarDate& dct) {
  if (const auto* abs = std::get_if<AbsoluteDate>(&anchor)) return *abs;
  const auto* rel = std::get_if<RelativeOffset>(&anchor);
  if (!rel) return std::nullopt;
  switch (rel->unit) {
    case TimeUnit::Day:
      return AbsoluteDate::of_day(add_days(dct, rel->amount));
    case TimeUnit::Week:
      return AbsoluteDate::of_day(add_days(dct, 7 * static_cast<std::int64_t>(rel->amount)));
    case TimeUnit::Month: {
      std::int64_t idx = month_index(dct.year, dct.month) + rel->amount;
      std::int64_t y = idx >= 0 ? idx / 12 : (idx - 11) / 12;
      return AbsoluteDate::of_month(static_cast<int>(y), static_cast<int>(idx - y * 12 + 1));
    }
    case TimeUnit::Year:
      return AbsoluteDate::of_year(dct.year + rel->amount);
  }
  return std::nullopt;
}

AnchorOrder compare_anchors(const TimeAnchor& a, const TimeAnchor& b, const CalendarDate& dct) {
  auto ra = resolve(a, dct);
  auto rb = resolve(b, dct);
  if (!ra || !rb) return AnchorOrder::Incomparable;
  auto order = [](auto x, auto y) {
    return x < y ? AnchorOrder::Less : AnchorOrder::Greater;
  };
  if (ra->year != rb->year) return order(ra->year, rb->year);
  Granularity common = std::min(ra->granularity, rb->granularity);
  if (common >= Granularity::Month) {
    if (*ra->month != *rb->month) return order(*ra->month, *rb->month);
    if (common == Granularity::Day && *ra->day != *rb->day) return order(*ra->day, *rb->day);
  }
  return ra->granularity == rb->granularity ? AnchorOrder::Equal : AnchorOrder::Incomparable;
}

// ---------------------------------------------------------------------------

PatternTable PatternTable::parse(std::string_view source) {
  PatternTable table;
  struct PendingRule {
    Rule rule;
    std::string regex;
  };
  std::vector<PendingRule> pending;

  std::istringstream in{std::string(source)};
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw std::runtime_error("locale table line " + std::to_string(line_no) + ": " + why);
  };
  auto parse_int = [&](const std::string& s) {
    char* end = nullptr;
    long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0') fail("expected an integer, got '" + s + "'");
    return static_cast<int>(v);
  };
  auto parse_unit = [&](const std::string& s) -> TimeUnit {
    if (s == "day") return TimeUnit::Day;
    if (s == "week") return TimeUnit::Week;
    if (s == "month") return TimeUnit::Month;
    if (s == "year") return TimeUnit::Year;
    fail("unknown unit '" + s + "'");
    return TimeUnit::Day;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream words(line);
    std::string directive;
    words >> directive;
    if (directive == "number" || directive == "month" || directive == "unit") {
      std::string word, value, extra;
      if (!(words >> word >> value) || (words >> extra)) fail("expected '<word> <value>'");
      if (directive == "number") {
        table.numbers_.emplace_back(word, parse_int(value));
      } else if (directive == "month") {
        int m = parse_int(value);
        if (m < 1 || m > 12) fail("month out of range");
        table.months_.emplace_back(word, m);
      } else {
        table.units_.emplace_back(word, parse_unit(value));
      }
    } else if (directive == "rule") {
      auto sep = line.find(" :: ");
      if (sep == std::string::npos) fail("rule lacks ' :: ' separator");
      std::istringstream head(line.substr(0, sep));
      std::string skip, kind;
      head >> skip >> kind;
      PendingRule pr;
      pr.rule.line = line_no;
      if (kind == "date") pr.rule.kind = Template::Date;
      else if (kind == "relative") pr.rule.kind = Template::Relative;
      else if (kind == "duration") pr.rule.kind = Template::Duration;
      else fail("unknown template '" + kind + "'");
      std::string field;
      while (head >> field) {
        auto eq = field.find('=');
        if (eq == std::string::npos) fail("expected key=value, got '" + field + "'");
        std::string key = field.substr(0, eq), value = field.substr(eq + 1);
        if (key == "sign") {
          if (value == "-") pr.rule.sign = -1;
          else if (value == "+") pr.rule.sign = 1;
          else fail("sign must be + or -");
          continue;
        }
        Field f;
        if (value.size() == 2 && value[0] == '$' && value[1] >= '1' && value[1] <= '9') {
          f.group = value[1] - '0';
        } else {
          f.literal = value;
        }
        if (key == "y") pr.rule.year = f;
        else if (key == "m") pr.rule.month = f;
        else if (key == "d") pr.rule.day = f;
        else if (key == "n") pr.rule.amount = f;
        else if (key == "unit") pr.rule.unit = f;
        else fail("unknown field '" + key + "'");
      }
      if (pr.rule.kind == Template::Date && !pr.rule.year && !pr.rule.month)
        fail("date template needs y or m");
      if (pr.rule.kind != Template::Date && (!pr.rule.amount || !pr.rule.unit))
        fail("template needs n and unit");
      pr.regex = line.substr(sep + 4);
      pending.push_back(std::move(pr));
    } else {
      fail("unknown directive '" + directive + "'");
    }
  }

  const std::string num = alternation(table.numbers_);
  const std::string mon = alternation(table.months_);
  const std::string uni = alternation(table.units_);
  for (auto& pr : pending) {
    std::string re = pr.regex;
    replace_all(re, "{NUM}", num);
    replace_all(re, "{MONTH}", mon);
    replace_all(re, "{UNIT}", uni);
    try {
      pr.rule.pattern = std::regex("^(?:" + re + ")$", std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      line_no = pr.rule.line;
      fail(std::string("bad regex: ") + e.what());
    }
    table.rules_.push_back(std::move(pr.rule));
  }
  return table;
}

PatternTable PatternTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open locale table '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const PatternTable& PatternTable::builtin() {
  static const PatternTable table = parse(kBuiltinLocaleTable);
  return table;
}

std::optional<int> PatternTable::number(std::string_view word) const {
  if (!word.empty() && std::all_of(word.begin(), word.end(),
                                   [](char c) { return c >= '0' && c <= '9'; })) {
    if (word.size() > 6) return std::nullopt;
    return std::atoi(std::string(word).c_str());
  }
  for (const auto& [w, v] : numbers_)
    if (w == word) return v;
  return std::nullopt;
}

std::optional<int> PatternTable::month(std::string_view word) const {
  if (auto n = number(word); n && !word.empty() && word[0] >= '0' && word[0] <= '9') return n;
  for (const auto& [w, v] : months_)
    if (w == word) return v;
  return std::nullopt;
}

std::optional<TimeUnit> PatternTable::unit(std::string_view word) const {
  for (const auto& [w, v] : units_)
    if (w == word) return v;
  if (word == "day") return TimeUnit::Day;
  if (word == "week") return TimeUnit::Week;
  if (word == "month") return TimeUnit::Month;
  if (word == "year") return TimeUnit::Year;
  return std::nullopt;
}

std::optional<TimeAnchor> PatternTable::apply(const Rule& rule, const std::smatch& match,
                                              const CalendarDate& dct) const {
  // nullopt: field absent. Empty string: capture did not participate.
  auto text = [&](const std::optional<Field>& f) -> std::optional<std::string> {
    if (!f) return std::nullopt;
    if (f->group < 0) return f->literal;
    if (static_cast<std::size_t>(f->group) >= match.size() || !match[f->group].matched)
      return std::string();
    return match[f->group].str();
  };
  auto present = [](const std::optional<std::string>& s) { return s && !s->empty(); };

  if (rule.kind == Template::Date) {
    auto ys = text(rule.year), ms = text(rule.month), ds = text(rule.day);
    int y = dct.year;
    if (present(ys)) {
      auto v = number(*ys);
      if (!v) return std::nullopt;
      y = *v;
    }
    if (!present(ms)) {
      if (!present(ys) || y < 1 || y > 9999) return std::nullopt;
      return AbsoluteDate::of_year(y);
    }
    auto m = month(*ms);
    if (!m || *m < 1 || *m > 12 || y < 1 || y > 9999) return std::nullopt;
    if (!present(ds)) return AbsoluteDate::of_month(y, *m);
    auto d = number(*ds);
    if (!d || !is_valid_date(y, *m, *d)) return std::nullopt;
    return AbsoluteDate::of_day(y, *m, *d);
  }

  auto ns = text(rule.amount), us = text(rule.unit);
  if (!present(ns) || !present(us)) return std::nullopt;
  auto n = number(*ns);
  auto u = unit(*us);
  if (!n || !u) return std::nullopt;
  if (rule.kind == Template::Duration) return DurationAmount{*n, *u};
  int amount = rule.sign * *n;
  if (*u == TimeUnit::Week) return RelativeOffset{amount * 7, TimeUnit::Day};
  return RelativeOffset{amount, *u};
}

TimeAnchor PatternTable::normalize(std::string_view surface, std::optional<TimexType> type,
                                   const CalendarDate& dct) const {
  Unresolved fallback{std::string(surface)};
  if (type && *type != TimexType::Date && *type != TimexType::Duration) return fallback;
  const std::string key = lower_collapsed(surface);
  if (key.empty()) return fallback;
  std::smatch match;
  for (const auto& rule : rules_) {
    if (!std::regex_match(key, match, rule.pattern)) continue;
    if (auto anchor = apply(rule, match, dct)) return *anchor;
  }
  return fallback;
}

namespace {

std::shared_ptr<const PatternTable>& default_table_slot() {
  static std::shared_ptr<const PatternTable> slot;
  return slot;
}

std::once_flag& default_table_once() {
  static std::once_flag flag;
  return flag;
}

}  // namespace

const PatternTable& default_pattern_table() {
  std::call_once(default_table_once(), [] {
    if (default_table_slot()) return;
    if (const char* path = std::getenv("HEART_LOCALE_TABLE"); path && *path) {
      default_table_slot() = std::make_shared<const PatternTable>(PatternTable::load(path));
    } else {
      default_table_slot() = std::shared_ptr<const PatternTable>(
          std::shared_ptr<const PatternTable>{}, &PatternTable::builtin());
    }
  });
  return *default_table_slot();
}

void set_default_pattern_table(PatternTable table) {
  std::call_once(default_table_once(), [] {});
  default_table_slot() = std::make_shared<const PatternTable>(std::move(table));
}

TimeAnchor normalize_timex(std::string_view surface, std::optional<TimexType> type,
                           const CalendarDate& dct) {
  return default_pattern_table().normalize(surface, type, dct);
}

}  // namespace heart
