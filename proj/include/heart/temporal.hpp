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

#ifndef HEART_TEMPORAL_HPP_
#define HEART_TEMPORAL_HPP_

#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "heart/annotation.hpp"
#include "heart/date.hpp"

namespace heart {

enum class Granularity { Year, Month, Day };

enum class TimeUnit { Day, Week, Month, Year };

// A calendar date known to year, month or day precision.
struct AbsoluteDate {
  int year = 1970;
  std::optional<int> month;
  std::optional<int> day;
  Granularity granularity = Granularity::Year;

  static AbsoluteDate of_year(int y) { return {y, std::nullopt, std::nullopt, Granularity::Year}; }
  static AbsoluteDate of_month(int y, int m) { return {y, m, std::nullopt, Granularity::Month}; }
  static AbsoluteDate of_day(int y, int m, int d) { return {y, m, d, Granularity::Day}; }
  static AbsoluteDate of_day(const CalendarDate& date) {
    return of_day(date.year, date.month, date.day);
  }

  // First calendar day covered by this date.
  CalendarDate first_day() const { return {year, month.value_or(1), day.value_or(1)}; }

  bool operator==(const AbsoluteDate&) const = default;
};

// Signed offset from the document creation time. Weeks are stored as days.
struct RelativeOffset {
  int amount = 0;
  TimeUnit unit = TimeUnit::Day;

  bool operator==(const RelativeOffset&) const = default;
};

struct DurationAmount {
  int amount = 0;
  TimeUnit unit = TimeUnit::Day;

  bool operator==(const DurationAmount&) const = default;
};

struct Unresolved {
  std::string surface;

  bool operator==(const Unresolved&) const = default;
};

using TimeAnchor = std::variant<AbsoluteDate, RelativeOffset, DurationAmount, Unresolved>;

enum class AnchorOrder { Less, Greater, Equal, Incomparable };

std::string_view to_string(AnchorOrder order);
std::string_view to_string(TimeUnit unit);
std::string_view to_string(Granularity granularity);

// "2021", "2021-03" or "2021-03-10".
std::string format_absolute(const AbsoluteDate& date);

// Absolute form of an anchor: absolutes pass through, relatives are applied to
// the DCT. Durations and unresolved anchors have none.
std::optional<AbsoluteDate> resolve(const TimeAnchor& anchor, const CalendarDate& dct);

// Chronological order at the coarsest granularity both operands share.
AnchorOrder compare_anchors(const TimeAnchor& a, const TimeAnchor& b, const CalendarDate& dct);

// Regex rules mapping English surface forms to anchors. See
// docs/locale-table.md for the file format.
class PatternTable {
 public:
  // Throws std::runtime_error with the offending line number.
  static PatternTable parse(std::string_view source);
  static PatternTable load(const std::string& path);
  static const PatternTable& builtin();

  TimeAnchor normalize(std::string_view surface, std::optional<TimexType> type,
                       const CalendarDate& dct) const;

  std::size_t rule_count() const { return rules_.size(); }

 private:
  enum class Template { Date, Relative, Duration };
  struct Field {
    int group = -1;  // capture index, or -1 for a literal
    std::string literal;
  };
  struct Rule {
    Template kind = Template::Date;
    std::optional<Field> year, month, day, amount, unit;
    int sign = 1;
    std::regex pattern;
    std::size_t line = 0;
  };

  std::optional<int> number(std::string_view word) const;
  std::optional<int> month(std::string_view word) const;
  std::optional<TimeUnit> unit(std::string_view word) const;
  std::optional<TimeAnchor> apply(const Rule& rule, const std::smatch& match,
                                  const CalendarDate& dct) const;

  std::vector<std::pair<std::string, int>> numbers_;
  std::vector<std::pair<std::string, int>> months_;
  std::vector<std::pair<std::string, TimeUnit>> units_;
  std::vector<Rule> rules_;
};

// Normalizes with the process-wide table: the file named by
// HEART_LOCALE_TABLE when set at first use, else the built-in English rules.
TimeAnchor normalize_timex(std::string_view surface, std::optional<TimexType> type,
                           const CalendarDate& dct);

const PatternTable& default_pattern_table();

// Replaces the process-wide table. Call before any concurrent use.
void set_default_pattern_table(PatternTable table);

}  // namespace heart

#endif  // HEART_TEMPORAL_HPP_
