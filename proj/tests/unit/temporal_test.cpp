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

#include <random>
#include <stdexcept>

#include "doctest.h"

namespace heart {
namespace {

const CalendarDate kDct{2021, 4, 10};

TimeAnchor norm(std::string_view s, std::optional<TimexType> t = TimexType::Date,
                CalendarDate dct = kDct) {
  return PatternTable::builtin().normalize(s, t, dct);
}

TEST_CASE("ISO literal") {
  CHECK(norm("2021-04-03") == TimeAnchor{AbsoluteDate::of_day(2021, 4, 3)});
}

TEST_CASE("relative days resolve against the DCT") {
  CHECK(norm("3 days ago") == TimeAnchor{RelativeOffset{-3, TimeUnit::Day}});
  CHECK(resolve(norm("3 days ago"), kDct) == AbsoluteDate::of_day(2021, 4, 7));
  CHECK(resolve(norm("3 days ago"), {2021, 3, 2}) == AbsoluteDate::of_day(2021, 2, 27));
  CHECK(resolve(norm("three days ago"), {2020, 3, 2}) == AbsoluteDate::of_day(2020, 2, 28));
  CHECK(resolve(norm("2 days later"), {2020, 12, 31}) == AbsoluteDate::of_day(2021, 1, 2));
}

TEST_CASE("fallback classes stay unresolved") {
  CHECK(norm("early in the morning", TimexType::Time) ==
        TimeAnchor{Unresolved{"early in the morning"}});
  for (auto t : {TimexType::Set, TimexType::Medical, TimexType::Misc, TimexType::Age,
                 TimexType::Time}) {
    CHECK(std::holds_alternative<Unresolved>(norm("2021-04-03", t)));
  }
  CHECK(norm("after the operation") == TimeAnchor{Unresolved{"after the operation"}});
}

TEST_CASE("durations") {
  CHECK(norm("for five days", TimexType::Duration) == TimeAnchor{DurationAmount{5, TimeUnit::Day}});
  CHECK(norm("5-day course", TimexType::Duration) == TimeAnchor{DurationAmount{5, TimeUnit::Day}});
  CHECK(norm("the past four days", TimexType::Duration) ==
        TimeAnchor{DurationAmount{4, TimeUnit::Day}});
  CHECK(norm("for two weeks", TimexType::Duration) == TimeAnchor{DurationAmount{2, TimeUnit::Week}});
  CHECK(norm("a 3-month regimen", TimexType::Duration) ==
        TimeAnchor{DurationAmount{3, TimeUnit::Month}});
}

TEST_CASE("numeric and month-name dates") {
  CHECK(norm("10/27/2020") == TimeAnchor{AbsoluteDate::of_day(2020, 10, 27)});
  CHECK(norm("2021/4/3") == TimeAnchor{AbsoluteDate::of_day(2021, 4, 3)});
  CHECK(norm("2021-03") == TimeAnchor{AbsoluteDate::of_month(2021, 3)});
  CHECK(norm("2019") == TimeAnchor{AbsoluteDate::of_year(2019)});
  CHECK(norm("March 2021") == TimeAnchor{AbsoluteDate::of_month(2021, 3)});
  CHECK(norm("April 3") == TimeAnchor{AbsoluteDate::of_day(2021, 4, 3)});
  CHECK(norm("January 5, 2022") == TimeAnchor{AbsoluteDate::of_day(2022, 1, 5)});
  CHECK(norm("12 Oct 2020") == TimeAnchor{AbsoluteDate::of_day(2020, 10, 12)});
  CHECK(norm("the 3rd of May") == TimeAnchor{AbsoluteDate::of_day(2021, 5, 3)});
  CHECK(norm("  On   April 3rd. ") == TimeAnchor{AbsoluteDate::of_day(2021, 4, 3)});
  CHECK(norm("in June") == TimeAnchor{AbsoluteDate::of_month(2021, 6)});
  // Impossible calendar dates are not guessed at.
  CHECK(std::holds_alternative<Unresolved>(norm("2021-02-30")));
  CHECK(std::holds_alternative<Unresolved>(norm("February 30")));
}

TEST_CASE("a missing type is read as a date") {
  CHECK(norm("yesterday", std::nullopt) == TimeAnchor{RelativeOffset{-1, TimeUnit::Day}});
}

TEST_CASE("relative words") {
  CHECK(norm("today") == TimeAnchor{RelativeOffset{0, TimeUnit::Day}});
  CHECK(norm("yesterday") == TimeAnchor{RelativeOffset{-1, TimeUnit::Day}});
  CHECK(norm("the day before yesterday") == TimeAnchor{RelativeOffset{-2, TimeUnit::Day}});
  CHECK(norm("tomorrow") == TimeAnchor{RelativeOffset{1, TimeUnit::Day}});
  CHECK(norm("2 weeks ago") == TimeAnchor{RelativeOffset{-14, TimeUnit::Day}});
  CHECK(norm("next week") == TimeAnchor{RelativeOffset{7, TimeUnit::Day}});
  CHECK(norm("last year") == TimeAnchor{RelativeOffset{-1, TimeUnit::Year}});
  CHECK(norm("in 3 months") == TimeAnchor{RelativeOffset{3, TimeUnit::Month}});
  CHECK(resolve(norm("last year"), kDct) == AbsoluteDate::of_year(2020));
  CHECK(resolve(norm("1 month ago"), {2021, 1, 31}) == AbsoluteDate::of_month(2020, 12));
}

TEST_CASE("normalization is deterministic") {
  for (const char* s : {"3 days ago", "March 2021", "for five days", "whenever"}) {
    CHECK(norm(s) == norm(s));
  }
}

TEST_CASE("compare_anchors examples") {
  CHECK(compare_anchors(AbsoluteDate::of_month(2021, 3), AbsoluteDate::of_day(2021, 4, 15), kDct) ==
        AnchorOrder::Less);
  CHECK(compare_anchors(AbsoluteDate::of_month(2021, 3), AbsoluteDate::of_day(2021, 3, 10), kDct) ==
        AnchorOrder::Incomparable);
  CHECK(compare_anchors(RelativeOffset{-3, TimeUnit::Day}, AbsoluteDate::of_day(2021, 4, 8),
                        kDct) == AnchorOrder::Less);
  CHECK(compare_anchors(AbsoluteDate::of_year(2021), AbsoluteDate::of_year(2020), kDct) ==
        AnchorOrder::Greater);
  CHECK(compare_anchors(AbsoluteDate::of_year(2021), AbsoluteDate::of_day(2021, 1, 1), kDct) ==
        AnchorOrder::Incomparable);
  CHECK(compare_anchors(DurationAmount{3, TimeUnit::Day}, AbsoluteDate::of_year(2021), kDct) ==
        AnchorOrder::Incomparable);
  CHECK(compare_anchors(Unresolved{"x"}, Unresolved{"x"}, kDct) == AnchorOrder::Incomparable);
  CHECK(compare_anchors(AbsoluteDate::of_month(2021, 3), AbsoluteDate::of_month(2021, 3), kDct) ==
        AnchorOrder::Equal);
}

// Independent oracle: plain day stepping and month counting.
CalendarDate oracle_shift_days(CalendarDate d, int n) {
  static const int dim[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  auto len = [&](int y, int m) {
    bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return m == 2 && leap ? 29 : dim[m - 1];
  };
  while (n > 0) {
    --n;
    if (++d.day > len(d.year, d.month)) {
      d.day = 1;
      if (++d.month == 13) d.month = 1, ++d.year;
    }
  }
  while (n < 0) {
    ++n;
    if (--d.day == 0) {
      if (--d.month == 0) d.month = 12, --d.year;
      d.day = len(d.year, d.month);
    }
  }
  return d;
}

TEST_CASE("calendar oracle over month and year boundaries") {
  std::mt19937 rng(2021);
  const char* units[] = {"days", "weeks", "months"};
  const char* dirs[] = {"ago", "later"};
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    // DCTs cluster near month ends so most cases cross a boundary.
    CalendarDate dct{std::uniform_int_distribution<int>(1995, 2030)(rng),
                     std::uniform_int_distribution<int>(1, 12)(rng), 1};
    const int dim = days_in_month(dct.year, dct.month);
    dct.day = std::uniform_int_distribution<int>(0, 1)(rng) ? dim - std::uniform_int_distribution<int>(0, 2)(rng)
                                                            : std::uniform_int_distribution<int>(1, 3)(rng);
    const int n = std::uniform_int_distribution<int>(1, 40)(rng);
    const int u = i % 3;
    const int dir = (i / 3) % 2;
    const std::string surface = std::to_string(n) + " " + units[u] + " " + dirs[dir];
    CAPTURE(surface);
    CAPTURE(format_iso_date(dct));
    const int sign = dir == 0 ? -1 : 1;
    auto got = resolve(norm(surface, TimexType::Date, dct), dct);
    REQUIRE(got.has_value());
    if (u == 2) {
      int months = dct.year * 12 + (dct.month - 1) + sign * n;
      CHECK(*got == AbsoluteDate::of_month(months / 12, months % 12 + 1));
    } else {
      CHECK(*got == AbsoluteDate::of_day(oracle_shift_days(dct, sign * n * (u == 1 ? 7 : 1))));
    }
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("custom locale tables") {
  auto table = PatternTable::parse(
      "number deux 2\n"
      "unit jours day\n"
      "month avril 4\n"
      "rule relative n=$1 unit=$2 sign=- :: il y a ({NUM}|\\d+) ({UNIT})\n"
      "rule date m=$2 d=$1 :: (\\d{1,2}) ({MONTH})\n");
  CHECK(table.rule_count() == 2);
  CHECK(table.normalize("il y a deux jours", TimexType::Date, kDct) ==
        TimeAnchor{RelativeOffset{-2, TimeUnit::Day}});
  CHECK(table.normalize("3 avril", TimexType::Date, kDct) ==
        TimeAnchor{AbsoluteDate::of_day(2021, 4, 3)});
  CHECK(std::holds_alternative<Unresolved>(table.normalize("3 days ago", TimexType::Date, kDct)));
  CHECK_THROWS_AS(PatternTable::parse("rule date y=$1 :: ("), std::runtime_error);
  CHECK_THROWS_AS(PatternTable::parse("rule nonsense :: x"), std::runtime_error);
  CHECK_THROWS_AS(PatternTable::parse("unit fortnight 14"), std::runtime_error);
  CHECK_THROWS_AS(PatternTable::load("/nonexistent/table.txt"), std::runtime_error);
}

TEST_CASE("format_absolute") {
  CHECK(format_absolute(AbsoluteDate::of_year(2021)) == "2021");
  CHECK(format_absolute(AbsoluteDate::of_month(2021, 3)) == "2021-03");
  CHECK(format_absolute(AbsoluteDate::of_day(2021, 3, 9)) == "2021-03-09");
}

}  // namespace
}  // namespace heart
