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

#ifndef HEART_DATE_HPP_
#define HEART_DATE_HPP_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace heart {

// Proleptic Gregorian calendar date at day granularity.
struct CalendarDate {
  int year = 1970;
  int month = 1;
  int day = 1;

  auto operator<=>(const CalendarDate&) const = default;
};

bool is_leap_year(int year);
int days_in_month(int year, int month);
bool is_valid_date(int year, int month, int day);

// Days since 1970-01-01.
std::int64_t to_epoch_days(const CalendarDate& date);
CalendarDate from_epoch_days(std::int64_t days);

CalendarDate add_days(const CalendarDate& date, std::int64_t days);

// Strict YYYY-MM-DD.
std::optional<CalendarDate> parse_iso_date(std::string_view text);
std::string format_iso_date(const CalendarDate& date);

}  // namespace heart

#endif  // HEART_DATE_HPP_
