// Copyright 2026 The clickbuy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace clickbuy {

// UTC instant with millisecond resolution.
struct Timestamp {
  std::int64_t ms = 0;  // since 1970-01-01T00:00:00Z

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

struct CivilTime {
  int year = 1970;
  int month = 1;   // 1-12
  int day = 1;     // 1-31
  int hour = 0;
  int minute = 0;
  int second = 0;
  int millisecond = 0;
  int weekday = 4;  // 0 = Sunday
};

// Days since the epoch for a proleptic Gregorian date.
std::int64_t days_from_civil(int year, int month, int day) noexcept;
int days_in_month(int year, int month) noexcept;

Timestamp to_timestamp(const CivilTime& civil) noexcept;
CivilTime to_civil(Timestamp ts) noexcept;

/// Parses `YYYY-MM-DDTHH:MM:SS[.fraction][Z]`. The fraction may have 1-9
/// digits and is truncated to milliseconds. Returns nullopt for anything that
/// is not a valid calendar instant.
std::optional<Timestamp> parse_timestamp(std::string_view text) noexcept;

// Always emits `YYYY-MM-DDTHH:MM:SS.mmmZ`.
std::string format_timestamp(Timestamp ts);

}  // namespace clickbuy
