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

#include <gtest/gtest.h>

#include <random>

#include "clickbuy/time.hpp"
#include "test_support.hpp"

namespace clickbuy {
namespace {

using testing::gm;

TEST(Time, ParsesIsoWithMilliseconds) {
  const auto ts = parse_timestamp("2014-04-07T10:51:09.277Z");
  ASSERT_TRUE(ts);
  EXPECT_EQ(ts->ms, 1396867869277);
  const CivilTime c = to_civil(*ts);
  EXPECT_EQ(c.year, 2014);
  EXPECT_EQ(c.month, 4);
  EXPECT_EQ(c.day, 7);
  EXPECT_EQ(c.hour, 10);
  EXPECT_EQ(c.minute, 51);
  EXPECT_EQ(c.second, 9);
  EXPECT_EQ(c.millisecond, 277);
  EXPECT_EQ(c.weekday, 1);
}

TEST(Time, AcceptsVariants) {
  EXPECT_EQ(parse_timestamp("2014-04-07 10:51:09")->ms, 1396867869000);
  EXPECT_EQ(parse_timestamp("2014-04-07T10:51:09Z")->ms, 1396867869000);
  EXPECT_EQ(parse_timestamp("2014-04-07T10:51:09.2Z")->ms, 1396867869200);
  // sub-millisecond digits are truncated
  EXPECT_EQ(parse_timestamp("2014-04-07T10:51:09.123999Z")->ms, 1396867869123);
}

TEST(Time, RejectsMalformed) {
  for (const char* bad : {"notatime", "", "2014-04-07", "2014-13-01T00:00:00Z",
                          "2014-02-29T00:00:00Z", "2014-04-07T24:00:00Z", "2014-04-07T10:51:09.Z",
                          "2014-04-07T10:51:09.277ZZ", "2014-04-07X10:51:09", "2014/04/07T10:51:09",
                          "2014-04-07T10:51:09.1234567890Z"}) {
    EXPECT_FALSE(parse_timestamp(bad)) << bad;
  }
  EXPECT_TRUE(parse_timestamp("2016-02-29T00:00:00Z"));
}

TEST(Time, FormatRoundTrip) {
  const Timestamp ts{1396809898314};
  EXPECT_EQ(format_timestamp(ts), "2014-04-06T18:44:58.314Z");
  EXPECT_EQ(parse_timestamp(format_timestamp(ts)), ts);
}

TEST(Time, CalendarMatchesGmtime) {
  std::mt19937_64 rng(5);
  // 1950 to 2100
  std::uniform_int_distribution<std::int64_t> dist(-631152000000, 4102444800000);
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t ms = dist(rng);
    const CivilTime c = to_civil(Timestamp{ms});
    const std::tm t = gm(ms);
    ASSERT_EQ(c.year, t.tm_year + 1900) << ms;
    ASSERT_EQ(c.month, t.tm_mon + 1) << ms;
    ASSERT_EQ(c.day, t.tm_mday) << ms;
    ASSERT_EQ(c.hour, t.tm_hour) << ms;
    ASSERT_EQ(c.minute, t.tm_min) << ms;
    ASSERT_EQ(c.second, t.tm_sec) << ms;
    ASSERT_EQ(c.weekday, t.tm_wday) << ms;
    ASSERT_EQ(to_timestamp(c).ms, ms);
    ASSERT_EQ(parse_timestamp(format_timestamp(Timestamp{ms}))->ms, ms);
  }
}

TEST(Time, DaysInMonth) {
  EXPECT_EQ(days_in_month(2014, 2), 28);
  EXPECT_EQ(days_in_month(2000, 2), 29);
  EXPECT_EQ(days_in_month(1900, 2), 28);
  EXPECT_EQ(days_in_month(2014, 4), 30);
  EXPECT_EQ(days_from_civil(1970, 1, 1), 0);
}

}  // namespace
}  // namespace clickbuy
