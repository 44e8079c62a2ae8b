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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "clickbuy/features.hpp"
#include "clickbuy/popularity.hpp"

namespace clickbuy {

// One row of the exploratory aggregation report.
//
// Instance tables (day_of_month, day_of_week, hour_of_day, month_of_year,
// click_count, duration) count (session, item) instances and how many were
// bought; rate is the buy probability. Popularity tables (popularity_bucket,
// popularity_category) count items and their buys; rate is buys per item.
struct StatsRow {
  std::string table;
  std::string bin;
  std::uint64_t count = 0;
  std::uint64_t positives = 0;

  double rate() const noexcept {
    return count == 0 ? 0.0 : static_cast<double>(positives) / static_cast<double>(count);
  }

  friend bool operator==(const StatsRow&, const StatsRow&) = default;
};

std::vector<StatsRow> compute_stats(std::span<const Session> sessions, const FeatureConfig& features,
                                    BuyCounting counting, const CategoryBounds& bounds,
                                    double bucket_width = 0.05);

void write_stats_csv(std::ostream& out, std::span<const StatsRow> rows);

}  // namespace clickbuy
