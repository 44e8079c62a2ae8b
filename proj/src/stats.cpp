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

#include "clickbuy/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "clickbuy/error.hpp"

namespace clickbuy {

namespace {

struct Tally {
  std::uint64_t count = 0;
  std::uint64_t positives = 0;
};

void append_range(std::vector<StatsRow>& rows, const std::string& table,
                  const std::map<int, Tally>& tallies, int lo, int hi) {
  for (int v = lo; v <= hi; ++v) {
    auto it = tallies.find(v);
    const Tally t = it == tallies.end() ? Tally{} : it->second;
    rows.push_back({table, std::to_string(v), t.count, t.positives});
  }
}

std::string bucket_label(double lower) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", lower);
  return buf;
}

}  // namespace

std::vector<StatsRow> compute_stats(std::span<const Session> sessions, const FeatureConfig& features,
                                    BuyCounting counting, const CategoryBounds& bounds,
                                    double bucket_width) {
  features.validate();
  bounds.validate();
  if (!(bucket_width > 0.0)) throw ConfigError("bucket width must be positive");

  std::map<int, Tally> by_dom, by_dow, by_hour, by_month, by_clicks, by_duration;
  for (const Session& s : sessions) {
    for (const Instance& inst : extract_instances(s, features)) {
      const bool buy = inst.label == Label::Buy;
      const FeatureVector& fv = inst.features;
      for (auto* tally : {&by_dom[fv.day_of_month], &by_dow[fv.day_of_week],
                          &by_hour[fv.hour_of_day], &by_month[fv.month_of_year],
                          &by_clicks[fv.item_click_count], &by_duration[fv.duration_bin]}) {
        ++tally->count;
        if (buy) ++tally->positives;
      }
    }
  }

  std::vector<StatsRow> rows;
  append_range(rows, "day_of_month", by_dom, 1, 31);
  append_range(rows, "day_of_week", by_dow, 0, 6);
  append_range(rows, "hour_of_day", by_hour, 0, 23);
  append_range(rows, "month_of_year", by_month, 1, 12);
  append_range(rows, "click_count", by_clicks, 1, features.click_cap);
  append_range(rows, "duration", by_duration, 0, features.duration_cap);

  const PopularityTable table = build_popularity(sessions, counting);
  std::map<long, Tally> buckets;
  std::array<Tally, 3> categories{};
  for (const auto& [item, pop] : table.entries()) {
    const double p = pop.value();
    Tally& b = buckets[static_cast<long>(std::floor(p / bucket_width))];
    ++b.count;
    b.positives += pop.buys;
    Tally& c = categories[static_cast<std::size_t>(categorize(p, bounds))];
    ++c.count;
    c.positives += pop.buys;
  }
  for (const auto& [index, t] : buckets) {
    rows.push_back({"popularity_bucket", bucket_label(static_cast<double>(index) * bucket_width),
                    t.count, t.positives});
  }
  for (PopularityCategory c :
       {PopularityCategory::Low, PopularityCategory::Medium, PopularityCategory::High}) {
    const Tally& t = categories[static_cast<std::size_t>(c)];
    rows.push_back({"popularity_category", std::string(category_name(c)), t.count, t.positives});
  }
  return rows;
}

void write_stats_csv(std::ostream& out, std::span<const StatsRow> rows) {
  out << "table,bin,count,positives,rate\n";
  char buf[32];
  for (const StatsRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6g", r.rate());
    out << r.table << ',' << r.bin << ',' << r.count << ',' << r.positives << ',' << buf << '\n';
  }
}

}  // namespace clickbuy
