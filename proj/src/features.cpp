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

#include "clickbuy/features.hpp"

#include <algorithm>
#include <cmath>

#include "clickbuy/error.hpp"

namespace clickbuy {

namespace {

constexpr std::array<std::string_view, kFeatureCount> kNames = {
    "hour", "day_of_month", "day_of_week", "month", "clicks", "duration"};

struct Field {
  unsigned shift;
  unsigned width;
};

// Key layout, indexed by Feature.
constexpr std::array<Field, kFeatureCount> kLayout = {{
    {0, 5},    // hour 0-23
    {5, 5},    // day of month 1-31
    {10, 3},   // day of week 0-6
    {13, 4},   // month 1-12
    {17, 16},  // click-count bin
    {33, 16},  // duration bin
}};

}  // namespace

std::string_view feature_name(Feature f) noexcept { return kNames[static_cast<std::size_t>(f)]; }

std::optional<Feature> parse_feature(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (kNames[i] == name) return kAllFeatures[i];
  }
  return std::nullopt;
}

std::string FeatureSet::to_string() const {
  std::string out;
  for (Feature f : kAllFeatures) {
    if (!contains(f)) continue;
    if (!out.empty()) out += ',';
    out += feature_name(f);
  }
  return out;
}

FeatureSet FeatureSet::parse(std::string_view list) {
  FeatureSet set = none();
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t comma = list.find(',', start);
    if (comma == std::string_view::npos) comma = list.size();
    std::string_view name = list.substr(start, comma - start);
    while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    if (!name.empty()) {
      const auto f = parse_feature(name);
      if (!f) throw ConfigError("unknown feature: " + std::string(name));
      set.insert(*f);
    }
    start = comma + 1;
  }
  if (set.empty()) throw ConfigError("feature list is empty");
  return set;
}

void FeatureConfig::validate() const {
  if (enabled.empty()) throw ConfigError("at least one feature must be enabled");
  if (click_cap < 1 || click_cap > kMaxBinCap) {
    throw ConfigError("click_cap must be in [1, " + std::to_string(kMaxBinCap) + "]");
  }
  if (duration_cap < 0 || duration_cap > kMaxBinCap) {
    throw ConfigError("duration_cap must be in [0, " + std::to_string(kMaxBinCap) + "]");
  }
}

std::string FeatureConfig::canonical() const {
  return "features=" + enabled.to_string() + ";click_cap=" + std::to_string(click_cap) +
         ";duration_cap=" + std::to_string(duration_cap);
}

std::uint64_t FeatureConfig::checksum() const { return fnv1a64(canonical()); }

int FeatureVector::value(Feature f) const noexcept {
  switch (f) {
    case Feature::HourOfDay: return hour_of_day;
    case Feature::DayOfMonth: return day_of_month;
    case Feature::DayOfWeek: return day_of_week;
    case Feature::MonthOfYear: return month_of_year;
    case Feature::ItemClickCount: return item_click_count;
    case Feature::SessionDuration: return duration_bin;
  }
  return 0;
}

void FeatureVector::set(Feature f, int v) noexcept {
  switch (f) {
    case Feature::HourOfDay: hour_of_day = v; break;
    case Feature::DayOfMonth: day_of_month = v; break;
    case Feature::DayOfWeek: day_of_week = v; break;
    case Feature::MonthOfYear: month_of_year = v; break;
    case Feature::ItemClickCount: item_click_count = v; break;
    case Feature::SessionDuration: duration_bin = v; break;
  }
}

double session_duration_minutes(const Session& session) noexcept {
  if (session.clicks.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(
      session.clicks.begin(), session.clicks.end(),
      [](const ClickEvent& a, const ClickEvent& b) { return a.timestamp < b.timestamp; });
  return static_cast<double>(hi->timestamp.ms - lo->timestamp.ms) / 60'000.0;
}

int bin_click_count(int clicks, const FeatureConfig& cfg) noexcept {
  return std::clamp(clicks, 1, cfg.click_cap);
}

int bin_duration(double minutes, const FeatureConfig& cfg) noexcept {
  const double floored = std::floor(std::max(0.0, minutes));
  if (floored >= cfg.duration_cap) return cfg.duration_cap;
  return static_cast<int>(floored);
}

std::vector<Instance> extract_instances(const Session& session, const FeatureConfig& cfg) {
  std::vector<Instance> out;
  if (session.clicks.empty()) return out;

  Timestamp first = session.clicks.front().timestamp;
  Timestamp last = first;
  std::vector<std::pair<ItemId, int>> counts;
  for (const ClickEvent& c : session.clicks) {
    first = std::min(first, c.timestamp);
    last = std::max(last, c.timestamp);
    auto it = std::find_if(counts.begin(), counts.end(),
                           [&](const auto& p) { return p.first == c.item_id; });
    if (it == counts.end()) {
      counts.emplace_back(c.item_id, 1);
    } else {
      ++it->second;
    }
  }

  const CivilTime civil = to_civil(first);
  FeatureVector base;
  base.hour_of_day = civil.hour;
  base.day_of_month = civil.day;
  base.day_of_week = civil.weekday;
  base.month_of_year = civil.month;
  // Whole minutes, computed on integer milliseconds.
  const std::int64_t span_ms = last.ms - first.ms;
  base.duration_bin = static_cast<int>(std::min<std::int64_t>(span_ms / 60'000, cfg.duration_cap));

  out.reserve(counts.size());
  for (const auto& [item, n] : counts) {
    Instance inst;
    inst.session_id = session.session_id;
    inst.item_id = item;
    inst.click_count = n;
    inst.features = base;
    inst.features.item_click_count = bin_click_count(n, cfg);
    inst.label = session.bought(item) ? Label::Buy : Label::NonBuy;
    out.push_back(inst);
  }
  return out;
}

FeatureKey feature_key(const FeatureVector& fv, FeatureSet enabled) noexcept {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const Feature f = kAllFeatures[i];
    if (!enabled.contains(f)) continue;
    const std::uint64_t mask = (1ULL << kLayout[i].width) - 1;
    key |= (static_cast<std::uint64_t>(fv.value(f)) & mask) << kLayout[i].shift;
  }
  return FeatureKey{key};
}

FeatureVector decode_feature_key(FeatureKey key) noexcept {
  FeatureVector fv;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const std::uint64_t mask = (1ULL << kLayout[i].width) - 1;
    fv.set(kAllFeatures[i], static_cast<int>((key.value >> kLayout[i].shift) & mask));
  }
  return fv;
}

std::uint64_t fnv1a64(std::string_view data) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace clickbuy
