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

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clickbuy/ingest.hpp"

namespace clickbuy {

enum class Feature : std::uint8_t {
  HourOfDay,
  DayOfMonth,
  DayOfWeek,
  MonthOfYear,
  ItemClickCount,
  SessionDuration,
};

inline constexpr std::size_t kFeatureCount = 6;
inline constexpr std::array<Feature, kFeatureCount> kAllFeatures = {
    Feature::HourOfDay,   Feature::DayOfMonth,     Feature::DayOfWeek,
    Feature::MonthOfYear, Feature::ItemClickCount, Feature::SessionDuration};

std::string_view feature_name(Feature f) noexcept;
std::optional<Feature> parse_feature(std::string_view name) noexcept;

class FeatureSet {
 public:
  constexpr FeatureSet() = default;
  static constexpr FeatureSet all() { return FeatureSet((1u << kFeatureCount) - 1); }
  static constexpr FeatureSet none() { return FeatureSet(0); }

  constexpr bool contains(Feature f) const noexcept { return bits_ & bit(f); }
  constexpr void insert(Feature f) noexcept { bits_ |= bit(f); }
  constexpr void erase(Feature f) noexcept { bits_ &= ~bit(f); }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::uint32_t bits() const noexcept { return bits_; }

  // Comma-separated names in canonical feature order, e.g. "hour,clicks".
  std::string to_string() const;
  // Throws ConfigError on unknown names or an empty list.
  static FeatureSet parse(std::string_view list);

  friend constexpr bool operator==(FeatureSet, FeatureSet) = default;

 private:
  constexpr explicit FeatureSet(std::uint32_t bits) : bits_(bits) {}
  static constexpr std::uint32_t bit(Feature f) { return 1u << static_cast<unsigned>(f); }
  std::uint32_t bits_ = (1u << kFeatureCount) - 1;
};

inline constexpr int kMaxBinCap = 0xFFFF;

struct FeatureConfig {
  FeatureSet enabled = FeatureSet::all();
  int click_cap = 10;     // final click-count bin means ">= click_cap"
  int duration_cap = 30;  // minutes; final bin means ">= duration_cap"

  // Throws ConfigError.
  void validate() const;
  // Stable textual form, persisted with models and hashed for checksums.
  std::string canonical() const;
  std::uint64_t checksum() const;

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

// Binned feature tuple for one (session, item) instance.
struct FeatureVector {
  int hour_of_day = 0;    // 0-23
  int day_of_month = 1;   // 1-31
  int day_of_week = 0;    // 0 = Sunday
  int month_of_year = 1;  // 1-12
  int item_click_count = 1;
  int duration_bin = 0;

  int value(Feature f) const noexcept;
  void set(Feature f, int v) noexcept;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct Instance {
  SessionId session_id = 0;
  ItemId item_id = 0;
  int click_count = 0;  // uncapped clicks on the item in the session
  FeatureVector features;
  Label label = Label::NonBuy;

  friend bool operator==(const Instance&, const Instance&) = default;
};

// First-to-last click span; 0 for a single click.
double session_duration_minutes(const Session& session) noexcept;

// Bins applied to raw values.
int bin_click_count(int clicks, const FeatureConfig& cfg) noexcept;
int bin_duration(double minutes, const FeatureConfig& cfg) noexcept;

// One instance per distinct clicked item, in order of first click. Calendar
// and duration features are session-level and come from the first click.
std::vector<Instance> extract_instances(const Session& session, const FeatureConfig& cfg);

// Packed, injective encoding of the enabled features of a binned vector.
// Disabled features encode as zero. The layout is part of the model file
// format and must not change.
struct FeatureKey {
  std::uint64_t value = 0;

  friend auto operator<=>(const FeatureKey&, const FeatureKey&) = default;
};

FeatureKey feature_key(const FeatureVector& fv, FeatureSet enabled = FeatureSet::all()) noexcept;
FeatureVector decode_feature_key(FeatureKey key) noexcept;

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data) noexcept;

}  // namespace clickbuy

template <>
struct std::hash<clickbuy::FeatureKey> {
  std::size_t operator()(clickbuy::FeatureKey k) const noexcept {
    // splitmix64 finaliser; packed keys cluster in the low bits.
    std::uint64_t z = k.value + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<std::size_t>(z ^ (z >> 31));
  }
};
