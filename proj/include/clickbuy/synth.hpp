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
#include <iosfwd>
#include <vector>

#include "clickbuy/ingest.hpp"

namespace clickbuy {

/// Planted generative model.
///
/// Every session is first labelled Buy with probability buy_session_fraction.
/// Its calendar position is then drawn with weights multiplied by the
/// per-feature buy odds (Buy sessions) or uniformly (NonBuy sessions), so each
/// factor acts multiplicatively on the buy odds of its feature value. Buy
/// sessions are longer and slower on average.
///
/// Item-level buys: each Buy session gets one anchor buy on an instance drawn
/// with weight n * click_count_odds[n], so every Buy session really buys.
/// Item i then receives b_i ~ Binomial(c_i, p*_i) buy events in total (never
/// fewer than its anchors), spread over its Buy-session instances with the same
/// weights. Hence b_i / c_i estimates the planted popularity p*_i.
struct SynthConfig {
  std::uint64_t seed = 1;
  std::size_t n_sessions = 10'000;
  std::size_t n_items = 500;
  // Planted popularity per item; when empty each p*_i is uniform in
  // [popularity_min, popularity_max].
  std::vector<double> item_popularity;
  double popularity_min = 0.01;
  double popularity_max = 0.1;
  double item_zipf = 1.0;  // click share of the item with rank r is proportional to r^-zipf
  double buy_session_fraction = 0.05;

  std::array<double, 7> day_of_week_odds = {1.4, 1.0, 1.0, 1.0, 0.7, 1.0, 1.2};  // Sunday first
  std::array<double, 31> day_of_month_odds = {
      1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.5, 1.0, 1.0, 1.5, 1.5, 1.0, 1.0,
      1.0, 1.0, 1.0, 1.0, 1.5, 0.8, 0.8, 0.8, 0.8, 0.8, 0.8, 0.8, 0.8, 0.8, 0.8};
  std::array<double, 12> month_odds = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0,
                                       1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  std::array<double, 24> hour_odds = {0.6, 0.6, 0.6, 0.6, 0.6, 0.6, 0.8, 0.8, 1.0, 1.0, 1.0, 1.0,
                                      1.0, 1.0, 1.0, 1.0, 1.0, 1.2, 1.3, 1.3, 1.3, 1.2, 1.0, 0.8};
  // Indexed by min(n, size) - 1 for an instance with n clicks.
  std::vector<double> click_count_odds = {1.0};

  double mean_clicks_nonbuy = 3.0;
  double mean_clicks_buy = 6.0;
  std::size_t max_session_clicks = 200;
  double revisit_probability = 0.35;
  double mean_gap_seconds_nonbuy = 60.0;
  double mean_gap_seconds_buy = 150.0;
  double max_gap_seconds = 600.0;

  Timestamp start{1396310400000};  // 2014-04-01T00:00:00Z
  int days = 183;

  // Throws ConfigError for infeasible settings.
  void validate() const;
};

struct PlantedInstance {
  SessionId session_id = 0;
  ItemId item_id = 0;
  int clicks = 0;
  double buy_probability = 0.0;  // conditional on the realised item totals
  bool bought = false;
};

struct PlantedItem {
  ItemId item_id = 0;
  double popularity = 0.0;  // p*_i
  std::uint64_t clicks = 0;
  std::uint64_t buys = 0;
};

struct SynthData {
  std::vector<ClickEvent> clicks;  // by session, time-ordered
  std::vector<BuyEvent> buys;
  std::vector<PlantedInstance> instances;
  std::vector<PlantedItem> items;
  std::size_t buy_sessions = 0;
};

SynthData generate(const SynthConfig& config);

/// Small data set (200 sessions, 40 with a buy) whose Buy instances always
/// have 3 clicks on the bought item while NonBuy instances have 1 or 2, all
/// sessions lasting two minutes and starting in one of four hourly slots. Buy
/// and NonBuy instances therefore never share a feature key.
SynthData separable_fixture(std::uint64_t seed);

// `kind,session_id,item_id,clicks,planted,observed`: instance rows carry the
// planted buy probability and the 0/1 outcome, item rows carry p*_i and b_i.
void write_manifest_csv(std::ostream& out, const SynthData& data);

}  // namespace clickbuy
