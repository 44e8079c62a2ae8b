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

#include "clickbuy/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "clickbuy/error.hpp"
#include "clickbuy/random.hpp"

namespace clickbuy {

namespace {

constexpr ItemId kItemBase = 214'000'000;
constexpr std::int64_t kMsPerDay = 86'400'000;

// Sampling from fixed non-negative weights by inverse CDF.
class WeightedIndex {
 public:
  explicit WeightedIndex(const std::vector<double>& weights) : cdf_(weights.size()) {
    std::partial_sum(weights.begin(), weights.end(), cdf_.begin());
    if (cdf_.empty() || !(cdf_.back() > 0.0)) throw ConfigError("weights must have positive mass");
  }

  std::size_t operator()(Rng& rng) const {
    const double u = rng.uniform() * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

bool all_non_negative(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return v >= 0.0 && std::isfinite(v); });
}

// 1 + Geometric, mean `mean`, capped.
std::size_t session_length(Rng& rng, double mean, std::size_t cap) {
  if (mean <= 1.0) return 1;
  const double p = 1.0 / mean;
  const double draws = std::floor(std::log1p(-rng.uniform()) / std::log1p(-p));
  return std::min<std::size_t>(cap, 1 + static_cast<std::size_t>(draws));
}

struct SessionPlan {
  SessionId id = 0;
  bool buy = false;
  std::vector<std::pair<ItemId, int>> instances;  // (item index, clicks), first-click order
  std::vector<double> weights;                    // Buy sessions only
  std::vector<std::uint64_t> events;              // buy events per instance
  std::size_t first_click = 0;                    // offset into SynthData::clicks
  std::size_t n_clicks = 0;
};

}  // namespace

void SynthConfig::validate() const {
  if (n_sessions == 0) throw ConfigError("synth: n_sessions must be positive");
  if (n_items == 0 && item_popularity.empty()) throw ConfigError("synth: no items");
  if (!(buy_session_fraction > 0.0 && buy_session_fraction < 1.0)) {
    throw ConfigError("synth: buy_session_fraction must be in (0, 1)");
  }
  for (double p : item_popularity) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("synth: item popularity must be in [0, 1]");
  }
  if (!(popularity_min >= 0.0 && popularity_min <= popularity_max && popularity_max <= 1.0)) {
    throw ConfigError("synth: need 0 <= popularity_min <= popularity_max <= 1");
  }
  if (!(item_zipf >= 0.0)) throw ConfigError("synth: item_zipf must be >= 0");
  if (!all_non_negative(day_of_week_odds) || !all_non_negative(day_of_month_odds) ||
      !all_non_negative(month_odds) || !all_non_negative(hour_odds) ||
      !all_non_negative(click_count_odds) || click_count_odds.empty()) {
    throw ConfigError("synth: odds factors must be finite and >= 0");
  }
  if (std::all_of(click_count_odds.begin(), click_count_odds.end(), [](double v) { return v == 0; })) {
    throw ConfigError("synth: click_count_odds needs a positive entry");
  }
  if (!(mean_clicks_nonbuy >= 1.0 && mean_clicks_buy >= 1.0) || max_session_clicks == 0) {
    throw ConfigError("synth: mean session lengths must be >= 1");
  }
  if (!(revisit_probability >= 0.0 && revisit_probability <= 1.0)) {
    throw ConfigError("synth: revisit_probability must be in [0, 1]");
  }
  if (!(mean_gap_seconds_nonbuy >= 0.0 && mean_gap_seconds_buy >= 0.0 && max_gap_seconds >= 0.0)) {
    throw ConfigError("synth: click gaps must be >= 0");
  }
  if (days < 1) throw ConfigError("synth: days must be >= 1");
}

SynthData generate(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  SynthData out;

  const std::size_t n_items = cfg.item_popularity.empty() ? cfg.n_items : cfg.item_popularity.size();
  std::vector<double> popularity(n_items);
  for (std::size_t i = 0; i < n_items; ++i) {
    popularity[i] = cfg.item_popularity.empty()
                        ? cfg.popularity_min + (cfg.popularity_max - cfg.popularity_min) * rng.uniform()
                        : cfg.item_popularity[i];
  }
  std::vector<double> item_weights(n_items);
  for (std::size_t i = 0; i < n_items; ++i) {
    item_weights[i] = std::pow(static_cast<double>(i + 1), -cfg.item_zipf);
  }
  const WeightedIndex pick_item(item_weights);

  // Calendar weights: NonBuy uniform, Buy tilted by the odds factors.
  std::vector<double> day_buy(static_cast<std::size_t>(cfg.days));
  std::vector<double> day_any(day_buy.size(), 1.0);
  for (int d = 0; d < cfg.days; ++d) {
    const CivilTime c = to_civil(Timestamp{cfg.start.ms + d * kMsPerDay});
    day_buy[d] = cfg.day_of_week_odds[c.weekday] * cfg.day_of_month_odds[c.day - 1] *
                 cfg.month_odds[c.month - 1];
  }
  const WeightedIndex pick_day_buy(day_buy);
  const WeightedIndex pick_day_any(day_any);
  const WeightedIndex pick_hour_buy(std::vector<double>(cfg.hour_odds.begin(), cfg.hour_odds.end()));
  const WeightedIndex pick_hour_any(std::vector<double>(24, 1.0));

  auto click_odds = [&](int n) {
    const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(n), cfg.click_count_odds.size()) - 1;
    return static_cast<double>(n) * cfg.click_count_odds[idx];
  };

  std::vector<SessionPlan> plans(cfg.n_sessions);
  std::vector<std::uint64_t> item_clicks(n_items, 0);
  for (std::size_t s = 0; s < cfg.n_sessions; ++s) {
    SessionPlan& plan = plans[s];
    plan.id = s + 1;
    plan.buy = rng.bernoulli(cfg.buy_session_fraction);
    if (plan.buy) ++out.buy_sessions;

    const std::size_t day = plan.buy ? pick_day_buy(rng) : pick_day_any(rng);
    const std::size_t hour = plan.buy ? pick_hour_buy(rng) : pick_hour_any(rng);
    std::int64_t t = cfg.start.ms + static_cast<std::int64_t>(day) * kMsPerDay +
                     static_cast<std::int64_t>(hour) * 3'600'000 +
                     static_cast<std::int64_t>(rng.below(3'600'000));

    const std::size_t length = session_length(
        rng, plan.buy ? cfg.mean_clicks_buy : cfg.mean_clicks_nonbuy, cfg.max_session_clicks);
    const double mean_gap = plan.buy ? cfg.mean_gap_seconds_buy : cfg.mean_gap_seconds_nonbuy;
    plan.first_click = out.clicks.size();
    plan.n_clicks = length;
    for (std::size_t k = 0; k < length; ++k) {
      if (k > 0) {
        const double gap = std::min(cfg.max_gap_seconds, rng.exponential(mean_gap));
        t += static_cast<std::int64_t>(std::llround(gap * 1000.0));
      }
      std::size_t item;
      if (k > 0 && rng.bernoulli(cfg.revisit_probability)) {
        item = plan.instances[rng.below(plan.instances.size())].first;
      } else {
        item = pick_item(rng);
      }
      auto it = std::find_if(plan.instances.begin(), plan.instances.end(),
                             [&](const auto& p) { return p.first == item; });
      if (it == plan.instances.end()) {
        plan.instances.emplace_back(item, 1);
      } else {
        ++it->second;
      }
      ++item_clicks[item];
      out.clicks.push_back({plan.id, Timestamp{t}, kItemBase + item + 1, "0"});
    }
    if (plan.buy) {
      for (const auto& [item, n] : plan.instances) plan.weights.push_back(click_odds(n));
    }
    plan.events.assign(plan.instances.size(), 0);
  }

  // Anchor buys: one per Buy session.
  std::vector<std::uint64_t> anchors(n_items, 0);
  std::vector<std::size_t> anchor_of(cfg.n_sessions, 0);
  for (SessionPlan& plan : plans) {
    if (!plan.buy) continue;
    const std::size_t j = WeightedIndex(plan.weights)(rng);
    anchor_of[plan.id - 1] = j;
    ++plan.events[j];
    ++anchors[plan.instances[j].first];
  }

  // Per-item Buy-session instances and their weights.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> slots(n_items);  // (session, instance)
  std::vector<std::vector<double>> slot_weights(n_items);
  for (std::size_t s = 0; s < plans.size(); ++s) {
    if (!plans[s].buy) continue;
    for (std::size_t j = 0; j < plans[s].instances.size(); ++j) {
      const std::size_t item = plans[s].instances[j].first;
      slots[item].emplace_back(s, j);
      slot_weights[item].push_back(plans[s].weights[j]);
    }
  }

  std::vector<std::uint64_t> remaining(n_items, 0);
  std::vector<double> total_weight(n_items, 0.0);
  out.items.resize(n_items);
  for (std::size_t i = 0; i < n_items; ++i) {
    std::uint64_t draw = 0;
    for (std::uint64_t c = 0; c < item_clicks[i]; ++c) draw += rng.bernoulli(popularity[i]) ? 1 : 0;
    remaining[i] = draw > anchors[i] ? draw - anchors[i] : 0;
    if (slots[i].empty()) remaining[i] = 0;
    total_weight[i] = std::accumulate(slot_weights[i].begin(), slot_weights[i].end(), 0.0);
    if (remaining[i] > 0) {
      const WeightedIndex pick_slot(slot_weights[i]);
      for (std::uint64_t e = 0; e < remaining[i]; ++e) {
        const auto [s, j] = slots[i][pick_slot(rng)];
        ++plans[s].events[j];
      }
    }
    out.items[i] = {kItemBase + i + 1, popularity[i], item_clicks[i], anchors[i] + remaining[i]};
  }

  for (const SessionPlan& plan : plans) {
    const Timestamp last = out.clicks[plan.first_click + plan.n_clicks - 1].timestamp;
    const double session_weight =
        plan.buy ? std::accumulate(plan.weights.begin(), plan.weights.end(), 0.0) : 0.0;
    std::int64_t t = last.ms;
    for (std::size_t j = 0; j < plan.instances.size(); ++j) {
      const auto [item, n] = plan.instances[j];
      PlantedInstance inst{plan.id, kItemBase + item + 1, n, 0.0, plan.events[j] > 0};
      if (plan.buy) {
        const double w = plan.weights[j];
        const double p_anchor = w / session_weight;
        const double p_rest =
            remaining[item] == 0
                ? 0.0
                : 1.0 - std::pow(1.0 - w / total_weight[item], static_cast<double>(remaining[item]));
        inst.buy_probability = p_anchor + (1.0 - p_anchor) * p_rest;
      }
      out.instances.push_back(inst);
      for (std::uint64_t e = 0; e < plan.events[j]; ++e) {
        t += 1000 + static_cast<std::int64_t>(rng.below(60'000));
        out.buys.push_back({plan.id, Timestamp{t}, kItemBase + item + 1, 500 + rng.below(20'000),
                            1 + rng.below(3)});
      }
    }
  }
  return out;
}

SynthData separable_fixture(std::uint64_t seed) {
  constexpr std::size_t kSessions = 200;
  constexpr std::size_t kBuySessions = 40;
  constexpr std::size_t kItems = 30;
  // Sun 2014-04-06 18:00, Wed 2014-04-09 10:00, Sun 2014-04-13 14:00, Mon 2014-04-21 20:00.
  const std::array<Timestamp, 4> slots = {
      to_timestamp({2014, 4, 6, 18, 0, 0, 0, 0}), to_timestamp({2014, 4, 9, 10, 0, 0, 0, 0}),
      to_timestamp({2014, 4, 13, 14, 0, 0, 0, 0}), to_timestamp({2014, 4, 21, 20, 0, 0, 0, 0})};

  Rng rng(seed);
  std::vector<bool> is_buy(kSessions, false);
  std::vector<std::size_t> order(kSessions);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));
  for (std::size_t j = 0; j < kBuySessions; ++j) is_buy[order[j]] = true;

  SynthData out;
  out.buy_sessions = kBuySessions;
  std::vector<std::uint64_t> clicks(kItems, 0), buys(kItems, 0);
  auto item_id = [](std::size_t i) { return kItemBase + i + 1; };
  for (std::size_t s = 0; s < kSessions; ++s) {
    const SessionId id = s + 1;
    // Balanced slot use; minute offsets stay inside the slot's hour.
    const std::int64_t t0 = slots[(s + seed) % slots.size()].ms +
                            static_cast<std::int64_t>(rng.below(40)) * 60'000;
    const std::size_t a = rng.below(kItems);
    std::size_t b = rng.below(kItems - 1);
    if (b >= a) ++b;

    // (item, offset seconds); every session spans exactly 120 s.
    std::vector<std::pair<std::size_t, int>> pattern;
    if (is_buy[s]) {
      pattern = {{a, 0}, {b, 30}, {a, 60}, {a, 120}};
    } else {
      switch (rng.below(3)) {
        case 0: pattern = {{a, 0}, {a, 120}}; break;
        case 1: pattern = {{a, 0}, {b, 120}}; break;
        default: pattern = {{a, 0}, {b, 60}, {a, 120}}; break;
      }
    }
    for (const auto& [item, offset] : pattern) {
      out.clicks.push_back({id, Timestamp{t0 + offset * 1000}, item_id(item), "0"});
      ++clicks[item];
    }
    std::vector<std::pair<std::size_t, int>> counts;
    for (const auto& [item, offset] : pattern) {
      auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& p) { return p.first == item; });
      if (it == counts.end()) {
        counts.emplace_back(item, 1);
      } else {
        ++it->second;
      }
    }
    for (const auto& [item, n] : counts) {
      const bool bought = is_buy[s] && item == a;
      out.instances.push_back({id, item_id(item), n, bought ? 1.0 : 0.0, bought});
    }
    if (is_buy[s]) {
      out.buys.push_back({id, Timestamp{t0 + 150'000}, item_id(a), 1000 + rng.below(5000), 1});
      ++buys[a];
    }
  }
  for (std::size_t i = 0; i < kItems; ++i) {
    const double p = clicks[i] == 0 ? 0.0 : static_cast<double>(buys[i]) / static_cast<double>(clicks[i]);
    out.items.push_back({item_id(i), p, clicks[i], buys[i]});
  }
  return out;
}

void write_manifest_csv(std::ostream& out, const SynthData& data) {
  out << "kind,session_id,item_id,clicks,planted,observed\n";
  char buf[40];
  for (const PlantedInstance& inst : data.instances) {
    std::snprintf(buf, sizeof buf, "%.10g", inst.buy_probability);
    out << "instance," << inst.session_id << ',' << inst.item_id << ',' << inst.clicks << ',' << buf
        << ',' << (inst.bought ? 1 : 0) << '\n';
  }
  for (const PlantedItem& item : data.items) {
    std::snprintf(buf, sizeof buf, "%.10g", item.popularity);
    out << "item,0," << item.item_id << ',' << item.clicks << ',' << buf << ',' << item.buys << '\n';
  }
}

}  // namespace clickbuy
