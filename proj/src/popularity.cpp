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

#include "clickbuy/popularity.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "clickbuy/error.hpp"

namespace clickbuy {

namespace {

struct SessionItemHash {
  std::size_t operator()(const std::pair<SessionId, ItemId>& p) const noexcept {
    return std::hash<std::uint64_t>{}(p.first * 0x9e3779b97f4a7c15ULL ^ p.second);
  }
};

}  // namespace

std::string_view buy_counting_name(BuyCounting counting) noexcept {
  switch (counting) {
    case BuyCounting::Events: return "events";
    case BuyCounting::Sessions: return "sessions";
    case BuyCounting::Quantity: return "quantity";
  }
  return "events";
}

BuyCounting parse_buy_counting(std::string_view name) {
  if (name == "events") return BuyCounting::Events;
  if (name == "sessions") return BuyCounting::Sessions;
  if (name == "quantity") return BuyCounting::Quantity;
  throw ConfigError("unknown buy counting: " + std::string(name));
}

std::string_view category_name(PopularityCategory category) noexcept {
  switch (category) {
    case PopularityCategory::Low: return "low";
    case PopularityCategory::Medium: return "medium";
    case PopularityCategory::High: return "high";
  }
  return "low";
}

void CategoryBounds::validate() const {
  if (!(low_max >= 0.0) || !(medium_max > low_max) || !std::isfinite(medium_max)) {
    throw ConfigError("popularity category bounds must satisfy 0 <= low < medium");
  }
}

PopularityCategory categorize(double p, const CategoryBounds& bounds) {
  bounds.validate();
  if (p <= bounds.low_max) return PopularityCategory::Low;
  if (p <= bounds.medium_max) return PopularityCategory::Medium;
  return PopularityCategory::High;
}

void PopularityTable::add_clicks(ItemId item, std::uint64_t n) { items_[item].clicks += n; }

void PopularityTable::add_buys(ItemId item, std::uint64_t n) { items_[item].buys += n; }

const ItemPopularity* PopularityTable::find(ItemId item) const noexcept {
  auto it = items_.find(item);
  if (it == items_.end() || it->second.clicks == 0) return nullptr;
  return &it->second;
}

std::optional<double> PopularityTable::weighted(ItemId item, int clicks) const noexcept {
  const ItemPopularity* pop = find(item);
  if (!pop) return std::nullopt;
  return pop->value() * static_cast<double>(clicks);
}

std::size_t PopularityTable::size() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(items_.begin(), items_.end(), [](const auto& kv) { return kv.second.clicks > 0; }));
}

std::size_t PopularityTable::unclicked_bought_items() const noexcept {
  return items_.size() - size();
}

std::vector<std::pair<ItemId, ItemPopularity>> PopularityTable::entries() const {
  std::vector<std::pair<ItemId, ItemPopularity>> out;
  out.reserve(items_.size());
  for (const auto& kv : items_) {
    if (kv.second.clicks > 0) out.push_back(kv);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

void PopularityTable::merge_from(const PopularityTable& other) {
  if (other.counting_ != counting_) {
    throw ConfigError("cannot merge popularity tables with different buy counting");
  }
  for (const auto& [item, pop] : other.items_) {
    ItemPopularity& mine = items_[item];
    mine.buys += pop.buys;
    mine.clicks += pop.clicks;
  }
}

PopularityTable build_popularity(std::span<const ClickEvent> clicks, std::span<const BuyEvent> buys,
                                 BuyCounting counting) {
  PopularityTable table(counting);
  for (const ClickEvent& c : clicks) table.add_clicks(c.item_id, 1);
  switch (counting) {
    case BuyCounting::Events:
      for (const BuyEvent& b : buys) table.add_buys(b.item_id, 1);
      break;
    case BuyCounting::Quantity:
      for (const BuyEvent& b : buys) table.add_buys(b.item_id, b.quantity);
      break;
    case BuyCounting::Sessions: {
      std::unordered_set<std::pair<SessionId, ItemId>, SessionItemHash> seen;
      for (const BuyEvent& b : buys) {
        if (seen.emplace(b.session_id, b.item_id).second) table.add_buys(b.item_id, 1);
      }
      break;
    }
  }
  return table;
}

PopularityTable build_popularity(std::span<const Session> sessions, BuyCounting counting) {
  PopularityTable table(counting);
  for (const Session& s : sessions) {
    for (const ClickEvent& c : s.clicks) table.add_clicks(c.item_id, 1);
    switch (counting) {
      case BuyCounting::Events:
        for (const BuyEvent& b : s.buys) table.add_buys(b.item_id, 1);
        break;
      case BuyCounting::Quantity:
        for (const BuyEvent& b : s.buys) table.add_buys(b.item_id, b.quantity);
        break;
      case BuyCounting::Sessions:
        for (const ItemId item : s.bought_items) table.add_buys(item, 1);
        break;
    }
  }
  return table;
}

PopularityTable merge(const PopularityTable& a, const PopularityTable& b) {
  PopularityTable out = a;
  out.merge_from(b);
  return out;
}

std::vector<Instance> step2_filter(std::span<const Instance> selected, const PopularityTable& table,
                                   double t2) {
  std::vector<Instance> out;
  for (const Instance& inst : selected) {
    const auto score = table.weighted(inst.item_id, inst.click_count);
    // Cold-start items (no popularity) pass through as buys.
    if (!score || *score > t2) out.push_back(inst);
  }
  return out;
}

}  // namespace clickbuy
