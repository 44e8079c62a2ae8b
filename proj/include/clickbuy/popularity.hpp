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
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "clickbuy/features.hpp"
#include "clickbuy/ingest.hpp"

namespace clickbuy {

// What one unit of `b` means.
enum class BuyCounting : std::uint8_t {
  Events,    // buy records
  Sessions,  // distinct sessions that bought the item
  Quantity,  // summed quantity field
};

std::string_view buy_counting_name(BuyCounting counting) noexcept;
BuyCounting parse_buy_counting(std::string_view name);

struct ItemPopularity {
  std::uint64_t buys = 0;    // b
  std::uint64_t clicks = 0;  // c, always >= 1 inside a table

  // p = b / c
  double value() const noexcept {
    return static_cast<double>(buys) / static_cast<double>(clicks);
  }

  friend bool operator==(const ItemPopularity&, const ItemPopularity&) = default;
};

enum class PopularityCategory : std::uint8_t { Low, Medium, High };

std::string_view category_name(PopularityCategory category) noexcept;

struct CategoryBounds {
  double low_max = 0.05;
  double medium_max = 0.15;

  // Throws ConfigError unless 0 <= low_max < medium_max.
  void validate() const;

  friend bool operator==(const CategoryBounds&, const CategoryBounds&) = default;
};

// Low if p <= low_max, Medium if p <= medium_max, High otherwise.
// Reporting only; never consulted by the step-2 decision.
PopularityCategory categorize(double p, const CategoryBounds& bounds);

/// Per-item (b, c) counts. Items with c = 0 have no popularity and are absent
/// from lookups; their buy counts are kept aside so that partial tables merge
/// to exactly the whole-data table.
class PopularityTable {
 public:
  explicit PopularityTable(BuyCounting counting = BuyCounting::Events) : counting_(counting) {}

  BuyCounting counting() const noexcept { return counting_; }

  void add_clicks(ItemId item, std::uint64_t n);
  void add_buys(ItemId item, std::uint64_t n);

  // nullptr when the item has no popularity.
  const ItemPopularity* find(ItemId item) const noexcept;
  bool contains(ItemId item) const noexcept { return find(item) != nullptr; }

  // p * n for a known item, nullopt for a cold-start item.
  std::optional<double> weighted(ItemId item, int clicks) const noexcept;

  // Items with a popularity entry.
  std::size_t size() const noexcept;
  // Items that were bought but never clicked.
  std::size_t unclicked_bought_items() const noexcept;

  // Every tracked item, including the unclicked ones (clicks == 0).
  const std::unordered_map<ItemId, ItemPopularity>& raw() const noexcept { return items_; }
  // Entries with clicks >= 1, ascending by item id.
  std::vector<std::pair<ItemId, ItemPopularity>> entries() const;

  void merge_from(const PopularityTable& other);

  friend bool operator==(const PopularityTable&, const PopularityTable&) = default;

 private:
  BuyCounting counting_;
  std::unordered_map<ItemId, ItemPopularity> items_;
};

PopularityTable build_popularity(std::span<const ClickEvent> clicks, std::span<const BuyEvent> buys,
                                 BuyCounting counting = BuyCounting::Events);
PopularityTable build_popularity(std::span<const Session> sessions,
                                 BuyCounting counting = BuyCounting::Events);

// Throws ConfigError when counting definitions differ.
PopularityTable merge(const PopularityTable& a, const PopularityTable& b);

/// Popularity-based refinement of step-1 output. A known item is kept iff
/// p * n > t2 with n the uncapped in-session click count; items without a
/// popularity entry are kept.
std::vector<Instance> step2_filter(std::span<const Instance> selected, const PopularityTable& table,
                                   double t2);

}  // namespace clickbuy
