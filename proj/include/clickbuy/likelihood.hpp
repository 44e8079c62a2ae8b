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
#include <cstdint>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "clickbuy/features.hpp"

namespace clickbuy {

enum class LikelihoodMode : std::uint8_t {
  Joint,        // one count table over the full binned feature tuple
  Independent,  // product of per-feature marginal ratios
};

std::string_view mode_name(LikelihoodMode mode) noexcept;
LikelihoodMode parse_mode(std::string_view name);

struct ModelSpec {
  LikelihoodMode mode = LikelihoodMode::Joint;
  double smoothing_alpha = 1.0;
  FeatureConfig features;

  void validate() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Step-1 and step-2 cut-offs. Both must be non-negative and not NaN.
struct Thresholds {
  double t1 = 1.0;
  double t2 = 0.1;

  void validate() const;

  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

struct LikelihoodRatio {
  double value = 1.0;   // +infinity when only the buy side has mass (alpha = 0)
  bool unseen = false;  // no training mass on either side for this key
};

using CountTable = std::unordered_map<FeatureKey, std::uint64_t>;

/// Count-based class-conditional model over binned feature keys.
///
/// P(x | Buy) is estimated as (B(x) + a) / (T_b + a K) and P(x | NonBuy) as
/// (N(x) + a) / (T_n + a K), where K is the number of distinct keys seen in
/// training plus one reserved key for everything unseen. In Independent mode
/// the same estimator is applied to each enabled feature's marginal table and
/// the per-feature ratios are multiplied.
///
/// Counts are exact integers; ratios are evaluated in double precision.
/// A model is immutable once built and may be shared across threads.
class LikelihoodModel {
 public:
  explicit LikelihoodModel(ModelSpec spec = {});
  LikelihoodModel(ModelSpec spec, CountTable buy_counts, CountTable nonbuy_counts);

  const ModelSpec& spec() const noexcept { return spec_; }
  const CountTable& buy_counts() const noexcept { return buy_; }
  const CountTable& nonbuy_counts() const noexcept { return nonbuy_; }
  std::uint64_t total_buy() const noexcept { return total_buy_; }
  std::uint64_t total_nonbuy() const noexcept { return total_nonbuy_; }
  // Distinct keys observed in either class (K - 1).
  std::size_t distinct_keys() const noexcept { return distinct_keys_; }

  std::uint64_t buy_count(FeatureKey key) const noexcept;
  std::uint64_t nonbuy_count(FeatureKey key) const noexcept;
  std::uint64_t marginal_buy(Feature f, int value) const noexcept;
  std::uint64_t marginal_nonbuy(Feature f, int value) const noexcept;
  // Distinct observed values of one feature (K_f - 1).
  std::size_t distinct_values(Feature f) const noexcept;

  FeatureKey key_of(const FeatureVector& fv) const noexcept {
    return feature_key(fv, spec_.features.enabled);
  }

  LikelihoodRatio ratio(const FeatureVector& fv) const noexcept;

  friend bool operator==(const LikelihoodModel& a, const LikelihoodModel& b) {
    return a.spec_ == b.spec_ && a.buy_ == b.buy_ && a.nonbuy_ == b.nonbuy_;
  }

 private:
  using Marginal = std::unordered_map<int, std::uint64_t>;

  void rebuild();
  LikelihoodRatio joint_ratio(FeatureKey key) const noexcept;
  LikelihoodRatio independent_ratio(const FeatureVector& fv) const noexcept;

  ModelSpec spec_;
  CountTable buy_;
  CountTable nonbuy_;
  std::uint64_t total_buy_ = 0;
  std::uint64_t total_nonbuy_ = 0;
  std::size_t distinct_keys_ = 0;
  std::array<Marginal, kFeatureCount> marginal_buy_;
  std::array<Marginal, kFeatureCount> marginal_nonbuy_;
  std::array<std::size_t, kFeatureCount> distinct_values_{};
};

// Smoothed ratio for one cell of a count table:
//   ((b + a) / (total_b + a k)) / ((n + a) / (total_n + a k))
// with the alpha = 0 conventions: n = 0 < b gives +infinity, b = n = 0 gives
// an unseen ratio of 1.
LikelihoodRatio smoothed_ratio(std::uint64_t b, std::uint64_t total_b, std::uint64_t n,
                               std::uint64_t total_n, double alpha, std::size_t k) noexcept;

// Counts labelled instances without checking class coverage. Used for
// partial fits that are merged later.
LikelihoodModel accumulate(std::span<const Instance> instances, const ModelSpec& spec);

// Throws DataError when either class is missing.
LikelihoodModel fit(std::span<const Instance> instances, const ModelSpec& spec);

// Sums counts; every model must share the same spec (ConfigError otherwise).
LikelihoodModel merge(std::span<const LikelihoodModel> models);
LikelihoodModel merge(const LikelihoodModel& a, const LikelihoodModel& b);

// Instances whose likelihood ratio exceeds t1, input order preserved.
std::vector<Instance> step1_filter(const LikelihoodModel& model, std::span<const Instance> instances,
                                   double t1);

}  // namespace clickbuy
