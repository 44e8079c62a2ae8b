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

#include "clickbuy/likelihood.hpp"

#include <cmath>
#include <limits>
#include <unordered_set>

#include "clickbuy/error.hpp"

namespace clickbuy {

std::string_view mode_name(LikelihoodMode mode) noexcept {
  return mode == LikelihoodMode::Joint ? "joint" : "independent";
}

LikelihoodMode parse_mode(std::string_view name) {
  if (name == "joint") return LikelihoodMode::Joint;
  if (name == "independent") return LikelihoodMode::Independent;
  throw ConfigError("unknown likelihood mode: " + std::string(name));
}

void ModelSpec::validate() const {
  if (!(smoothing_alpha >= 0.0) || !std::isfinite(smoothing_alpha)) {
    throw ConfigError("smoothing alpha must be finite and >= 0");
  }
  features.validate();
}

void Thresholds::validate() const {
  if (!(t1 >= 0.0)) throw ConfigError("t1 must be >= 0");
  if (!(t2 >= 0.0)) throw ConfigError("t2 must be >= 0");
}

LikelihoodRatio smoothed_ratio(std::uint64_t b, std::uint64_t total_b, std::uint64_t n,
                               std::uint64_t total_n, double alpha, std::size_t k) noexcept {
  if (alpha == 0.0) {
    if (b == 0 && n == 0) return {1.0, true};
    if (n == 0) return {std::numeric_limits<double>::infinity(), false};
    if (b == 0) return {0.0, false};
    // (b / T_b) / (n / T_n) as a single division.
    return {(static_cast<double>(b) * static_cast<double>(total_n)) /
                (static_cast<double>(total_b) * static_cast<double>(n)),
            false};
  }
  const double ak = alpha * static_cast<double>(k);
  const double num = (static_cast<double>(b) + alpha) * (static_cast<double>(total_n) + ak);
  const double den = (static_cast<double>(total_b) + ak) * (static_cast<double>(n) + alpha);
  return {num / den, b == 0 && n == 0};
}

LikelihoodModel::LikelihoodModel(ModelSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  rebuild();
}

LikelihoodModel::LikelihoodModel(ModelSpec spec, CountTable buy_counts, CountTable nonbuy_counts)
    : spec_(std::move(spec)), buy_(std::move(buy_counts)), nonbuy_(std::move(nonbuy_counts)) {
  spec_.validate();
  std::erase_if(buy_, [](const auto& kv) { return kv.second == 0; });
  std::erase_if(nonbuy_, [](const auto& kv) { return kv.second == 0; });
  rebuild();
}

void LikelihoodModel::rebuild() {
  total_buy_ = 0;
  total_nonbuy_ = 0;
  for (auto& m : marginal_buy_) m.clear();
  for (auto& m : marginal_nonbuy_) m.clear();

  std::array<std::unordered_set<int>, kFeatureCount> seen;
  const FeatureSet enabled = spec_.features.enabled;
  auto add = [&](const CountTable& table, std::array<Marginal, kFeatureCount>& marginals,
                 std::uint64_t& total) {
    for (const auto& [key, count] : table) {
      total += count;
      const FeatureVector fv = decode_feature_key(key);
      for (std::size_t i = 0; i < kFeatureCount; ++i) {
        if (!enabled.contains(kAllFeatures[i])) continue;
        const int v = fv.value(kAllFeatures[i]);
        marginals[i][v] += count;
        seen[i].insert(v);
      }
    }
  };
  add(buy_, marginal_buy_, total_buy_);
  add(nonbuy_, marginal_nonbuy_, total_nonbuy_);

  distinct_keys_ = buy_.size();
  for (const auto& kv : nonbuy_) {
    if (!buy_.contains(kv.first)) ++distinct_keys_;
  }
  for (std::size_t i = 0; i < kFeatureCount; ++i) distinct_values_[i] = seen[i].size();
}

std::uint64_t LikelihoodModel::buy_count(FeatureKey key) const noexcept {
  auto it = buy_.find(key);
  return it == buy_.end() ? 0 : it->second;
}

std::uint64_t LikelihoodModel::nonbuy_count(FeatureKey key) const noexcept {
  auto it = nonbuy_.find(key);
  return it == nonbuy_.end() ? 0 : it->second;
}

std::uint64_t LikelihoodModel::marginal_buy(Feature f, int value) const noexcept {
  const auto& m = marginal_buy_[static_cast<std::size_t>(f)];
  auto it = m.find(value);
  return it == m.end() ? 0 : it->second;
}

std::uint64_t LikelihoodModel::marginal_nonbuy(Feature f, int value) const noexcept {
  const auto& m = marginal_nonbuy_[static_cast<std::size_t>(f)];
  auto it = m.find(value);
  return it == m.end() ? 0 : it->second;
}

std::size_t LikelihoodModel::distinct_values(Feature f) const noexcept {
  return distinct_values_[static_cast<std::size_t>(f)];
}

LikelihoodRatio LikelihoodModel::ratio(const FeatureVector& fv) const noexcept {
  if (spec_.mode == LikelihoodMode::Joint) return joint_ratio(key_of(fv));
  return independent_ratio(fv);
}

LikelihoodRatio LikelihoodModel::joint_ratio(FeatureKey key) const noexcept {
  return smoothed_ratio(buy_count(key), total_buy_, nonbuy_count(key), total_nonbuy_,
                        spec_.smoothing_alpha, distinct_keys_ + 1);
}

LikelihoodRatio LikelihoodModel::independent_ratio(const FeatureVector& fv) const noexcept {
  double product = 1.0;
  bool any_zero = false;
  bool any_inf = false;
  bool all_unseen = true;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const Feature f = kAllFeatures[i];
    if (!spec_.features.enabled.contains(f)) continue;
    const int v = fv.value(f);
    const LikelihoodRatio r =
        smoothed_ratio(marginal_buy(f, v), total_buy_, marginal_nonbuy(f, v), total_nonbuy_,
                       spec_.smoothing_alpha, distinct_values_[i] + 1);
    all_unseen = all_unseen && r.unseen;
    if (r.value == 0.0) {
      any_zero = true;
    } else if (std::isinf(r.value)) {
      any_inf = true;
    } else {
      product *= r.value;
    }
  }
  // Contradicting evidence (one feature only ever seen as Buy, another only
  // as NonBuy) has no defined product; it is scored like an unseen key.
  if (any_zero && any_inf) return {1.0, true};
  if (any_zero) return {0.0, false};
  if (any_inf) return {std::numeric_limits<double>::infinity(), false};
  return {product, all_unseen};
}

LikelihoodModel accumulate(std::span<const Instance> instances, const ModelSpec& spec) {
  CountTable buy;
  CountTable nonbuy;
  const FeatureSet enabled = spec.features.enabled;
  for (const Instance& inst : instances) {
    const FeatureKey key = feature_key(inst.features, enabled);
    ++(inst.label == Label::Buy ? buy : nonbuy)[key];
  }
  return LikelihoodModel(spec, std::move(buy), std::move(nonbuy));
}

LikelihoodModel fit(std::span<const Instance> instances, const ModelSpec& spec) {
  LikelihoodModel model = accumulate(instances, spec);
  if (model.total_buy() == 0 && model.total_nonbuy() == 0) {
    throw DataError("cannot fit likelihood model: no training instances");
  }
  if (model.total_buy() == 0) throw DataError("cannot fit likelihood model: no Buy instances");
  if (model.total_nonbuy() == 0) {
    throw DataError("cannot fit likelihood model: no NonBuy instances");
  }
  return model;
}

LikelihoodModel merge(std::span<const LikelihoodModel> models) {
  if (models.empty()) throw ConfigError("merge requires at least one model");
  const ModelSpec& spec = models.front().spec();
  CountTable buy;
  CountTable nonbuy;
  for (const LikelihoodModel& m : models) {
    if (!(m.spec() == spec)) {
      throw ConfigError("cannot merge likelihood models with different configurations");
    }
    for (const auto& [k, c] : m.buy_counts()) buy[k] += c;
    for (const auto& [k, c] : m.nonbuy_counts()) nonbuy[k] += c;
  }
  return LikelihoodModel(spec, std::move(buy), std::move(nonbuy));
}

LikelihoodModel merge(const LikelihoodModel& a, const LikelihoodModel& b) {
  const std::array<LikelihoodModel, 2> pair = {a, b};
  return merge(pair);
}

std::vector<Instance> step1_filter(const LikelihoodModel& model, std::span<const Instance> instances,
                                   double t1) {
  std::vector<Instance> out;
  for (const Instance& inst : instances) {
    if (model.ratio(inst.features).value > t1) out.push_back(inst);
  }
  return out;
}

}  // namespace clickbuy
