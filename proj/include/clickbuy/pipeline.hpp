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
#include <vector>

#include "clickbuy/likelihood.hpp"
#include "clickbuy/popularity.hpp"

namespace clickbuy {

inline constexpr std::uint32_t kBundleFormatVersion = 1;

struct PipelineConfig {
  ModelSpec model;
  Thresholds thresholds;
  BuyCounting counting = BuyCounting::Events;
  CategoryBounds categories;

  void validate() const;
};

// Everything needed to score sessions: both filters and their thresholds.
struct ModelBundle {
  LikelihoodModel likelihood;
  PopularityTable popularity;
  Thresholds thresholds;
  CategoryBounds categories;
  std::uint32_t format_version = kBundleFormatVersion;

  const FeatureConfig& feature_config() const noexcept { return likelihood.spec().features; }

  friend bool operator==(const ModelBundle&, const ModelBundle&) = default;
};

struct SessionPrediction {
  SessionId session_id = 0;
  std::vector<ItemId> predicted_items;  // sorted, distinct

  bool session_is_buy() const noexcept { return !predicted_items.empty(); }

  friend bool operator==(const SessionPrediction&, const SessionPrediction&) = default;
  friend auto operator<=>(const SessionPrediction&, const SessionPrediction&) = default;
};

// Fits the likelihood model on the sessions' instances and builds the
// popularity table from the same sessions' events. `workers` partial fits
// are merged; 0 means one per hardware thread.
ModelBundle train(std::span<const Session> sessions, const PipelineConfig& config,
                  unsigned workers = 1);

// Returns a copy of `bundle` scored with different thresholds.
ModelBundle with_thresholds(ModelBundle bundle, const Thresholds& thresholds);

// extract -> step-1 -> step-2. Labels on the session are ignored.
SessionPrediction predict_session(const ModelBundle& bundle, const Session& session);

// Output order matches input order.
std::vector<SessionPrediction> predict_batch(const ModelBundle& bundle,
                                             std::span<const Session> sessions,
                                             unsigned workers = 1);

// One line per predicted-buy session: `session_id;item,item,...`.
// Sessions with no predicted items are omitted.
void write_solution_line(std::ostream& out, const SessionPrediction& prediction);
void write_solution(std::ostream& out, std::span<const SessionPrediction> predictions);
// Throws FormatError with the offending line number.
std::vector<SessionPrediction> read_solution(std::istream& in);

}  // namespace clickbuy
