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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "clickbuy/pipeline.hpp"

namespace clickbuy {

// 2x2 table of predicted vs actual.
struct Confusion {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
  // Percentages; 0 when the denominator is empty.
  double tp_rate() const noexcept;
  double fp_rate() const noexcept;

  friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct EvalReport {
  double score = 0.0;  // challenge score
  Confusion session;   // session predicted as buy vs session had a buy
  Confusion item;      // over every clicked (session, item) pair
  // Bought but never clicked in their session: no predictor can reach them,
  // so they are reported here and left out of the item-level table.
  std::uint64_t unreachable_positives = 0;
  std::size_t n_test_sessions = 0;
  std::size_t n_buy_sessions = 0;

  double tp_rate_session() const noexcept { return session.tp_rate(); }
  double fp_rate_session() const noexcept { return session.fp_rate(); }
  double tp_rate_item() const noexcept { return item.tp_rate(); }
  double fp_rate_item() const noexcept { return item.fp_rate(); }

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

// `preds` and `truth` must cover exactly the same session ids (DataError
// listing the missing ids otherwise). Order does not matter.
EvalReport confusion(std::span<const SessionPrediction> preds, std::span<const Session> truth);

/// Challenge score over the test set S with buy sessions S_b. Each session
/// predicted as buy adds |S_b|/|S| + jaccard(predicted, bought) when it really
/// had a buy and subtracts |S_b|/|S| otherwise. Sessions absent from `preds`
/// or predicted empty contribute nothing. A prediction for a session outside
/// S is a DataError.
double recsys_score(std::span<const SessionPrediction> preds, std::span<const Session> truth);

// Adds empty predictions for truth sessions missing from `preds`, e.g. when
// `preds` was read from a solution file that omits non-buy sessions.
std::vector<SessionPrediction> complete_predictions(std::span<const SessionPrediction> preds,
                                                    std::span<const Session> truth);

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)

  friend bool operator==(const MetricSummary&, const MetricSummary&) = default;
};

struct AggregateReport {
  MetricSummary score;
  MetricSummary tp_rate_session;
  MetricSummary fp_rate_session;
  MetricSummary tp_rate_item;
  MetricSummary fp_rate_item;

  friend bool operator==(const AggregateReport&, const AggregateReport&) = default;
};

AggregateReport aggregate(std::span<const EvalReport> reports);

struct FoldReport {
  std::size_t fold = 0;
  std::size_t train_sessions = 0;
  std::size_t test_sessions = 0;
  EvalReport report;

  friend bool operator==(const FoldReport&, const FoldReport&) = default;
};

struct CvResult {
  std::vector<FoldReport> folds;
  AggregateReport aggregate;
};

// Fold index for each of n items after a seeded shuffle. Folds are
// contiguous runs of the shuffled order, so sizes differ by at most one.
std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t k, std::uint64_t seed);

// Each fold is scored by a bundle trained on the other k - 1 folds.
CvResult kfold(std::span<const Session> sessions, std::size_t k, std::uint64_t seed,
               const PipelineConfig& config, unsigned workers = 1);

struct HoldoutSplit {
  std::vector<Session> train;  // ascending session id
  std::vector<Session> test;   // ascending session id
  double test_buy_rate = 0.0;  // fraction of test sessions with a buy
};

// round(test_fraction * n) sessions go to the test side.
HoldoutSplit holdout_split(std::span<const Session> sessions, double test_fraction,
                           std::uint64_t seed);

struct SweepCell {
  double t1 = 0.0;
  double t2 = 0.0;
  std::vector<EvalReport> folds;
  AggregateReport aggregate;
};

// One cross-validated aggregate per (t1, t2), t1-major. Each fold is trained
// once; thresholds only change the filtering of cached ratios and scores.
std::vector<SweepCell> threshold_sweep(std::span<const Session> sessions,
                                       std::span<const double> t1_grid,
                                       std::span<const double> t2_grid, std::size_t k,
                                       std::uint64_t seed, const PipelineConfig& config,
                                       unsigned workers = 1);

void write_report_csv(std::ostream& out, const EvalReport& report);
void write_cv_csv(std::ostream& out, const CvResult& result);
void write_sweep_csv(std::ostream& out, std::span<const SweepCell> cells);
void print_summary(std::ostream& out, const EvalReport& report);
void print_summary(std::ostream& out, const AggregateReport& aggregate);

}  // namespace clickbuy
