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

#include "clickbuy/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <ostream>
#include <unordered_map>

#include "clickbuy/error.hpp"
#include "clickbuy/parallel.hpp"
#include "clickbuy/random.hpp"

namespace clickbuy {

namespace {

double percent(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

std::string id_list(const std::vector<SessionId>& ids) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(ids.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) out += ',';
    out += std::to_string(ids[i]);
  }
  if (ids.size() > shown) out += ",... (" + std::to_string(ids.size()) + " total)";
  return out;
}

std::unordered_map<SessionId, const SessionPrediction*> index_predictions(
    std::span<const SessionPrediction> preds) {
  std::unordered_map<SessionId, const SessionPrediction*> index;
  index.reserve(preds.size());
  for (const auto& p : preds) {
    if (!index.emplace(p.session_id, &p).second) {
      throw DataError("duplicate prediction for session " + std::to_string(p.session_id));
    }
  }
  return index;
}

double jaccard(const std::vector<ItemId>& a, const std::vector<ItemId>& b) {
  std::size_t inter = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++inter;
      ++i;
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

MetricSummary summarize(std::span<const EvalReport> reports, double (*metric)(const EvalReport&)) {
  MetricSummary s;
  if (reports.empty()) return s;
  double sum = 0.0;
  for (const auto& r : reports) sum += metric(r);
  s.mean = sum / static_cast<double>(reports.size());
  if (reports.size() > 1) {
    double sq = 0.0;
    for (const auto& r : reports) sq += (metric(r) - s.mean) * (metric(r) - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(reports.size() - 1));
  }
  return s;
}

void check_k(std::size_t n, std::size_t k) {
  if (k < 2) throw ConfigError("k must be >= 2");
  if (k > n) {
    throw DataError("k (" + std::to_string(k) + ") exceeds the number of sessions (" +
                    std::to_string(n) + ")");
  }
}

struct FoldSplit {
  std::vector<Session> train;
  std::vector<Session> test;
};

std::vector<FoldSplit> split_folds(std::span<const Session> sessions, std::size_t k,
                                   std::uint64_t seed) {
  const auto folds = fold_assignment(sessions.size(), k, seed);
  std::vector<FoldSplit> out(k);
  for (std::size_t f = 0; f < k; ++f) {
    for (std::size_t i = 0; i < sessions.size(); ++i) {
      (folds[i] == f ? out[f].test : out[f].train).push_back(sessions[i]);
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

constexpr const char* kReportColumns =
    "score,tp_rate_session,fp_rate_session,tp_rate_item,fp_rate_item,"
    "session_tp,session_fp,session_tn,session_fn,item_tp,item_fp,item_tn,item_fn,"
    "unreachable_positives,n_test_sessions,n_buy_sessions";

void write_report_fields(std::ostream& out, const EvalReport& r) {
  out << fmt(r.score) << ',' << fmt(r.tp_rate_session()) << ',' << fmt(r.fp_rate_session()) << ','
      << fmt(r.tp_rate_item()) << ',' << fmt(r.fp_rate_item()) << ',' << r.session.tp << ','
      << r.session.fp << ',' << r.session.tn << ',' << r.session.fn << ',' << r.item.tp << ','
      << r.item.fp << ',' << r.item.tn << ',' << r.item.fn << ',' << r.unreachable_positives << ','
      << r.n_test_sessions << ',' << r.n_buy_sessions;
}

// Aggregate rows share the fold CSV's columns; count columns stay empty.
void write_aggregate_rows(std::ostream& out, const AggregateReport& a) {
  const auto row = [&](const char* name, double MetricSummary::*field) {
    out << name << ",,," << fmt(a.score.*field) << ',' << fmt(a.tp_rate_session.*field)
        << ',' << fmt(a.fp_rate_session.*field) << ',' << fmt(a.tp_rate_item.*field) << ','
        << fmt(a.fp_rate_item.*field) << ",,,,,,,,,,,\n";
  };
  row("mean", &MetricSummary::mean);
  row("stddev", &MetricSummary::stddev);
}

}  // namespace

double Confusion::tp_rate() const noexcept { return percent(tp, tp + fn); }
double Confusion::fp_rate() const noexcept { return percent(fp, fp + tn); }

double recsys_score(std::span<const SessionPrediction> preds, std::span<const Session> truth) {
  if (truth.empty()) {
    if (!preds.empty()) throw DataError("predictions given for an empty test set");
    return 0.0;
  }
  std::unordered_map<SessionId, const Session*> sessions;
  sessions.reserve(truth.size());
  std::size_t buy_sessions = 0;
  for (const Session& s : truth) {
    sessions.emplace(s.session_id, &s);
    if (s.is_buy()) ++buy_sessions;
  }
  const double buy_share = static_cast<double>(buy_sessions) / static_cast<double>(truth.size());

  double score = 0.0;
  index_predictions(preds);  // rejects duplicates
  for (const SessionPrediction& p : preds) {
    auto it = sessions.find(p.session_id);
    if (it == sessions.end()) {
      throw DataError("prediction for unknown session " + std::to_string(p.session_id));
    }
    if (!p.session_is_buy()) continue;
    const Session& s = *it->second;
    if (s.is_buy()) {
      score += buy_share + jaccard(p.predicted_items, s.bought_items);
    } else {
      score -= buy_share;
    }
  }
  return score;
}

EvalReport confusion(std::span<const SessionPrediction> preds, std::span<const Session> truth) {
  const auto index = index_predictions(preds);

  std::vector<SessionId> missing;
  std::unordered_map<SessionId, bool> truth_ids;
  truth_ids.reserve(truth.size());
  for (const Session& s : truth) {
    truth_ids.emplace(s.session_id, true);
    if (!index.contains(s.session_id)) missing.push_back(s.session_id);
  }
  if (!missing.empty()) throw DataError("no prediction for sessions: " + id_list(missing));
  for (const auto& p : preds) {
    if (!truth_ids.contains(p.session_id)) missing.push_back(p.session_id);
  }
  if (!missing.empty()) throw DataError("no ground truth for sessions: " + id_list(missing));

  EvalReport r;
  r.n_test_sessions = truth.size();
  std::vector<ItemId> clicked;
  for (const Session& s : truth) {
    const SessionPrediction& p = *index.at(s.session_id);
    if (s.is_buy()) ++r.n_buy_sessions;
    if (p.session_is_buy()) {
      ++(s.is_buy() ? r.session.tp : r.session.fp);
    } else {
      ++(s.is_buy() ? r.session.fn : r.session.tn);
    }

    clicked.clear();
    for (const ClickEvent& c : s.clicks) clicked.push_back(c.item_id);
    std::sort(clicked.begin(), clicked.end());
    clicked.erase(std::unique(clicked.begin(), clicked.end()), clicked.end());
    for (const ItemId item : clicked) {
      const bool predicted =
          std::binary_search(p.predicted_items.begin(), p.predicted_items.end(), item);
      const bool actual = s.bought(item);
      if (predicted) {
        ++(actual ? r.item.tp : r.item.fp);
      } else {
        ++(actual ? r.item.fn : r.item.tn);
      }
    }
    for (const ItemId item : s.bought_items) {
      if (!std::binary_search(clicked.begin(), clicked.end(), item)) ++r.unreachable_positives;
    }
  }
  r.score = recsys_score(preds, truth);
  return r;
}

std::vector<SessionPrediction> complete_predictions(std::span<const SessionPrediction> preds,
                                                    std::span<const Session> truth) {
  std::vector<SessionPrediction> out(preds.begin(), preds.end());
  const auto index = index_predictions(preds);
  for (const Session& s : truth) {
    if (!index.contains(s.session_id)) out.push_back({s.session_id, {}});
  }
  return out;
}

AggregateReport aggregate(std::span<const EvalReport> reports) {
  AggregateReport a;
  a.score = summarize(reports, [](const EvalReport& r) { return r.score; });
  a.tp_rate_session = summarize(reports, [](const EvalReport& r) { return r.tp_rate_session(); });
  a.fp_rate_session = summarize(reports, [](const EvalReport& r) { return r.fp_rate_session(); });
  a.tp_rate_item = summarize(reports, [](const EvalReport& r) { return r.tp_rate_item(); });
  a.fp_rate_item = summarize(reports, [](const EvalReport& r) { return r.fp_rate_item(); });
  return a;
}

std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t k, std::uint64_t seed) {
  check_k(n, k);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::size_t> fold(n);
  for (std::size_t f = 0; f < k; ++f) {
    for (std::size_t j = n * f / k; j < n * (f + 1) / k; ++j) fold[order[j]] = f;
  }
  return fold;
}

CvResult kfold(std::span<const Session> sessions, std::size_t k, std::uint64_t seed,
               const PipelineConfig& config, unsigned workers) {
  config.validate();
  const auto splits = split_folds(sessions, k, seed);
  CvResult result;
  result.folds.resize(k);
  parallel_for(k, workers, [&](std::size_t f) {
    const FoldSplit& split = splits[f];
    const ModelBundle bundle = train(split.train, config);
    const auto preds = predict_batch(bundle, split.test);
    result.folds[f] = FoldReport{f, split.train.size(), split.test.size(),
                                 confusion(preds, split.test)};
  });
  std::vector<EvalReport> reports;
  for (const auto& f : result.folds) reports.push_back(f.report);
  result.aggregate = aggregate(reports);
  return result;
}

HoldoutSplit holdout_split(std::span<const Session> sessions, double test_fraction,
                           std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test fraction must be in (0, 1)");
  }
  std::vector<std::size_t> order(sessions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  const auto n_test = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(sessions.size())));
  std::vector<bool> in_test(sessions.size(), false);
  for (std::size_t j = 0; j < n_test; ++j) in_test[order[j]] = true;

  HoldoutSplit out;
  std::size_t test_buys = 0;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    if (in_test[i]) {
      out.test.push_back(sessions[i]);
      if (sessions[i].is_buy()) ++test_buys;
    } else {
      out.train.push_back(sessions[i]);
    }
  }
  auto by_id = [](const Session& a, const Session& b) { return a.session_id < b.session_id; };
  std::sort(out.train.begin(), out.train.end(), by_id);
  std::sort(out.test.begin(), out.test.end(), by_id);
  out.test_buy_rate =
      out.test.empty() ? 0.0 : static_cast<double>(test_buys) / static_cast<double>(out.test.size());
  return out;
}

std::vector<SweepCell> threshold_sweep(std::span<const Session> sessions,
                                       std::span<const double> t1_grid,
                                       std::span<const double> t2_grid, std::size_t k,
                                       std::uint64_t seed, const PipelineConfig& config,
                                       unsigned workers) {
  if (t1_grid.empty() || t2_grid.empty()) throw ConfigError("threshold grids must be non-empty");
  for (double t1 : t1_grid) Thresholds{t1, 0.0}.validate();
  for (double t2 : t2_grid) Thresholds{0.0, t2}.validate();
  config.validate();
  const auto splits = split_folds(sessions, k, seed);

  std::vector<SweepCell> cells;
  for (double t1 : t1_grid) {
    for (double t2 : t2_grid) {
      SweepCell cell;
      cell.t1 = t1;
      cell.t2 = t2;
      cell.folds.resize(k);
      cells.push_back(std::move(cell));
    }
  }

  struct Candidate {
    ItemId item;
    double ratio;
    std::optional<double> weighted;
  };

  parallel_for(k, workers, [&](std::size_t f) {
    const FoldSplit& split = splits[f];
    const ModelBundle bundle = train(split.train, config);
    std::vector<std::vector<Candidate>> candidates(split.test.size());
    for (std::size_t i = 0; i < split.test.size(); ++i) {
      for (const Instance& inst : extract_instances(split.test[i], bundle.feature_config())) {
        candidates[i].push_back({inst.item_id, bundle.likelihood.ratio(inst.features).value,
                                 bundle.popularity.weighted(inst.item_id, inst.click_count)});
      }
    }
    std::vector<SessionPrediction> preds(split.test.size());
    for (SweepCell& cell : cells) {
      for (std::size_t i = 0; i < split.test.size(); ++i) {
        SessionPrediction& p = preds[i];
        p.session_id = split.test[i].session_id;
        p.predicted_items.clear();
        for (const Candidate& c : candidates[i]) {
          if (!(c.ratio > cell.t1)) continue;
          if (c.weighted && !(*c.weighted > cell.t2)) continue;
          p.predicted_items.push_back(c.item);
        }
        std::sort(p.predicted_items.begin(), p.predicted_items.end());
      }
      cell.folds[f] = confusion(preds, split.test);
    }
  });

  for (SweepCell& cell : cells) cell.aggregate = aggregate(cell.folds);
  return cells;
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
  out << kReportColumns << '\n';
  write_report_fields(out, report);
  out << '\n';
}

void write_cv_csv(std::ostream& out, const CvResult& result) {
  out << "fold,train_sessions,test_sessions," << kReportColumns << '\n';
  for (const FoldReport& f : result.folds) {
    out << f.fold << ',' << f.train_sessions << ',' << f.test_sessions << ',';
    write_report_fields(out, f.report);
    out << '\n';
  }
  write_aggregate_rows(out, result.aggregate);
}

void write_sweep_csv(std::ostream& out, std::span<const SweepCell> cells) {
  out << "t1,t2,score_mean,score_stddev,tp_rate_session_mean,tp_rate_session_stddev,"
         "fp_rate_session_mean,fp_rate_session_stddev,tp_rate_item_mean,tp_rate_item_stddev,"
         "fp_rate_item_mean,fp_rate_item_stddev\n";
  for (const SweepCell& c : cells) {
    const AggregateReport& a = c.aggregate;
    out << fmt(c.t1) << ',' << fmt(c.t2);
    for (const MetricSummary* m : {&a.score, &a.tp_rate_session, &a.fp_rate_session,
                                   &a.tp_rate_item, &a.fp_rate_item}) {
      out << ',' << fmt(m->mean) << ',' << fmt(m->stddev);
    }
    out << '\n';
  }
}

void print_summary(std::ostream& out, const EvalReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "sessions: %zu (buy: %zu)\nscore: %.4f\nsession TP: %.2f%%  FP: %.2f%%\n"
                "item TP: %.2f%%  FP: %.2f%%  unreachable positives: %llu\n",
                r.n_test_sessions, r.n_buy_sessions, r.score, r.tp_rate_session(),
                r.fp_rate_session(), r.tp_rate_item(), r.fp_rate_item(),
                static_cast<unsigned long long>(r.unreachable_positives));
  out << buf;
}

void print_summary(std::ostream& out, const AggregateReport& a) {
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "score: %.4f +- %.4f\nsession TP: %.2f%% +- %.2f  FP: %.2f%% +- %.2f\n"
                "item TP: %.2f%% +- %.2f  FP: %.2f%% +- %.2f\n",
                a.score.mean, a.score.stddev, a.tp_rate_session.mean, a.tp_rate_session.stddev,
                a.fp_rate_session.mean, a.fp_rate_session.stddev, a.tp_rate_item.mean,
                a.tp_rate_item.stddev, a.fp_rate_item.mean, a.fp_rate_item.stddev);
  out << buf;
}

}  // namespace clickbuy
