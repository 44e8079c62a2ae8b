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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "clickbuy/error.hpp"
#include "clickbuy/eval.hpp"
#include "clickbuy/synth.hpp"
#include "test_support.hpp"

namespace clickbuy {
namespace {

using testing::kSunday;
using testing::make_session;

// Sessions 1..n; the first n_buy of them buy their first item.
std::vector<Session> sessions(std::size_t n, std::size_t n_buy) {
  std::vector<Session> out;
  for (SessionId id = 1; id <= n; ++id) {
    const ItemId a = 100 + id % 7;
    const ItemId b = 200 + id % 5;
    out.push_back(make_session(id, kSunday + static_cast<std::int64_t>(id) * 3'600'000, {a, b},
                               id <= n_buy ? std::vector<ItemId>{a} : std::vector<ItemId>{}));
  }
  return out;
}

std::vector<SessionPrediction> predict_ids(const std::vector<Session>& truth,
                                           const std::set<SessionId>& buy) {
  std::vector<SessionPrediction> out;
  for (const Session& s : truth) {
    SessionPrediction p{s.session_id, {}};
    if (buy.count(s.session_id)) p.predicted_items = {s.clicks[0].item_id};
    out.push_back(p);
  }
  return out;
}

std::vector<Session> synth_sessions(std::uint64_t seed, std::size_t n) {
  SynthConfig c;
  c.seed = seed;
  c.n_sessions = n;
  c.n_items = 60;
  c.buy_session_fraction = 0.2;
  const SynthData d = generate(c);
  return assemble_sessions(d.clicks, d.buys).sessions;
}

TEST(Confusion, PerfectPair) {
  const auto truth = sessions(2, 1);
  const EvalReport r = confusion(predict_ids(truth, {1}), truth);
  EXPECT_EQ(r.tp_rate_session(), 100.0);
  EXPECT_EQ(r.fp_rate_session(), 0.0);
  EXPECT_EQ(r.session, (Confusion{1, 0, 1, 0}));
}

TEST(Confusion, AllPredictedBuy) {
  const auto truth = sessions(6, 2);
  const EvalReport r = confusion(predict_ids(truth, {1, 2, 3, 4, 5, 6}), truth);
  EXPECT_EQ(r.tp_rate_session(), 100.0);
  EXPECT_EQ(r.fp_rate_session(), 100.0);
}

TEST(Confusion, RatesArithmetic) {
  const auto truth = sessions(100, 10);
  std::set<SessionId> buy = {1, 2, 3, 4, 5, 6};
  for (SessionId id = 11; id <= 22; ++id) buy.insert(id);
  const EvalReport r = confusion(predict_ids(truth, buy), truth);
  EXPECT_EQ(r.session, (Confusion{6, 12, 78, 4}));
  EXPECT_DOUBLE_EQ(r.tp_rate_session(), 60.0);
  EXPECT_NEAR(r.fp_rate_session(), 13.333333333333334, 1e-12);
  EXPECT_EQ(r.n_test_sessions, 100u);
  EXPECT_EQ(r.n_buy_sessions, 10u);
}

TEST(Confusion, CountsSumToPopulation) {
  std::mt19937_64 rng(51);
  const auto truth = testing::random_sessions(rng, 200, 20, 0.3);
  std::vector<SessionPrediction> preds;
  std::size_t pairs = 0;
  std::uint64_t unreachable = 0;
  for (const Session& s : truth) {
    std::set<ItemId> clicked;
    for (const ClickEvent& c : s.clicks) clicked.insert(c.item_id);
    pairs += clicked.size();
    for (ItemId b : s.bought_items) unreachable += clicked.count(b) ? 0 : 1;
    SessionPrediction p{s.session_id, {}};
    for (ItemId i : clicked) {
      if (rng() % 3 == 0) p.predicted_items.push_back(i);
    }
    preds.push_back(p);
  }
  const EvalReport r = confusion(preds, truth);
  EXPECT_EQ(r.session.total(), truth.size());
  EXPECT_EQ(r.session.tp + r.session.fn, r.n_buy_sessions);
  EXPECT_EQ(r.item.total(), pairs);
  EXPECT_EQ(r.unreachable_positives, unreachable);
}

TEST(Confusion, IdMismatchListsIds) {
  const auto truth = sessions(3, 1);
  auto preds = predict_ids(truth, {});
  preds.pop_back();
  try {
    confusion(preds, truth);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
  }
  preds = predict_ids(truth, {});
  preds.push_back({42, {1}});
  EXPECT_THROW(confusion(preds, truth), DataError);
  EXPECT_EQ(complete_predictions(std::vector<SessionPrediction>{}, truth).size(), 3u);
}

TEST(Score, HandExample) {
  // S = {1,2,3,4}, S_b = {1,2}; session 1 bought {a,b}.
  std::vector<Session> truth = {make_session(1, kSunday, {10, 11}, {10, 11}),
                                make_session(2, kSunday, {12}, {12}), make_session(3, kSunday, {13}),
                                make_session(4, kSunday, {14})};
  const std::vector<SessionPrediction> preds = {{1, {10}}, {3, {13}}};
  EXPECT_DOUBLE_EQ(recsys_score(preds, truth), 0.5);
}

TEST(Score, NothingPredicted) {
  const auto truth = sessions(5, 2);
  EXPECT_EQ(recsys_score(std::vector<SessionPrediction>{}, truth), 0.0);
  EXPECT_EQ(recsys_score(predict_ids(truth, {}), truth), 0.0);
}

TEST(Score, PerfectPredictionClosedForm) {
  const auto truth = sessions(20, 7);
  std::vector<SessionPrediction> preds;
  for (const Session& s : truth) {
    if (s.is_buy()) preds.push_back({s.session_id, s.bought_items});
  }
  const testing::Rational want = testing::Rational(7) * (testing::Rational(7, 20) + 1);
  EXPECT_EQ(testing::brute_score(preds, truth), want);
  EXPECT_NEAR(recsys_score(preds, truth), static_cast<double>(want), 1e-12);
}

TEST(Score, UnknownOrDuplicateSessionIsError) {
  const auto truth = sessions(3, 1);
  EXPECT_THROW(recsys_score(std::vector<SessionPrediction>{{9, {1}}}, truth), DataError);
  EXPECT_THROW(recsys_score(std::vector<SessionPrediction>{{1, {1}}, {1, {2}}}, truth), DataError);
}

TEST(Aggregate, SampleMeanAndStddev) {
  std::vector<EvalReport> r(3);
  r[0].score = 1;
  r[1].score = 2;
  r[2].score = 6;
  const AggregateReport a = aggregate(r);
  EXPECT_DOUBLE_EQ(a.score.mean, 3.0);
  EXPECT_DOUBLE_EQ(a.score.stddev, std::sqrt(7.0));
  EXPECT_EQ(aggregate(std::vector<EvalReport>(1)).score.stddev, 0.0);
}

TEST(Folds, TenSessionsFiveFolds) {
  const auto a = fold_assignment(10, 5, 7);
  std::vector<int> sizes(5);
  for (std::size_t f : a) ++sizes.at(f);
  EXPECT_EQ(sizes, std::vector<int>(5, 2));
  EXPECT_EQ(fold_assignment(10, 5, 7), a);
  EXPECT_THROW(fold_assignment(3, 5, 7), DataError);
  EXPECT_THROW(fold_assignment(10, 1, 7), ConfigError);
}

TEST(Folds, SizesDifferByAtMostOne) {
  for (std::size_t n : {7u, 23u, 101u}) {
    for (std::size_t k : {2u, 3u, 5u}) {
      std::vector<std::size_t> sizes(k);
      for (std::size_t f : fold_assignment(n, k, n * k)) ++sizes[f];
      const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
      EXPECT_LE(*hi - *lo, 1u);
    }
  }
}

TEST(Kfold, PartitionAndDeterminism) {
  const auto s = sessions(10, 10);
  const CvResult a = kfold(s, 5, 3, {});
  ASSERT_EQ(a.folds.size(), 5u);
  std::size_t tested = 0;
  for (const FoldReport& f : a.folds) {
    EXPECT_EQ(f.test_sessions, 2u);
    EXPECT_EQ(f.train_sessions, 8u);
    tested += f.report.n_test_sessions;
  }
  EXPECT_EQ(tested, 10u);
  const CvResult b = kfold(s, 5, 3, {}, 4);
  EXPECT_EQ(a.folds, b.folds);
  EXPECT_EQ(a.aggregate, b.aggregate);
  EXPECT_THROW(kfold(s, 11, 3, {}), DataError);
}

TEST(Holdout, Split) {
  const auto s = sessions(100, 30);
  const HoldoutSplit h = holdout_split(s, 0.25, 5);
  EXPECT_EQ(h.test.size(), 25u);
  EXPECT_EQ(h.train.size(), 75u);
  std::size_t buys = 0;
  for (const Session& x : h.test) buys += x.is_buy() ? 1 : 0;
  EXPECT_EQ(h.test_buy_rate, static_cast<double>(buys) / 25.0);
  const HoldoutSplit again = holdout_split(s, 0.25, 5);
  EXPECT_EQ(again.test, h.test);
  EXPECT_TRUE(std::is_sorted(h.train.begin(), h.train.end(), [](const Session& a, const Session& b) {
    return a.session_id < b.session_id;
  }));
  EXPECT_THROW(holdout_split(s, 0.0, 5), ConfigError);
  EXPECT_THROW(holdout_split(s, 1.0, 5), ConfigError);
}

TEST(Sweep, DegenerateGridIsKfold) {
  const auto s = synth_sessions(61, 600);
  PipelineConfig c;
  c.thresholds = {1.5, 0.2};
  const std::vector<double> t1 = {1.5}, t2 = {0.2};
  const auto cells = threshold_sweep(s, t1, t2, 5, 8, c);
  ASSERT_EQ(cells.size(), 1u);
  const CvResult cv = kfold(s, 5, 8, c);
  for (std::size_t f = 0; f < 5; ++f) EXPECT_EQ(cells[0].folds[f], cv.folds[f].report);
  EXPECT_EQ(cells[0].aggregate, cv.aggregate);
}

TEST(Sweep, EqualsRetrainPerCell) {
  const auto s = synth_sessions(62, 500);
  const std::vector<double> t1 = {0.5, 1.0, 3.0}, t2 = {0.0, 0.1, 0.4};
  const auto cells = threshold_sweep(s, t1, t2, 3, 9, {}, 2);
  ASSERT_EQ(cells.size(), 9u);
  for (const SweepCell& cell : cells) {
    PipelineConfig c;
    c.thresholds = {cell.t1, cell.t2};
    const CvResult cv = kfold(s, 3, 9, c);
    for (std::size_t f = 0; f < 3; ++f) EXPECT_EQ(cell.folds[f], cv.folds[f].report);
  }
  EXPECT_EQ(cells[0].t1, 0.5);
  EXPECT_EQ(cells[1].t2, 0.1);
}

TEST(Sweep, FalsePositivesFallWithT1) {
  const auto s = synth_sessions(63, 800);
  const std::vector<double> t1 = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}, t2 = {0.1};
  const auto cells = threshold_sweep(s, t1, t2, 5, 10, {});
  for (std::size_t i = 1; i < cells.size(); ++i) {
    for (std::size_t f = 0; f < 5; ++f) {
      EXPECT_LE(cells[i].folds[f].session.fp, cells[i - 1].folds[f].session.fp);
    }
    EXPECT_LE(cells[i].aggregate.fp_rate_session.mean, cells[i - 1].aggregate.fp_rate_session.mean);
  }
}

TEST(Reports, CsvShapes) {
  const auto s = synth_sessions(64, 300);
  const CvResult cv = kfold(s, 5, 1, {});
  std::ostringstream out;
  write_cv_csv(out, cv);
  std::istringstream in(out.str());
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  ASSERT_EQ(lines.size(), 8u);
  EXPECT_EQ(lines[0].rfind("fold,train_sessions,test_sessions,score,", 0), 0u);
  EXPECT_EQ(lines[6].rfind("mean,,,", 0), 0u);
  EXPECT_EQ(lines[7].rfind("stddev,,,", 0), 0u);
  auto commas = [](const std::string& l) { return std::count(l.begin(), l.end(), ','); };
  for (const std::string& l : lines) EXPECT_EQ(commas(l), commas(lines[0])) << l;
}

}  // namespace
}  // namespace clickbuy
