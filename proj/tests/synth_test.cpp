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
#include <map>
#include <sstream>

#include "clickbuy/error.hpp"
#include "clickbuy/likelihood.hpp"
#include "clickbuy/synth.hpp"
#include "test_support.hpp"

namespace clickbuy {
namespace {

std::string files_of(const SynthData& d) {
  std::ostringstream out;
  write_clicks_csv(out, d.clicks);
  out << "--\n";
  write_buys_csv(out, d.buys);
  out << "--\n";
  write_manifest_csv(out, d);
  return out.str();
}

SynthConfig small(std::uint64_t seed) {
  SynthConfig c;
  c.seed = seed;
  c.n_sessions = 3000;
  c.n_items = 80;
  return c;
}

TEST(Synth, DeterministicUnderSeed) {
  EXPECT_EQ(files_of(generate(small(4))), files_of(generate(small(4))));
  EXPECT_NE(files_of(generate(small(4))), files_of(generate(small(5))));
  EXPECT_EQ(files_of(separable_fixture(2)), files_of(separable_fixture(2)));
}

TEST(Synth, RoundTripsThroughIngest) {
  const SynthData d = generate(small(6));
  std::ostringstream c, b;
  write_clicks_csv(c, d.clicks);
  write_buys_csv(b, d.buys);
  std::istringstream ci(c.str()), bi(b.str());
  const auto clicks = parse_clicks(ci);
  const auto buys = parse_buys(bi);
  EXPECT_TRUE(clicks.rejects.empty());
  EXPECT_TRUE(buys.rejects.empty());
  EXPECT_EQ(clicks.events, d.clicks);
  EXPECT_EQ(buys.events, d.buys);
  const SessionSet set = assemble_sessions(clicks.events, buys.events);
  EXPECT_EQ(set.diagnostics.orphan_buys, 0u);
  EXPECT_EQ(set.sessions.size(), 3000u);
}

TEST(Synth, ManifestMatchesData) {
  const SynthData d = generate(small(7));
  const auto sessions = assemble_sessions(d.clicks, d.buys).sessions;
  std::size_t buy_sessions = 0;
  for (const Session& s : sessions) buy_sessions += s.is_buy() ? 1 : 0;
  EXPECT_EQ(buy_sessions, d.buy_sessions);
  std::map<std::pair<SessionId, ItemId>, bool> bought;
  for (const Session& s : sessions) {
    for (const Instance& i : extract_instances(s, {})) {
      bought[{i.session_id, i.item_id}] = i.label == Label::Buy;
    }
  }
  ASSERT_EQ(d.instances.size(), bought.size());
  for (const PlantedInstance& p : d.instances) {
    EXPECT_EQ(bought.at({p.session_id, p.item_id}), p.bought);
    EXPECT_GE(p.buy_probability, 0.0);
    EXPECT_LE(p.buy_probability, 1.0);
  }
  std::uint64_t clicks = 0;
  for (const PlantedItem& it : d.items) clicks += it.clicks;
  EXPECT_EQ(clicks, d.clicks.size());
}

TEST(Synth, InfeasibleConfigRejected) {
  SynthConfig c;
  c.n_items = 0;
  EXPECT_THROW(generate(c), ConfigError);
  c = {};
  c.buy_session_fraction = 1.0;
  EXPECT_THROW(generate(c), ConfigError);
  c = {};
  c.item_popularity = {0.2, 1.5};
  EXPECT_THROW(generate(c), ConfigError);
  c = {};
  c.day_of_week_odds.fill(0.0);
  EXPECT_THROW(generate(c), ConfigError);
}

TEST(Synth, PlantedProbabilitiesWithinTwoSigma) {
  SynthConfig c = small(8);
  c.n_sessions = 20000;
  const SynthData d = generate(c);
  double expected = 0.0, variance = 0.0, observed = 0.0;
  for (const PlantedInstance& p : d.instances) {
    expected += p.buy_probability;
    variance += p.buy_probability * (1.0 - p.buy_probability);
    observed += p.bought ? 1.0 : 0.0;
  }
  EXPECT_LE(std::abs(observed - expected), 2.0 * std::sqrt(variance));
}

TEST(Synth, FeatureEffectsVisible) {
  // Sunday buy odds are planted at twice Thursday's.
  SynthConfig c = small(9);
  c.n_sessions = 20000;
  const SynthData d = generate(c);
  std::array<double, 7> buys{}, total{};
  for (const Session& s : assemble_sessions(d.clicks, d.buys).sessions) {
    const int dow = to_civil(s.clicks.front().timestamp).weekday;
    total[dow] += 1;
    buys[dow] += s.is_buy() ? 1 : 0;
  }
  EXPECT_GT(buys[0] / total[0], buys[4] / total[4]);
}

TEST(Separable, DisjointKeysAndRatios) {
  for (std::uint64_t seed : {0u, 1u, 2u, 3u}) {
    const SynthData d = separable_fixture(seed);
    const auto sessions = assemble_sessions(d.clicks, d.buys).sessions;
    EXPECT_LE(sessions.size(), 200u);
    std::vector<Instance> inst;
    for (const Session& s : sessions) {
      for (const Instance& i : extract_instances(s, {})) inst.push_back(i);
    }
    ModelSpec zero;
    zero.smoothing_alpha = 0;
    const LikelihoodModel m0 = fit(inst, zero);
    const LikelihoodModel m1 = fit(inst, {});
    double min_buy = INFINITY, max_nonbuy = 0;
    for (const Instance& i : inst) {
      if (i.label == Label::Buy) {
        EXPECT_TRUE(std::isinf(m0.ratio(i.features).value));
        min_buy = std::min(min_buy, m1.ratio(i.features).value);
      } else {
        EXPECT_EQ(m0.ratio(i.features).value, 0.0);
        max_nonbuy = std::max(max_nonbuy, m1.ratio(i.features).value);
      }
    }
    EXPECT_GT(min_buy, 1.0);
    EXPECT_LT(max_nonbuy, 1.0);
    const auto selected = step1_filter(m0, inst, 1.0);
    std::size_t buys = 0;
    for (const Instance& i : inst) buys += i.label == Label::Buy ? 1 : 0;
    EXPECT_EQ(selected.size(), buys);
    for (const Instance& i : selected) EXPECT_EQ(i.label, Label::Buy);
  }
}

}  // namespace
}  // namespace clickbuy
