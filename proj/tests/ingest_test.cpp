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

#include <sstream>

#include "clickbuy/error.hpp"
#include "clickbuy/ingest.hpp"
#include "test_support.hpp"

namespace clickbuy {
namespace {

using testing::buy;
using testing::click;

TEST(Ingest, ClickLine) {
  std::string reason;
  const auto e = parse_click_line("1,2014-04-07T10:51:09.277Z,214536502,0", reason);
  ASSERT_TRUE(e);
  EXPECT_EQ(e->session_id, 1u);
  EXPECT_EQ(e->timestamp, *parse_timestamp("2014-04-07T10:51:09.277Z"));
  EXPECT_EQ(e->item_id, 214536502u);
  EXPECT_EQ(e->category, "0");
}

TEST(Ingest, CategoryIsOpaque) {
  std::string reason;
  const auto e = parse_click_line("7,2014-04-02T06:38:53.104Z,214662742,S", reason);
  ASSERT_TRUE(e);
  EXPECT_EQ(e->session_id, 7u);
  EXPECT_EQ(e->item_id, 214662742u);
  EXPECT_EQ(e->category, "S");
}

TEST(Ingest, MalformedLinesAreLoggedAndSkipped) {
  std::istringstream in(
      "1,2014-04-07T10:51:09.277Z,214536502,0\n"
      "x,notatime,0,0\n"
      "2,2014-04-07T10:52:09.277Z,214536503,0\r\n"
      "3,2014-04-07T10:52:09.277Z,214536503\n"
      "0,2014-04-07T10:52:09.277Z,214536503,0\n");
  const auto r = parse_clicks(in);
  ASSERT_EQ(r.events.size(), 2u);
  EXPECT_EQ(r.events[1].session_id, 2u);
  EXPECT_EQ(r.events[1].category, "0");
  ASSERT_EQ(r.rejects.size(), 3u);
  EXPECT_EQ(r.rejects[0], (Reject{2, "invalid session_id"}));
  EXPECT_EQ(r.rejects[1], (Reject{4, "expected 4 fields, got 3"}));
  EXPECT_EQ(r.rejects[2], (Reject{5, "session_id must be >= 1"}));
  EXPECT_EQ(r.total_lines, 5u);
}

TEST(Ingest, BuyLine) {
  std::string reason;
  const auto e = parse_buy_line("420374,2014-04-06T18:44:58.314Z,214537888,12462,1", reason);
  ASSERT_TRUE(e);
  EXPECT_EQ(e->session_id, 420374u);
  EXPECT_EQ(e->item_id, 214537888u);
  EXPECT_EQ(e->price, 12462u);
  EXPECT_EQ(e->quantity, 1u);
  EXPECT_EQ(format_timestamp(e->timestamp), "2014-04-06T18:44:58.314Z");
}

TEST(Ingest, EmptyBuyStream) {
  std::istringstream in("");
  const auto r = parse_buys(in);
  EXPECT_TRUE(r.events.empty());
  EXPECT_TRUE(r.rejects.empty());
}

TEST(Ingest, FourFieldBuyLineRejected) {
  std::istringstream in("420374,2014-04-06T18:44:58.314Z,214537888,12462\n");
  const auto r = parse_buys(in);
  EXPECT_TRUE(r.events.empty());
  ASSERT_EQ(r.rejects.size(), 1u);
  EXPECT_EQ(r.rejects[0], (Reject{1, "expected 5 fields, got 4"}));
}

TEST(Ingest, MissingFileIsIoError) {
  EXPECT_THROW(load_clicks("/nonexistent/clicks.csv"), IoError);
}

TEST(Sessions, LabelsFromBuys) {
  const std::vector<ClickEvent> clicks = {click(1, 0, 10), click(2, 5, 20), click(1, 3, 11)};
  const std::vector<BuyEvent> buys = {buy(2, 9, 20)};
  const SessionSet set = assemble_sessions(clicks, buys);
  ASSERT_EQ(set.sessions.size(), 2u);
  EXPECT_EQ(set.sessions[0].session_id, 1u);
  EXPECT_EQ(set.sessions[0].label(), Label::NonBuy);
  EXPECT_EQ(set.sessions[1].label(), Label::Buy);
  EXPECT_EQ(set.sessions[0].clicks.size(), 2u);
}

TEST(Sessions, OrphanBuyDropped) {
  const std::vector<ClickEvent> clicks = {click(1, 0, 10)};
  const std::vector<BuyEvent> buys = {buy(99, 9, 20)};
  const SessionSet set = assemble_sessions(clicks, buys);
  ASSERT_EQ(set.sessions.size(), 1u);
  EXPECT_EQ(set.diagnostics.orphan_buys, 1u);
  EXPECT_EQ(set.diagnostics.orphan_buy_sessions, 1u);
  EXPECT_FALSE(set.sessions[0].is_buy());
}

TEST(Sessions, DuplicateBuyIsOneItem) {
  const std::vector<ClickEvent> clicks = {click(3, 0, 10), click(3, 1, 11)};
  const std::vector<BuyEvent> buys = {buy(3, 5, 10), buy(3, 6, 10)};
  const SessionSet set = assemble_sessions(clicks, buys);
  EXPECT_EQ(set.sessions[0].bought_items, std::vector<ItemId>{10});
  EXPECT_EQ(set.sessions[0].buys.size(), 2u);
}

TEST(Sessions, ClicksSortedStably) {
  const std::vector<ClickEvent> clicks = {click(1, 50, 3), click(1, 10, 1), click(1, 50, 4),
                                          click(1, 10, 2)};
  const SessionSet set = assemble_sessions(clicks, {});
  const auto& c = set.sessions[0].clicks;
  ASSERT_EQ(c.size(), 4u);
  EXPECT_EQ(c[0].item_id, 1u);
  EXPECT_EQ(c[1].item_id, 2u);
  EXPECT_EQ(c[2].item_id, 3u);
  EXPECT_EQ(c[3].item_id, 4u);
}

TEST(Sessions, UnclickedBoughtItemCounted) {
  const std::vector<ClickEvent> clicks = {click(1, 0, 10)};
  const std::vector<BuyEvent> buys = {buy(1, 5, 77)};
  const SessionSet set = assemble_sessions(clicks, buys);
  EXPECT_EQ(set.diagnostics.unclicked_bought_items, 1u);
  EXPECT_TRUE(set.sessions[0].bought(77));
}

TEST(Ingest, WriteParseRoundTrip) {
  std::mt19937_64 rng(3);
  const auto data = testing::random_events(rng, 200, 30, 0.3);
  std::ostringstream c, b;
  write_clicks_csv(c, data.clicks);
  write_buys_csv(b, data.buys);
  std::istringstream ci(c.str()), bi(b.str());
  const auto clicks = parse_clicks(ci);
  const auto buys = parse_buys(bi);
  EXPECT_TRUE(clicks.rejects.empty());
  EXPECT_TRUE(buys.rejects.empty());
  EXPECT_EQ(clicks.events, data.clicks);
  EXPECT_EQ(buys.events, data.buys);
}

TEST(Sessions, AssemblyIgnoresInputOrder) {
  std::mt19937_64 rng(4);
  auto data = testing::random_events(rng, 100, 20, 0.3);
  const SessionSet a = assemble_sessions(data.clicks, data.buys);
  // Shuffle across sessions but keep each session's own events in order.
  std::stable_sort(data.clicks.begin(), data.clicks.end(),
                   [](const ClickEvent& x, const ClickEvent& y) { return x.item_id < y.item_id; });
  std::stable_sort(data.clicks.begin(), data.clicks.end(),
                   [](const ClickEvent& x, const ClickEvent& y) { return x.timestamp < y.timestamp; });
  const SessionSet b = assemble_sessions(data.clicks, data.buys);
  ASSERT_EQ(a.sessions.size(), b.sessions.size());
  for (std::size_t i = 0; i < a.sessions.size(); ++i) {
    EXPECT_EQ(a.sessions[i].session_id, b.sessions[i].session_id);
    EXPECT_EQ(a.sessions[i].bought_items, b.sessions[i].bought_items);
    EXPECT_EQ(a.sessions[i].clicks.size(), b.sessions[i].clicks.size());
  }
}

}  // namespace
}  // namespace clickbuy
