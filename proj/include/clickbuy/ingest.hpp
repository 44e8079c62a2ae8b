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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clickbuy/time.hpp"

namespace clickbuy {

using SessionId = std::uint64_t;
using ItemId = std::uint64_t;

struct ClickEvent {
  SessionId session_id = 0;
  Timestamp timestamp;
  ItemId item_id = 0;
  std::string category;  // opaque, carried but unused by the model

  friend bool operator==(const ClickEvent&, const ClickEvent&) = default;
};

struct BuyEvent {
  SessionId session_id = 0;
  Timestamp timestamp;
  ItemId item_id = 0;
  std::uint64_t price = 0;  // minor currency units
  std::uint64_t quantity = 0;

  friend bool operator==(const BuyEvent&, const BuyEvent&) = default;
};

// A rejected input line. Line numbers are 1-based.
struct Reject {
  std::size_t line_no = 0;
  std::string reason;

  friend bool operator==(const Reject&, const Reject&) = default;
};

template <typename Event>
struct ParseResult {
  std::vector<Event> events;
  std::vector<Reject> rejects;
  std::size_t total_lines = 0;
};

// Single-record parsers. On failure they return nullopt and set `reason`.
std::optional<ClickEvent> parse_click_line(std::string_view line, std::string& reason);
std::optional<BuyEvent> parse_buy_line(std::string_view line, std::string& reason);

// Reads one line at a time from a stream, tracking line numbers and
// stripping a trailing '\r'. Throws IoError if the stream goes bad.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string_view& line);
  std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::istream& in_;
  std::string buffer_;
  std::size_t line_no_ = 0;
};

// CSV `session_id,timestamp,item_id,category`. Malformed lines are collected
// in `rejects`; events + rejects == total_lines.
ParseResult<ClickEvent> parse_clicks(std::istream& in);
// CSV `session_id,timestamp,item_id,price,quantity`.
ParseResult<BuyEvent> parse_buys(std::istream& in);

enum class Label : std::uint8_t { NonBuy, Buy };

struct Session {
  SessionId session_id = 0;
  std::vector<ClickEvent> clicks;    // ascending by (timestamp, input order)
  std::vector<BuyEvent> buys;        // raw buy events, input order
  std::vector<ItemId> bought_items;  // sorted, distinct

  Label label() const noexcept { return bought_items.empty() ? Label::NonBuy : Label::Buy; }
  bool is_buy() const noexcept { return !bought_items.empty(); }
  bool bought(ItemId item) const noexcept;

  friend bool operator==(const Session&, const Session&) = default;
};

struct AssembleDiagnostics {
  std::size_t orphan_buys = 0;          // buy events whose session has no clicks
  std::size_t orphan_buy_sessions = 0;  // distinct such sessions
  std::size_t unclicked_bought_items = 0;  // (session, item) bought but never clicked there

  friend bool operator==(const AssembleDiagnostics&, const AssembleDiagnostics&) = default;
};

struct SessionSet {
  std::vector<Session> sessions;  // ascending session_id
  AssembleDiagnostics diagnostics;
};

SessionSet assemble_sessions(std::span<const ClickEvent> clicks, std::span<const BuyEvent> buys);

// Binary search in a session_id-sorted range.
const Session* find_session(std::span<const Session> sessions, SessionId id) noexcept;

void write_click_line(std::ostream& out, const ClickEvent& click);
void write_buy_line(std::ostream& out, const BuyEvent& buy);
void write_clicks_csv(std::ostream& out, std::span<const ClickEvent> clicks);
void write_buys_csv(std::ostream& out, std::span<const BuyEvent> buys);
// Clicks of every session, session by session.
void write_session_clicks_csv(std::ostream& out, std::span<const Session> sessions);
void write_session_buys_csv(std::ostream& out, std::span<const Session> sessions);
// `line_no,reason` with a header row.
void write_reject_log(std::ostream& out, std::span<const Reject> rejects);

// Convenience loaders for file paths; throw IoError when a file cannot be opened.
ParseResult<ClickEvent> load_clicks(const std::string& path);
ParseResult<BuyEvent> load_buys(const std::string& path);

}  // namespace clickbuy
