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

#include "clickbuy/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "clickbuy/error.hpp"

namespace clickbuy {

namespace {

// Splits on ',' into at most N fields; returns the field count found.
template <std::size_t N>
std::size_t split_fields(std::string_view line, std::array<std::string_view, N>& fields) {
  std::size_t count = 0;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::string_view field =
        line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (count < N) fields[count] = field;
    ++count;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return count;
}

bool parse_uint(std::string_view text, std::uint64_t& out) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

bool parse_id(std::string_view text, std::uint64_t& out, const char* what, std::string& reason) {
  if (!parse_uint(text, out)) {
    reason = std::string("invalid ") + what;
    return false;
  }
  if (out == 0) {
    reason = std::string(what) + " must be >= 1";
    return false;
  }
  return true;
}

bool parse_time(std::string_view text, Timestamp& out, std::string& reason) {
  const auto ts = parse_timestamp(text);
  if (!ts) {
    reason = "invalid timestamp";
    return false;
  }
  out = *ts;
  return true;
}

template <typename Event, typename LineParser>
ParseResult<Event> parse_stream(std::istream& in, LineParser parse_line) {
  ParseResult<Event> result;
  LineReader reader(in);
  std::string_view line;
  std::string reason;
  while (reader.next(line)) {
    if (auto event = parse_line(line, reason)) {
      result.events.push_back(std::move(*event));
    } else {
      result.rejects.push_back({reader.line_no(), reason});
    }
  }
  result.total_lines = reader.line_no();
  return result;
}

}  // namespace

std::optional<ClickEvent> parse_click_line(std::string_view line, std::string& reason) {
  std::array<std::string_view, 4> f;
  const std::size_t n = split_fields(line, f);
  if (n != 4) {
    reason = "expected 4 fields, got " + std::to_string(n);
    return std::nullopt;
  }
  ClickEvent e;
  if (!parse_id(f[0], e.session_id, "session_id", reason) ||
      !parse_time(f[1], e.timestamp, reason) || !parse_id(f[2], e.item_id, "item_id", reason)) {
    return std::nullopt;
  }
  e.category.assign(f[3]);
  return e;
}

std::optional<BuyEvent> parse_buy_line(std::string_view line, std::string& reason) {
  std::array<std::string_view, 5> f;
  const std::size_t n = split_fields(line, f);
  if (n != 5) {
    reason = "expected 5 fields, got " + std::to_string(n);
    return std::nullopt;
  }
  BuyEvent e;
  if (!parse_id(f[0], e.session_id, "session_id", reason) ||
      !parse_time(f[1], e.timestamp, reason) || !parse_id(f[2], e.item_id, "item_id", reason)) {
    return std::nullopt;
  }
  if (!parse_uint(f[3], e.price)) {
    reason = "invalid price";
    return std::nullopt;
  }
  if (!parse_uint(f[4], e.quantity)) {
    reason = "invalid quantity";
    return std::nullopt;
  }
  return e;
}

bool LineReader::next(std::string_view& line) {
  if (!std::getline(in_, buffer_)) {
    if (in_.bad()) throw IoError("read failure after line " + std::to_string(line_no_));
    return false;
  }
  ++line_no_;
  if (!buffer_.empty() && buffer_.back() == '\r') buffer_.pop_back();
  line = buffer_;
  return true;
}

ParseResult<ClickEvent> parse_clicks(std::istream& in) {
  return parse_stream<ClickEvent>(in, parse_click_line);
}

ParseResult<BuyEvent> parse_buys(std::istream& in) {
  return parse_stream<BuyEvent>(in, parse_buy_line);
}

bool Session::bought(ItemId item) const noexcept {
  return std::binary_search(bought_items.begin(), bought_items.end(), item);
}

SessionSet assemble_sessions(std::span<const ClickEvent> clicks, std::span<const BuyEvent> buys) {
  SessionSet out;

  // Group clicks by session, ordered by (timestamp, input order) within a session.
  std::vector<std::uint32_t> order(clicks.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    const ClickEvent& x = clicks[a];
    const ClickEvent& y = clicks[b];
    if (x.session_id != y.session_id) return x.session_id < y.session_id;
    return x.timestamp < y.timestamp;
  });
  for (std::size_t i = 0; i < order.size();) {
    const SessionId id = clicks[order[i]].session_id;
    Session s;
    s.session_id = id;
    std::size_t j = i;
    while (j < order.size() && clicks[order[j]].session_id == id) ++j;
    s.clicks.reserve(j - i);
    for (std::size_t k = i; k < j; ++k) s.clicks.push_back(clicks[order[k]]);
    out.sessions.push_back(std::move(s));
    i = j;
  }

  std::vector<std::uint32_t> buy_order(buys.size());
  std::iota(buy_order.begin(), buy_order.end(), 0u);
  std::stable_sort(buy_order.begin(), buy_order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return buys[a].session_id < buys[b].session_id;
  });
  SessionId last_orphan = 0;
  for (const std::uint32_t idx : buy_order) {
    const BuyEvent& buy = buys[idx];
    auto it = std::lower_bound(
        out.sessions.begin(), out.sessions.end(), buy.session_id,
        [](const Session& s, SessionId id) { return s.session_id < id; });
    if (it == out.sessions.end() || it->session_id != buy.session_id) {
      ++out.diagnostics.orphan_buys;
      if (buy.session_id != last_orphan) ++out.diagnostics.orphan_buy_sessions;
      last_orphan = buy.session_id;
      continue;
    }
    it->buys.push_back(buy);
  }

  for (Session& s : out.sessions) {
    if (s.buys.empty()) continue;
    for (const BuyEvent& b : s.buys) s.bought_items.push_back(b.item_id);
    std::sort(s.bought_items.begin(), s.bought_items.end());
    s.bought_items.erase(std::unique(s.bought_items.begin(), s.bought_items.end()),
                         s.bought_items.end());
    for (const ItemId item : s.bought_items) {
      const bool clicked = std::any_of(s.clicks.begin(), s.clicks.end(),
                                       [&](const ClickEvent& c) { return c.item_id == item; });
      if (!clicked) ++out.diagnostics.unclicked_bought_items;
    }
  }
  return out;
}

const Session* find_session(std::span<const Session> sessions, SessionId id) noexcept {
  auto it = std::lower_bound(sessions.begin(), sessions.end(), id,
                             [](const Session& s, SessionId v) { return s.session_id < v; });
  if (it == sessions.end() || it->session_id != id) return nullptr;
  return &*it;
}

void write_click_line(std::ostream& out, const ClickEvent& c) {
  out << c.session_id << ',' << format_timestamp(c.timestamp) << ',' << c.item_id << ','
      << c.category << '\n';
}

void write_buy_line(std::ostream& out, const BuyEvent& b) {
  out << b.session_id << ',' << format_timestamp(b.timestamp) << ',' << b.item_id << ','
      << b.price << ',' << b.quantity << '\n';
}

void write_clicks_csv(std::ostream& out, std::span<const ClickEvent> clicks) {
  for (const auto& c : clicks) write_click_line(out, c);
}

void write_buys_csv(std::ostream& out, std::span<const BuyEvent> buys) {
  for (const auto& b : buys) write_buy_line(out, b);
}

void write_session_clicks_csv(std::ostream& out, std::span<const Session> sessions) {
  for (const Session& s : sessions) write_clicks_csv(out, s.clicks);
}

void write_session_buys_csv(std::ostream& out, std::span<const Session> sessions) {
  for (const Session& s : sessions) write_buys_csv(out, s.buys);
}

void write_reject_log(std::ostream& out, std::span<const Reject> rejects) {
  out << "line_no,reason\n";
  for (const Reject& r : rejects) {
    out << r.line_no << ',';
    if (r.reason.find_first_of(",\"") == std::string::npos) {
      out << r.reason << '\n';
      continue;
    }
    out << '"';
    for (char c : r.reason) {
      if (c == '"') out << '"';
      out << c;
    }
    out << "\"\n";
  }
}

ParseResult<ClickEvent> load_clicks(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open clicks file: " + path);
  return parse_clicks(in);
}

ParseResult<BuyEvent> load_buys(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open buys file: " + path);
  return parse_buys(in);
}

}  // namespace clickbuy
