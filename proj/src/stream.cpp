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

#include "clickbuy/stream.hpp"

#include <algorithm>
#include <istream>

#include "clickbuy/error.hpp"

namespace clickbuy {

StreamPredictor::StreamPredictor(const ModelBundle& bundle, std::chrono::milliseconds idle_timeout,
                                 Sink sink)
    : bundle_(bundle), idle_timeout_(idle_timeout), sink_(std::move(sink)) {
  if (idle_timeout_.count() <= 0) throw ConfigError("idle timeout must be positive");
}

void StreamPredictor::push(const ClickEvent& click) {
  if (click.timestamp > clock_) {
    clock_ = click.timestamp;
    expire(clock_);
  }
  if (finalized_.contains(click.session_id)) {
    ++diag_.late_events;
    return;
  }
  ++diag_.events;
  auto [it, inserted] = open_.try_emplace(click.session_id);
  OpenSession& open = it->second;
  if (inserted) {
    open.session.session_id = click.session_id;
    open.last = click.timestamp;
  } else if (click.timestamp > open.last) {
    by_last_.erase({open.last, click.session_id});
    open.last = click.timestamp;
  }
  by_last_.emplace(open.last, click.session_id);
  open.session.clicks.push_back(click);
}

void StreamPredictor::expire(Timestamp clock) {
  const std::int64_t timeout = idle_timeout_.count();
  while (!by_last_.empty()) {
    const auto [last, id] = *by_last_.begin();
    if (clock.ms - last.ms <= timeout) break;
    by_last_.erase(by_last_.begin());
    auto it = open_.find(id);
    emit(it->second);
    open_.erase(it);
  }
}

void StreamPredictor::emit(OpenSession& open) {
  Session& s = open.session;
  std::stable_sort(s.clicks.begin(), s.clicks.end(),
                   [](const ClickEvent& a, const ClickEvent& b) { return a.timestamp < b.timestamp; });
  finalized_.insert(s.session_id);
  ++diag_.sessions_emitted;
  sink_(predict_session(bundle_, s));
}

void StreamPredictor::finish() {
  std::vector<SessionId> ids;
  ids.reserve(open_.size());
  for (const auto& kv : open_) ids.push_back(kv.first);
  std::sort(ids.begin(), ids.end());
  for (const SessionId id : ids) emit(open_.at(id));
  open_.clear();
  by_last_.clear();
}

StreamDiagnostics stream_predict(const ModelBundle& bundle, std::istream& in,
                                 std::chrono::milliseconds idle_timeout,
                                 const StreamPredictor::Sink& sink, std::vector<Reject>* rejects) {
  StreamPredictor predictor(bundle, idle_timeout, sink);
  LineReader reader(in);
  std::string_view line;
  std::string reason;
  std::size_t rejected = 0;
  while (reader.next(line)) {
    if (auto click = parse_click_line(line, reason)) {
      predictor.push(*click);
    } else {
      ++rejected;
      if (rejects) rejects->push_back({reader.line_no(), reason});
    }
  }
  predictor.finish();
  StreamDiagnostics diag = predictor.diagnostics();
  diag.rejected_lines = rejected;
  return diag;
}

}  // namespace clickbuy
