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

#include <chrono>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "clickbuy/pipeline.hpp"

namespace clickbuy {

struct StreamDiagnostics {
  std::size_t events = 0;            // accepted click events
  std::size_t late_events = 0;       // events for already-finalised sessions (dropped)
  std::size_t sessions_emitted = 0;
  std::size_t rejected_lines = 0;
};

/// Event-time sessioniser in front of predict_session.
///
/// The stream clock is the largest timestamp seen so far. A session is
/// finalised once the clock passes its last event by more than the idle
/// timeout, or when finish() is called. Each finalised session yields exactly
/// the prediction predict_session would give for its accumulated clicks.
class StreamPredictor {
 public:
  using Sink = std::function<void(const SessionPrediction&)>;

  StreamPredictor(const ModelBundle& bundle, std::chrono::milliseconds idle_timeout, Sink sink);

  void push(const ClickEvent& click);
  // Flushes every open session, in ascending session id.
  void finish();

  const StreamDiagnostics& diagnostics() const noexcept { return diag_; }
  std::size_t open_sessions() const noexcept { return open_.size(); }

 private:
  struct OpenSession {
    Session session;
    Timestamp last;
  };

  void expire(Timestamp clock);
  void emit(OpenSession& open);

  const ModelBundle& bundle_;
  std::chrono::milliseconds idle_timeout_;
  Sink sink_;
  std::unordered_map<SessionId, OpenSession> open_;
  std::set<std::pair<Timestamp, SessionId>> by_last_;  // expiry order
  std::unordered_set<SessionId> finalized_;
  Timestamp clock_{INT64_MIN};
  StreamDiagnostics diag_;
};

// Reads click CSV from `in` and streams predictions to `sink`. Malformed
// lines are counted (and appended to `rejects` when given), never fatal.
StreamDiagnostics stream_predict(const ModelBundle& bundle, std::istream& in,
                                 std::chrono::milliseconds idle_timeout,
                                 const StreamPredictor::Sink& sink,
                                 std::vector<Reject>* rejects = nullptr);

}  // namespace clickbuy
