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

#include "clickbuy/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

#include "clickbuy/error.hpp"
#include "clickbuy/parallel.hpp"

namespace clickbuy {

void PipelineConfig::validate() const {
  model.validate();
  thresholds.validate();
  categories.validate();
}

ModelBundle train(std::span<const Session> sessions, const PipelineConfig& config,
                  unsigned workers) {
  config.validate();
  if (std::none_of(sessions.begin(), sessions.end(), [](const Session& s) { return s.is_buy(); })) {
    throw DataError("training data contains no buy sessions");
  }

  const std::size_t chunks =
      std::clamp<std::size_t>(resolve_workers(workers), 1, std::max<std::size_t>(1, sessions.size()));
  std::vector<LikelihoodModel> partial(chunks, LikelihoodModel(config.model));
  parallel_for(chunks, workers, [&](std::size_t c) {
    const std::size_t lo = sessions.size() * c / chunks;
    const std::size_t hi = sessions.size() * (c + 1) / chunks;
    std::vector<Instance> instances;
    for (std::size_t i = lo; i < hi; ++i) {
      auto more = extract_instances(sessions[i], config.model.features);
      instances.insert(instances.end(), more.begin(), more.end());
    }
    partial[c] = accumulate(instances, config.model);
  });
  LikelihoodModel likelihood = merge(partial);
  if (likelihood.total_buy() == 0) {
    throw DataError("cannot fit likelihood model: no Buy instances");
  }
  if (likelihood.total_nonbuy() == 0) {
    throw DataError("cannot fit likelihood model: no NonBuy instances");
  }

  return ModelBundle{std::move(likelihood), build_popularity(sessions, config.counting),
                     config.thresholds, config.categories, kBundleFormatVersion};
}

ModelBundle with_thresholds(ModelBundle bundle, const Thresholds& thresholds) {
  thresholds.validate();
  bundle.thresholds = thresholds;
  return bundle;
}

SessionPrediction predict_session(const ModelBundle& bundle, const Session& session) {
  SessionPrediction out;
  out.session_id = session.session_id;
  for (const Instance& inst : extract_instances(session, bundle.feature_config())) {
    if (!(bundle.likelihood.ratio(inst.features).value > bundle.thresholds.t1)) continue;
    const auto score = bundle.popularity.weighted(inst.item_id, inst.click_count);
    if (score && !(*score > bundle.thresholds.t2)) continue;
    out.predicted_items.push_back(inst.item_id);
  }
  std::sort(out.predicted_items.begin(), out.predicted_items.end());
  return out;
}

std::vector<SessionPrediction> predict_batch(const ModelBundle& bundle,
                                             std::span<const Session> sessions, unsigned workers) {
  std::vector<SessionPrediction> out(sessions.size());
  constexpr std::size_t kBlock = 1024;
  const std::size_t blocks = (sessions.size() + kBlock - 1) / kBlock;
  parallel_for(blocks, workers, [&](std::size_t b) {
    const std::size_t hi = std::min(sessions.size(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < hi; ++i) out[i] = predict_session(bundle, sessions[i]);
  });
  return out;
}

void write_solution_line(std::ostream& out, const SessionPrediction& p) {
  if (p.predicted_items.empty()) return;
  out << p.session_id << ';';
  for (std::size_t i = 0; i < p.predicted_items.size(); ++i) {
    if (i) out << ',';
    out << p.predicted_items[i];
  }
  out << '\n';
}

void write_solution(std::ostream& out, std::span<const SessionPrediction> predictions) {
  for (const auto& p : predictions) write_solution_line(out, p);
}

std::vector<SessionPrediction> read_solution(std::istream& in) {
  std::vector<SessionPrediction> out;
  LineReader reader(in);
  std::string_view line;
  auto fail = [&](const char* what) {
    throw FormatError("solution line " + std::to_string(reader.line_no()) + ": " + what);
  };
  auto parse_u64 = [](std::string_view s, std::uint64_t& v) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return !s.empty() && ec == std::errc{} && ptr == s.data() + s.size();
  };
  while (reader.next(line)) {
    if (line.empty()) continue;
    const std::size_t semi = line.find(';');
    if (semi == std::string_view::npos) fail("missing ';'");
    SessionPrediction p;
    if (!parse_u64(line.substr(0, semi), p.session_id)) fail("invalid session id");
    std::string_view rest = line.substr(semi + 1);
    while (!rest.empty()) {
      const std::size_t comma = rest.find(',');
      const std::string_view tok = rest.substr(0, comma);
      ItemId item = 0;
      if (!parse_u64(tok, item)) fail("invalid item id");
      p.predicted_items.push_back(item);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
      if (rest.empty()) fail("trailing ','");
    }
    std::sort(p.predicted_items.begin(), p.predicted_items.end());
    p.predicted_items.erase(std::unique(p.predicted_items.begin(), p.predicted_items.end()),
                            p.predicted_items.end());
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace clickbuy
