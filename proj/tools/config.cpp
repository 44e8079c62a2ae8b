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

#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "clickbuy/error.hpp"

namespace clickbuy::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || std::isnan(v)) {
    throw ConfigError(std::string(key) + ": not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t to_uint(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(key) + ": not a non-negative integer: '" + std::string(text) + "'");
  }
  return v;
}

int to_int(std::string_view key, std::string_view text) {
  const std::uint64_t v = to_uint(key, text);
  if (v > 1'000'000'000) throw ConfigError(std::string(key) + ": value too large");
  return static_cast<int>(v);
}

bool to_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(std::string(key) + ": expected true or false");
}

std::vector<double> to_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(to_double(key, text.substr(start, comma == std::string_view::npos
                                                        ? std::string_view::npos
                                                        : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += fmt(values[i]);
  }
  return out;
}

Timestamp to_instant(std::string_view key, std::string_view text) {
  text = trim(text);
  std::string full(text);
  if (full.size() == 10) full += "T00:00:00Z";
  const auto ts = parse_timestamp(full);
  if (!ts) throw ConfigError(std::string(key) + ": invalid date");
  return *ts;
}

template <typename Getter, typename Setter>
ConfigKey key(std::string name, std::string help, Setter set, Getter get) {
  return ConfigKey{std::move(name), std::move(help), std::move(set), std::move(get)};
}

ConfigKey path_key(std::string name, std::string help, std::string Config::*field) {
  return key(
      std::move(name), std::move(help),
      [field](Config& c, std::string_view v) { c.*field = std::string(trim(v)); },
      [field](const Config& c) { return c.*field; });
}

ConfigKey double_key(std::string name, std::string help, double& (*ref)(Config&)) {
  return key(
      std::move(name), std::move(help),
      [ref, n = name](Config& c, std::string_view v) { ref(c) = to_double(n, v); },
      [ref](const Config& c) {
        Config copy = c;
        return fmt(ref(copy));
      });
}

std::vector<ConfigKey> build_keys() {
  std::vector<ConfigKey> k;
  k.push_back(path_key("clicks", "click CSV (input; output for gen; '-' = stdin for stream)", &Config::clicks));
  k.push_back(path_key("buys", "buy CSV (input; output for gen)", &Config::buys));
  k.push_back(path_key("model", "model bundle file", &Config::model));
  k.push_back(path_key("output", "solution output file (default: stdout)", &Config::output));
  k.push_back(path_key("manifest", "ground-truth manifest written by gen", &Config::manifest));
  k.push_back(path_key("solution", "solution file to score in eval", &Config::solution));
  k.push_back(path_key("report", "CSV report file (default: stdout)", &Config::report));
  k.push_back(path_key("reject_log", "CSV log of rejected input lines", &Config::reject_log));

  k.push_back(key(
      "features", "enabled features: hour,day_of_month,day_of_week,month,clicks,duration",
      [](Config& c, std::string_view v) { c.pipeline.model.features.enabled = FeatureSet::parse(v); },
      [](const Config& c) { return c.pipeline.model.features.enabled.to_string(); }));
  k.push_back(key(
      "click_cap", "last click-count bin (>= cap)",
      [](Config& c, std::string_view v) { c.pipeline.model.features.click_cap = to_int("click_cap", v); },
      [](const Config& c) { return std::to_string(c.pipeline.model.features.click_cap); }));
  k.push_back(key(
      "duration_cap", "last duration bin in minutes (>= cap)",
      [](Config& c, std::string_view v) {
        c.pipeline.model.features.duration_cap = to_int("duration_cap", v);
      },
      [](const Config& c) { return std::to_string(c.pipeline.model.features.duration_cap); }));
  k.push_back(key(
      "mode", "likelihood mode: joint | independent",
      [](Config& c, std::string_view v) { c.pipeline.model.mode = parse_mode(trim(v)); },
      [](const Config& c) { return std::string(mode_name(c.pipeline.model.mode)); }));
  k.push_back(double_key("alpha", "additive smoothing constant",
                         [](Config& c) -> double& { return c.pipeline.model.smoothing_alpha; }));
  k.push_back(key(
      "buy_counting", "popularity buy unit: events | sessions | quantity",
      [](Config& c, std::string_view v) { c.pipeline.counting = parse_buy_counting(trim(v)); },
      [](const Config& c) { return std::string(buy_counting_name(c.pipeline.counting)); }));
  k.push_back(double_key("category_low", "popularity <= this is 'low' (reports only)",
                         [](Config& c) -> double& { return c.pipeline.categories.low_max; }));
  k.push_back(double_key("category_medium", "popularity <= this is 'medium' (reports only)",
                         [](Config& c) -> double& { return c.pipeline.categories.medium_max; }));
  k.push_back(double_key("t1", "step-1 likelihood-ratio threshold",
                         [](Config& c) -> double& { return c.pipeline.thresholds.t1; }));
  k.push_back(double_key("t2", "step-2 popularity x clicks threshold",
                         [](Config& c) -> double& { return c.pipeline.thresholds.t2; }));

  k.push_back(key(
      "k", "cross-validation folds", [](Config& c, std::string_view v) { c.k = to_uint("k", v); },
      [](const Config& c) { return std::to_string(c.k); }));
  k.push_back(key(
      "seed", "seed for splits and folds",
      [](Config& c, std::string_view v) { c.seed = to_uint("seed", v); },
      [](const Config& c) { return std::to_string(c.seed); }));
  k.push_back(double_key("test_fraction", "holdout test share for eval without --solution",
                         [](Config& c) -> double& { return c.test_fraction; }));
  k.push_back(key(
      "t1_grid", "comma-separated t1 values for sweep",
      [](Config& c, std::string_view v) { c.t1_grid = to_list("t1_grid", v); },
      [](const Config& c) { return fmt_list(c.t1_grid); }));
  k.push_back(key(
      "t2_grid", "comma-separated t2 values for sweep",
      [](Config& c, std::string_view v) { c.t2_grid = to_list("t2_grid", v); },
      [](const Config& c) { return fmt_list(c.t2_grid); }));
  k.push_back(double_key("idle_timeout", "stream session idle timeout in seconds",
                         [](Config& c) -> double& { return c.idle_timeout; }));
  k.push_back(key(
      "workers", "worker threads (0 = all processors)",
      [](Config& c, std::string_view v) { c.workers = static_cast<unsigned>(to_int("workers", v)); },
      [](const Config& c) { return std::to_string(c.workers); }));

  k.push_back(key(
      "synth_seed", "generator seed",
      [](Config& c, std::string_view v) { c.synth.seed = to_uint("synth_seed", v); },
      [](const Config& c) { return std::to_string(c.synth.seed); }));
  k.push_back(key(
      "synth_sessions", "number of generated sessions",
      [](Config& c, std::string_view v) { c.synth.n_sessions = to_uint("synth_sessions", v); },
      [](const Config& c) { return std::to_string(c.synth.n_sessions); }));
  k.push_back(key(
      "synth_items", "number of generated items",
      [](Config& c, std::string_view v) { c.synth.n_items = to_uint("synth_items", v); },
      [](const Config& c) { return std::to_string(c.synth.n_items); }));
  k.push_back(key(
      "synth_item_popularity", "explicit planted popularity per item (overrides synth_items)",
      [](Config& c, std::string_view v) { c.synth.item_popularity = to_list("synth_item_popularity", v); },
      [](const Config& c) { return fmt_list(c.synth.item_popularity); }));
  k.push_back(double_key("synth_popularity_min", "lower bound of drawn item popularity",
                         [](Config& c) -> double& { return c.synth.popularity_min; }));
  k.push_back(double_key("synth_popularity_max", "upper bound of drawn item popularity",
                         [](Config& c) -> double& { return c.synth.popularity_max; }));
  k.push_back(double_key("synth_zipf", "item click-share exponent",
                         [](Config& c) -> double& { return c.synth.item_zipf; }));
  k.push_back(double_key("synth_buy_fraction", "share of sessions with a buy",
                         [](Config& c) -> double& { return c.synth.buy_session_fraction; }));
  k.push_back(double_key("synth_mean_clicks_buy", "mean clicks in buy sessions",
                         [](Config& c) -> double& { return c.synth.mean_clicks_buy; }));
  k.push_back(double_key("synth_mean_clicks_nonbuy", "mean clicks in non-buy sessions",
                         [](Config& c) -> double& { return c.synth.mean_clicks_nonbuy; }));
  k.push_back(double_key("synth_revisit", "probability that a click revisits a session item",
                         [](Config& c) -> double& { return c.synth.revisit_probability; }));
  k.push_back(double_key("synth_gap_buy", "mean seconds between clicks in buy sessions",
                         [](Config& c) -> double& { return c.synth.mean_gap_seconds_buy; }));
  k.push_back(double_key("synth_gap_nonbuy", "mean seconds between clicks in non-buy sessions",
                         [](Config& c) -> double& { return c.synth.mean_gap_seconds_nonbuy; }));
  k.push_back(double_key("synth_max_gap", "maximum seconds between clicks",
                         [](Config& c) -> double& { return c.synth.max_gap_seconds; }));
  k.push_back(key(
      "synth_start", "first day of generated timestamps (YYYY-MM-DD)",
      [](Config& c, std::string_view v) { c.synth.start = to_instant("synth_start", v); },
      [](const Config& c) { return format_timestamp(c.synth.start).substr(0, 10); }));
  k.push_back(key(
      "synth_days", "number of days covered",
      [](Config& c, std::string_view v) { c.synth.days = to_int("synth_days", v); },
      [](const Config& c) { return std::to_string(c.synth.days); }));
  k.push_back(key(
      "separable", "gen writes the separable fixture instead",
      [](Config& c, std::string_view v) { c.separable = to_bool("separable", v); },
      [](const Config& c) { return std::string(c.separable ? "true" : "false"); }));
  return k;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = build_keys();
  return keys;
}

void set_config_value(Config& config, std::string_view name, std::string_view value) {
  for (const ConfigKey& k : config_keys()) {
    if (k.name == name) {
      k.set(config, value);
      return;
    }
  }
  throw ConfigError("unknown config key: " + std::string(name));
}

void apply_config_text(Config& config, std::istream& in, const std::string& origin) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const std::size_t eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      set_config_value(config, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(Config& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  apply_config_text(config, in, path);
}

void print_config(std::ostream& out, const Config& config) {
  for (const ConfigKey& k : config_keys()) out << k.name << " = " << k.get(config) << '\n';
}

}  // namespace clickbuy::cli
