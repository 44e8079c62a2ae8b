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

#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "clickbuy/error.hpp"
#include "clickbuy/eval.hpp"
#include "clickbuy/model_io.hpp"
#include "clickbuy/stats.hpp"
#include "clickbuy/stream.hpp"
#include "clickbuy/synth.hpp"
#include "config.hpp"

namespace clickbuy::cli {

namespace {

struct Context {
  Config config;
  std::set<std::string> explicit_keys;  // set by file or flag
  std::ostream& out;
  std::ostream& err;
};

void require(const std::string& value, const char* key, const char* command) {
  if (value.empty()) {
    throw ConfigError(std::string(command) + " requires --" + key);
  }
}

// Output file when a path is given, otherwise the fallback stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    file_.emplace(path, std::ios::binary);
    if (!*file_) throw IoError("cannot write " + path);
    stream_ = &*file_;
  }
  std::ostream& get() { return *stream_; }
  bool is_file() const { return file_.has_value(); }
  void close() {
    stream_->flush();
    if (!*stream_) throw IoError("write failed");
  }

 private:
  std::optional<std::ofstream> file_;
  std::ostream* stream_;
};

SessionSet load_sessions(Context& ctx, bool need_buys, const char* command) {
  const Config& c = ctx.config;
  require(c.clicks, "clicks", command);
  if (need_buys) require(c.buys, "buys", command);

  std::future<ParseResult<BuyEvent>> buys_future;
  if (!c.buys.empty()) {
    buys_future = std::async(c.workers == 1 ? std::launch::deferred : std::launch::async,
                             [path = c.buys] { return load_buys(path); });
  }
  ParseResult<ClickEvent> clicks = load_clicks(c.clicks);
  ParseResult<BuyEvent> buys;
  if (buys_future.valid()) buys = buys_future.get();

  if (!c.reject_log.empty()) {
    std::vector<Reject> rejects;
    for (const Reject& r : clicks.rejects) rejects.push_back({r.line_no, "clicks: " + r.reason});
    for (const Reject& r : buys.rejects) rejects.push_back({r.line_no, "buys: " + r.reason});
    Output log(c.reject_log, ctx.err);
    write_reject_log(log.get(), rejects);
    log.close();
  }

  SessionSet set = assemble_sessions(clicks.events, buys.events);
  ctx.err << "read " << clicks.events.size() << " clicks (" << clicks.rejects.size()
          << " rejected)";
  if (!c.buys.empty()) {
    ctx.err << ", " << buys.events.size() << " buys (" << buys.rejects.size() << " rejected)";
  }
  ctx.err << ", " << set.sessions.size() << " sessions";
  if (set.diagnostics.orphan_buys > 0) {
    ctx.err << ", " << set.diagnostics.orphan_buys << " buys without clicks dropped";
  }
  ctx.err << '\n';
  return set;
}

ModelBundle load_model(Context& ctx, const char* command) {
  const Config& c = ctx.config;
  if (c.model.empty() || !std::filesystem::exists(c.model)) {
    throw ConfigError(std::string(command) + " requires a trained model file (--model)");
  }
  ModelBundle bundle = load_bundle_file(c.model);
  if (ctx.explicit_keys.contains("t1") || ctx.explicit_keys.contains("t2")) {
    Thresholds t = bundle.thresholds;
    if (ctx.explicit_keys.contains("t1")) t.t1 = c.pipeline.thresholds.t1;
    if (ctx.explicit_keys.contains("t2")) t.t2 = c.pipeline.thresholds.t2;
    bundle = with_thresholds(std::move(bundle), t);
  }
  return bundle;
}

int cmd_gen(Context& ctx) {
  const Config& c = ctx.config;
  require(c.clicks, "clicks", "gen");
  require(c.buys, "buys", "gen");
  const SynthData data = c.separable ? separable_fixture(c.synth.seed) : generate(c.synth);

  Output clicks(c.clicks, ctx.out);
  write_clicks_csv(clicks.get(), data.clicks);
  clicks.close();
  Output buys(c.buys, ctx.out);
  write_buys_csv(buys.get(), data.buys);
  buys.close();
  if (!c.manifest.empty()) {
    Output manifest(c.manifest, ctx.out);
    write_manifest_csv(manifest.get(), data);
    manifest.close();
  }
  const std::size_t sessions = c.separable ? 200 : c.synth.n_sessions;
  ctx.out << "generated " << sessions << " sessions (" << data.buy_sessions << " with a buy), "
          << data.clicks.size() << " clicks, " << data.buys.size() << " buys\n";
  return kExitOk;
}

int cmd_train(Context& ctx) {
  const Config& c = ctx.config;
  require(c.model, "model", "train");
  const SessionSet set = load_sessions(ctx, true, "train");
  const ModelBundle bundle = train(set.sessions, c.pipeline, c.workers);
  save_bundle_file(c.model, bundle);
  ctx.out << "trained on " << set.sessions.size() << " sessions: " << bundle.likelihood.total_buy()
          << " buy / " << bundle.likelihood.total_nonbuy() << " non-buy instances, "
          << bundle.likelihood.distinct_keys() << " feature keys, " << bundle.popularity.size()
          << " items with popularity\n";
  return kExitOk;
}

int cmd_predict(Context& ctx) {
  const Config& c = ctx.config;
  const ModelBundle bundle = load_model(ctx, "predict");
  require(c.clicks, "clicks", "predict");
  const ParseResult<ClickEvent> clicks = load_clicks(c.clicks);
  const SessionSet set = assemble_sessions(clicks.events, {});
  const auto preds = predict_batch(bundle, set.sessions, c.workers);
  Output out(c.output, ctx.out);
  write_solution(out.get(), preds);
  out.close();
  const auto buys = std::count_if(preds.begin(), preds.end(),
                                  [](const SessionPrediction& p) { return p.session_is_buy(); });
  ctx.err << "predicted " << buys << " of " << preds.size() << " sessions as buy ("
          << clicks.rejects.size() << " click lines rejected)\n";
  return kExitOk;
}

void emit_report(Context& ctx, const EvalReport& report, const char* extra_header = nullptr,
                 const std::string& extra_value = {}) {
  Output csv(ctx.config.report, ctx.out);
  write_report_csv(csv.get(), report);
  csv.close();
  std::ostream& summary = csv.is_file() ? ctx.out : ctx.err;
  print_summary(summary, report);
  if (extra_header) summary << extra_header << ": " << extra_value << '\n';
}

int cmd_eval(Context& ctx) {
  const Config& c = ctx.config;
  const SessionSet truth = load_sessions(ctx, true, "eval");
  if (!c.solution.empty()) {
    std::ifstream in(c.solution);
    if (!in) throw IoError("cannot open solution file: " + c.solution);
    const auto preds = complete_predictions(read_solution(in), truth.sessions);
    emit_report(ctx, confusion(preds, truth.sessions));
    return kExitOk;
  }
  const HoldoutSplit split = holdout_split(truth.sessions, c.test_fraction, c.seed);
  const ModelBundle bundle = train(split.train, c.pipeline, c.workers);
  const auto preds = predict_batch(bundle, split.test, c.workers);
  if (!c.output.empty()) {
    Output out(c.output, ctx.out);
    write_solution(out.get(), preds);
    out.close();
  }
  std::ostringstream rate;
  rate << split.test_buy_rate * 100.0 << "% of " << split.test.size() << " test sessions";
  emit_report(ctx, confusion(preds, split.test), "test buy-session rate", rate.str());
  return kExitOk;
}

int cmd_cv(Context& ctx) {
  const Config& c = ctx.config;
  const SessionSet set = load_sessions(ctx, true, "cv");
  const CvResult result = kfold(set.sessions, c.k, c.seed, c.pipeline, c.workers);
  Output csv(c.report, ctx.out);
  write_cv_csv(csv.get(), result);
  csv.close();
  print_summary(csv.is_file() ? ctx.out : ctx.err, result.aggregate);
  return kExitOk;
}

int cmd_sweep(Context& ctx) {
  const Config& c = ctx.config;
  const SessionSet set = load_sessions(ctx, true, "sweep");
  const auto cells =
      threshold_sweep(set.sessions, c.t1_grid, c.t2_grid, c.k, c.seed, c.pipeline, c.workers);
  Output csv(c.report, ctx.out);
  write_sweep_csv(csv.get(), cells);
  csv.close();
  const auto best = std::max_element(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
    return a.aggregate.score.mean < b.aggregate.score.mean;
  });
  (csv.is_file() ? ctx.out : ctx.err)
      << "best mean score " << best->aggregate.score.mean << " at t1=" << best->t1
      << " t2=" << best->t2 << '\n';
  return kExitOk;
}

int cmd_stream(Context& ctx) {
  const Config& c = ctx.config;
  const ModelBundle bundle = load_model(ctx, "stream");
  if (!(c.idle_timeout > 0.0)) throw ConfigError("idle_timeout must be positive");
  const auto timeout = std::chrono::milliseconds(std::llround(c.idle_timeout * 1000.0));

  std::optional<std::ifstream> file;
  std::istream* in = &std::cin;
  if (!c.clicks.empty() && c.clicks != "-") {
    file.emplace(c.clicks);
    if (!*file) throw IoError("cannot open clicks file: " + c.clicks);
    in = &*file;
  }
  Output out(c.output, ctx.out);
  std::ostream& sink = out.get();
  const bool flush_each = !out.is_file();
  std::vector<Reject> rejects;
  const StreamDiagnostics diag = stream_predict(
      bundle, *in, timeout,
      [&](const SessionPrediction& p) {
        write_solution_line(sink, p);
        if (flush_each && p.session_is_buy()) sink.flush();
      },
      c.reject_log.empty() ? nullptr : &rejects);
  out.close();
  if (!c.reject_log.empty()) {
    Output log(c.reject_log, ctx.err);
    write_reject_log(log.get(), rejects);
    log.close();
  }
  ctx.err << "stream: " << diag.events << " events, " << diag.sessions_emitted << " sessions, "
          << diag.late_events << " late events dropped, " << diag.rejected_lines
          << " lines rejected\n";
  return kExitOk;
}

int cmd_stats(Context& ctx) {
  const Config& c = ctx.config;
  const SessionSet set = load_sessions(ctx, true, "stats");
  const auto rows =
      compute_stats(set.sessions, c.pipeline.model.features, c.pipeline.counting, c.pipeline.categories);
  Output csv(c.report.empty() ? c.output : c.report, ctx.out);
  write_stats_csv(csv.get(), rows);
  csv.close();
  return kExitOk;
}

struct Command {
  const char* name;
  const char* help;
  int (*fn)(Context&);
};

constexpr Command kCommands[] = {
    {"gen", "generate a synthetic click/buy data set with a planted model", cmd_gen},
    {"train", "fit a model bundle from click and buy logs", cmd_train},
    {"predict", "batch-predict buy sessions into a solution file", cmd_predict},
    {"eval", "score a solution file, or run a seeded holdout evaluation", cmd_eval},
    {"cv", "k-fold cross-validation", cmd_cv},
    {"sweep", "cross-validated threshold grid search", cmd_sweep},
    {"stream", "real-time prediction over a click stream", cmd_stream},
    {"stats", "feature/buy aggregation report", cmd_stats},
};

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-step session buy prediction", "clickbuy"};
  std::string config_path;
  bool print = false;
  app.add_option("--config", config_path, "flat 'key = value' config file");
  app.add_flag("--print-config", print, "print the effective configuration and exit");

  std::map<std::string, std::string> values;
  std::vector<std::pair<const ConfigKey*, CLI::Option*>> options;
  for (const ConfigKey& key : config_keys()) {
    std::string names = "--" + key.name;
    std::string dashed = key.name;
    std::replace(dashed.begin(), dashed.end(), '_', '-');
    if (dashed != key.name) names += ",--" + dashed;
    options.emplace_back(&key, app.add_option(names, values[key.name], key.help)->type_name("VALUE"));
  }
  for (const Command& cmd : kCommands) app.add_subcommand(cmd.name, cmd.help)->fallthrough();
  app.require_subcommand(0, 1);

  std::vector<std::string> argv_storage{"clickbuy"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nrun 'clickbuy --help' for usage\n";
    return kExitUsage;
  }

  Context ctx{Config{}, {}, out, err};
  try {
    if (!config_path.empty()) {
      apply_config_file(ctx.config, config_path);
      std::ifstream in(config_path);
      for (std::string line; std::getline(in, line);) {
        const auto eq = line.find('=');
        if (eq == std::string::npos || line.find_first_not_of(" \t") == line.find('#')) continue;
        std::string key = line.substr(0, eq);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        ctx.explicit_keys.insert(key);
      }
    }
    for (const auto& [key, option] : options) {
      if (option->count() == 0) continue;
      set_config_value(ctx.config, key->name, values[key->name]);
      ctx.explicit_keys.insert(key->name);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (print) {
    print_config(out, ctx.config);
    return kExitOk;
  }
  const auto subs = app.get_subcommands();
  if (subs.empty()) {
    err << "error: a subcommand is required\n" << app.help();
    return kExitUsage;
  }

  const std::string name = subs.front()->get_name();
  try {
    for (const Command& cmd : kCommands) {
      if (name == cmd.name) return cmd.fn(ctx);
    }
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace clickbuy::cli
