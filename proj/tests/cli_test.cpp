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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "config.hpp"

namespace clickbuy::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           (std::string("cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void gen(std::vector<std::string> extra = {}) {
    std::vector<std::string> args = {"gen", "--clicks", path("clicks.csv"), "--buys", path("buys.csv")};
    args.insert(args.end(), extra.begin(), extra.end());
    const Result r = run_cli(args);
    ASSERT_EQ(r.code, 0) << r.err;
  }

  fs::path dir_;
};

TEST_F(Cli, SeparableEndToEnd) {
  gen({"--separable", "true"});
  for (const char* t1 : {"0.5", "1", "1000000"}) {
    Result r = run_cli({"train", "--clicks", path("clicks.csv"), "--buys", path("buys.csv"), "--model",
                        path("m.txt"), "--alpha", "0", "--t1", t1, "--t2", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    r = run_cli({"predict", "--clicks", path("clicks.csv"), "--model", path("m.txt"), "--output",
                 path("sol.dat")});
    ASSERT_EQ(r.code, 0) << r.err;
    r = run_cli({"eval", "--clicks", path("clicks.csv"), "--buys", path("buys.csv"), "--solution",
                 path("sol.dat"), "--report", path("report.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines_of(slurp(path("report.csv")));
    ASSERT_EQ(rows.size(), 2u);
    const auto head = split(rows[0]);
    const auto vals = split(rows[1]);
    ASSERT_EQ(head[1], "tp_rate_session");
    ASSERT_EQ(head[2], "fp_rate_session");
    EXPECT_EQ(std::stod(vals[1]), 100.0) << t1;
    EXPECT_EQ(std::stod(vals[2]), 0.0) << t1;
  }
}

TEST_F(Cli, CrossValidationRows) {
  gen({"--synth-sessions", "2000", "--synth-items", "100"});
  const std::vector<std::string> args = {"cv", "--clicks", path("clicks.csv"), "--buys",
                                         path("buys.csv"), "--k", "5", "--seed", "7"};
  const Result r = run_cli(args);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines_of(r.out);
  ASSERT_EQ(rows.size(), 8u);
  for (int f = 0; f < 5; ++f) EXPECT_EQ(rows[1 + f].rfind(std::to_string(f) + ",", 0), 0u);
  EXPECT_EQ(rows[6].rfind("mean,", 0), 0u);
  EXPECT_EQ(rows[7].rfind("stddev,", 0), 0u);
  EXPECT_NE(r.err.find("score:"), std::string::npos);
  EXPECT_EQ(run_cli(args).out, r.out);
}

TEST_F(Cli, GenIsDeterministic) {
  gen({"--synth-seed", "3", "--synth-sessions", "500"});
  const std::string a = slurp(path("clicks.csv")) + slurp(path("buys.csv"));
  gen({"--synth-seed", "3", "--synth-sessions", "500"});
  EXPECT_EQ(slurp(path("clicks.csv")) + slurp(path("buys.csv")), a);
  gen({"--synth-seed", "4", "--synth-sessions", "500"});
  EXPECT_NE(slurp(path("clicks.csv")) + slurp(path("buys.csv")), a);
}

TEST_F(Cli, PredictWithoutModelIsUsageError) {
  gen({"--synth-sessions", "100"});
  EXPECT_EQ(run_cli({"predict", "--clicks", path("clicks.csv")}).code, kExitUsage);
  EXPECT_EQ(run_cli({"predict", "--clicks", path("clicks.csv"), "--model", path("none.txt")}).code,
            kExitUsage);
}

TEST_F(Cli, ErrorCodes) {
  EXPECT_EQ(run_cli({"train", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run_cli({}).code, kExitUsage);
  EXPECT_EQ(run_cli({"train", "--t1", "abc", "--clicks", "x", "--buys", "y", "--model", "z"}).code,
            kExitUsage);
  EXPECT_EQ(run_cli({"train", "--clicks", path("missing.csv"), "--buys", path("missing.csv"),
                     "--model", path("m.txt")})
                .code,
            kExitData);
  std::ofstream(path("bad.solution")) << "1;x\n";
  gen({"--synth-sessions", "100"});
  EXPECT_EQ(run_cli({"eval", "--clicks", path("clicks.csv"), "--buys", path("buys.csv"),
                     "--solution", path("bad.solution")})
                .code,
            kExitData);
  std::ofstream(path("bad.conf")) << "colour = blue\n";
  EXPECT_EQ(run_cli({"--config", path("bad.conf"), "--print-config"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, kExitOk);
}

TEST_F(Cli, PrecedenceMatrix) {
  struct Case {
    std::string key, dflt, file, flag;
  };
  const std::vector<Case> cases = {
      {"t1", "1", "2.5", "4"},
      {"k", "5", "3", "7"},
      {"mode", "joint", "independent", "joint"},
      {"features", "hour,day_of_month,day_of_week,month,clicks,duration", "hour,clicks", "duration"},
      {"idle_timeout", "1800", "60", "90"},
  };
  auto value = [](const std::string& printed, const std::string& key) {
    for (const std::string& l : lines_of(printed)) {
      if (l.rfind(key + " = ", 0) == 0) return l.substr(key.size() + 3);
    }
    return std::string("<missing>");
  };
  for (const Case& c : cases) {
    std::ofstream(path("c.conf")) << "# settings\n" << c.key << " = " << c.file << "\n";
    for (int mask = 0; mask < 4; ++mask) {
      std::vector<std::string> args = {"--print-config"};
      if (mask & 1) args.insert(args.end(), {"--config", path("c.conf")});
      if (mask & 2) args.insert(args.end(), {"--" + c.key, c.flag});
      const Result r = run_cli(args);
      ASSERT_EQ(r.code, 0) << r.err;
      const std::string want = (mask & 2) ? c.flag : (mask & 1) ? c.file : c.dflt;
      EXPECT_EQ(value(r.out, c.key), want) << c.key << " mask " << mask;
    }
  }
  Config cfg;
  std::istringstream text("t1 = 3\n\n  # note\nk=4\n");
  apply_config_text(cfg, text, "inline");
  EXPECT_EQ(cfg.pipeline.thresholds.t1, 3.0);
  EXPECT_EQ(cfg.k, 4u);
}

TEST_F(Cli, PrintedConfigReloads) {
  const Result a = run_cli({"--print-config", "--t1", "2", "--synth-zipf", "0.5"});
  ASSERT_EQ(a.code, 0);
  std::ofstream(path("all.conf")) << a.out;
  const Result b = run_cli({"--config", path("all.conf"), "--print-config"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(b.out, a.out);
}

TEST_F(Cli, StreamMatchesPredict) {
  gen({"--synth-sessions", "1500", "--synth-items", "80"});
  ASSERT_EQ(run_cli({"train", "--clicks", path("clicks.csv"), "--buys", path("buys.csv"), "--model",
                     path("m.txt")})
                .code,
            0);
  ASSERT_EQ(run_cli({"predict", "--clicks", path("clicks.csv"), "--model", path("m.txt"),
                     "--output", path("batch.dat")})
                .code,
            0);
  const Result r = run_cli({"stream", "--clicks", path("clicks.csv"), "--model", path("m.txt"),
                            "--output", path("stream.dat")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  EXPECT_EQ(sorted(lines_of(slurp(path("stream.dat")))), sorted(lines_of(slurp(path("batch.dat")))));
  EXPECT_NE(r.err.find("0 late events"), std::string::npos);
}

TEST_F(Cli, SweepAndStats) {
  gen({"--synth-sessions", "1000", "--synth-items", "60"});
  Result r = run_cli({"sweep", "--clicks", path("clicks.csv"), "--buys", path("buys.csv"), "--k",
                      "3", "--t1-grid", "0.5,2", "--t2-grid", "0.1,0.2,0.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines_of(r.out).size(), 7u);
  r = run_cli({"stats", "--clicks", path("clicks.csv"), "--buys", path("buys.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines_of(r.out).at(0), "table,bin,count,positives,rate");
  r = run_cli({"eval", "--clicks", path("clicks.csv"), "--buys", path("buys.csv"),
               "--test-fraction", "0.3", "--seed", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines_of(r.out).size(), 2u);
  EXPECT_NE(r.err.find("300 test sessions"), std::string::npos);
}

TEST_F(Cli, RejectLog) {
  std::ofstream(path("clicks.csv")) << "1,2014-04-06T18:44:00.000Z,5,0\nnot a line\n";
  std::ofstream(path("buys.csv")) << "1,2014-04-06T18:50:00.000Z,5,100,1\n";
  const Result r = run_cli({"stats", "--clicks", path("clicks.csv"), "--buys", path("buys.csv"),
                            "--reject-log", path("rejects.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path("rejects.csv")), "line_no,reason\n2,\"clicks: expected 4 fields, got 1\"\n");
}

}  // namespace
}  // namespace clickbuy::cli
