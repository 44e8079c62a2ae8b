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

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clickbuy/pipeline.hpp"
#include "clickbuy/synth.hpp"

namespace clickbuy::cli {

struct Config {
  // paths
  std::string clicks;
  std::string buys;
  std::string model;
  std::string output;
  std::string manifest;
  std::string solution;
  std::string report;
  std::string reject_log;

  PipelineConfig pipeline;

  // evaluation
  std::size_t k = 5;
  std::uint64_t seed = 42;
  double test_fraction = 0.25;
  std::vector<double> t1_grid = {0.5, 1.0, 2.0, 4.0};
  std::vector<double> t2_grid = {0.05, 0.1, 0.2, 0.5};

  double idle_timeout = 1800.0;  // seconds
  unsigned workers = 0;          // 0 = one per hardware thread

  SynthConfig synth;
  bool separable = false;
};

struct ConfigKey {
  std::string name;
  std::string help;
  std::function<void(Config&, std::string_view)> set;  // throws ConfigError
  std::function<std::string(const Config&)> get;
};

const std::vector<ConfigKey>& config_keys();

// Applies a flat `key = value` file on top of `config`. Blank lines and
// lines starting with '#' are ignored; unknown keys are a ConfigError.
void apply_config_text(Config& config, std::istream& in, const std::string& origin);
void apply_config_file(Config& config, const std::string& path);
void set_config_value(Config& config, std::string_view key, std::string_view value);

// Every key in registry order as `key = value` lines.
void print_config(std::ostream& out, const Config& config);

}  // namespace clickbuy::cli
