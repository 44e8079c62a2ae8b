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

#include <stdexcept>
#include <string>

namespace clickbuy {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid settings: bad thresholds, mismatched model configurations, unknown keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input data cannot support the requested operation (e.g. a single-class training set).
class DataError : public Error {
 public:
  using Error::Error;
};

// Stream-level read/write failure.
class IoError : public Error {
 public:
  using Error::Error;
};

// Persisted artifact is malformed or has an unsupported version.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace clickbuy
