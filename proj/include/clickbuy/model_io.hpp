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

#include <iosfwd>
#include <string>

#include "clickbuy/pipeline.hpp"

namespace clickbuy {

/// Text model artifact. Layout (one record per line, keys ascending so that
/// equal bundles serialise to identical bytes):
///
///   clickbuy-model <version>
///   mode <joint|independent>
///   alpha <double>
///   features <name,...>
///   click_cap <int>
///   duration_cap <int>
///   feature_checksum <hex fnv1a64 of the feature config>
///   t1 <double>
///   t2 <double>
///   category_bounds <low> <medium>
///   buy_counting <events|sessions|quantity>
///   buy_counts <n>          followed by n lines `<key> <count>`
///   nonbuy_counts <n>       followed by n lines `<key> <count>`
///   popularity <n>          followed by n lines `<item> <buys> <clicks>`
///   end
void save_bundle(std::ostream& out, const ModelBundle& bundle);
// Throws FormatError on malformed input, unknown versions or a checksum mismatch.
ModelBundle load_bundle(std::istream& in);

void save_bundle_file(const std::string& path, const ModelBundle& bundle);
ModelBundle load_bundle_file(const std::string& path);

}  // namespace clickbuy
