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

#include "clickbuy/model_io.hpp"

#include <algorithm>
#include <charconv>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "clickbuy/error.hpp"

namespace clickbuy {

namespace {

constexpr std::string_view kMagic = "clickbuy-model";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_counts(std::ostream& out, std::string_view name, const CountTable& table) {
  std::vector<std::pair<FeatureKey, std::uint64_t>> rows(table.begin(), table.end());
  std::sort(rows.begin(), rows.end());
  out << name << ' ' << rows.size() << '\n';
  for (const auto& [key, count] : rows) out << key.value << ' ' << count << '\n';
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Next line split into whitespace-separated tokens.
  std::vector<std::string> tokens() {
    std::string line;
    if (!std::getline(in_, line)) {
      if (in_.bad()) throw IoError("read failure in model file");
      fail("unexpected end of file");
    }
    ++line_no_;
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string tok; ss >> tok;) out.push_back(tok);
    return out;
  }

  // `name value...` with exactly `n` values.
  std::vector<std::string> field(std::string_view name, std::size_t n) {
    auto toks = tokens();
    if (toks.empty() || toks[0] != name || toks.size() != n + 1) {
      fail("expected '" + std::string(name) + "' with " + std::to_string(n) + " value(s)");
    }
    toks.erase(toks.begin());
    return toks;
  }

  std::uint64_t u64(const std::string& s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) fail("invalid integer: " + s);
    return v;
  }

  double f64(const std::string& s) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) fail("invalid number: " + s);
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError("model file line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

CountTable read_counts(Reader& r, std::string_view name) {
  const std::uint64_t n = r.u64(r.field(name, 1)[0]);
  CountTable table;
  table.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto toks = r.tokens();
    if (toks.size() != 2) r.fail("expected '<key> <count>'");
    const FeatureKey key{r.u64(toks[0])};
    if (!table.emplace(key, r.u64(toks[1])).second) r.fail("duplicate key");
  }
  return table;
}

}  // namespace

void save_bundle(std::ostream& out, const ModelBundle& bundle) {
  const ModelSpec& spec = bundle.likelihood.spec();
  out << kMagic << ' ' << bundle.format_version << '\n';
  out << "mode " << mode_name(spec.mode) << '\n';
  out << "alpha " << format_double(spec.smoothing_alpha) << '\n';
  out << "features " << spec.features.enabled.to_string() << '\n';
  out << "click_cap " << spec.features.click_cap << '\n';
  out << "duration_cap " << spec.features.duration_cap << '\n';
  out << "feature_checksum " << hex64(spec.features.checksum()) << '\n';
  out << "t1 " << format_double(bundle.thresholds.t1) << '\n';
  out << "t2 " << format_double(bundle.thresholds.t2) << '\n';
  out << "category_bounds " << format_double(bundle.categories.low_max) << ' '
      << format_double(bundle.categories.medium_max) << '\n';
  out << "buy_counting " << buy_counting_name(bundle.popularity.counting()) << '\n';
  write_counts(out, "buy_counts", bundle.likelihood.buy_counts());
  write_counts(out, "nonbuy_counts", bundle.likelihood.nonbuy_counts());

  std::vector<std::pair<ItemId, ItemPopularity>> items(bundle.popularity.raw().begin(),
                                                       bundle.popularity.raw().end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  out << "popularity " << items.size() << '\n';
  for (const auto& [item, pop] : items) out << item << ' ' << pop.buys << ' ' << pop.clicks << '\n';
  out << "end\n";
  if (!out) throw IoError("failed to write model");
}

ModelBundle load_bundle(std::istream& in) {
  Reader r(in);
  const auto version = r.u64(r.field(kMagic, 1)[0]);
  if (version != kBundleFormatVersion) {
    throw FormatError("unsupported model format version " + std::to_string(version));
  }

  try {
    ModelSpec spec;
    spec.mode = parse_mode(r.field("mode", 1)[0]);
    spec.smoothing_alpha = r.f64(r.field("alpha", 1)[0]);
    spec.features.enabled = FeatureSet::parse(r.field("features", 1)[0]);
    spec.features.click_cap = static_cast<int>(r.u64(r.field("click_cap", 1)[0]));
    spec.features.duration_cap = static_cast<int>(r.u64(r.field("duration_cap", 1)[0]));
    const std::string checksum = r.field("feature_checksum", 1)[0];
    if (checksum != hex64(spec.features.checksum())) {
      r.fail("feature configuration checksum mismatch");
    }
    Thresholds thresholds;
    thresholds.t1 = r.f64(r.field("t1", 1)[0]);
    thresholds.t2 = r.f64(r.field("t2", 1)[0]);
    const auto bounds = r.field("category_bounds", 2);
    CategoryBounds categories{r.f64(bounds[0]), r.f64(bounds[1])};
    const BuyCounting counting = parse_buy_counting(r.field("buy_counting", 1)[0]);

    CountTable buy = read_counts(r, "buy_counts");
    CountTable nonbuy = read_counts(r, "nonbuy_counts");

    PopularityTable popularity(counting);
    const std::uint64_t n_items = r.u64(r.field("popularity", 1)[0]);
    for (std::uint64_t i = 0; i < n_items; ++i) {
      const auto toks = r.tokens();
      if (toks.size() != 3) r.fail("expected '<item> <buys> <clicks>'");
      const ItemId item = r.u64(toks[0]);
      if (popularity.raw().contains(item)) r.fail("duplicate item");
      popularity.add_buys(item, r.u64(toks[1]));
      popularity.add_clicks(item, r.u64(toks[2]));
    }
    if (r.tokens() != std::vector<std::string>{"end"}) r.fail("expected 'end'");

    thresholds.validate();
    categories.validate();
    return ModelBundle{LikelihoodModel(spec, std::move(buy), std::move(nonbuy)),
                       std::move(popularity), thresholds, categories,
                       static_cast<std::uint32_t>(version)};
  } catch (const ConfigError& e) {
    throw FormatError(std::string("invalid model configuration: ") + e.what());
  }
}

void save_bundle_file(const std::string& path, const ModelBundle& bundle) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file: " + path);
  save_bundle(out, bundle);
}

ModelBundle load_bundle_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);
  return load_bundle(in);
}

}  // namespace clickbuy
