// Copyright 2026 The mifstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mif/stream.h"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mif {

void CheckItem(ItemId item, std::int64_t n) {
  if (item.value < 1 || item.value > n) {
    throw std::out_of_range("item " + std::to_string(item.value) +
                            " outside universe [1, " + std::to_string(n) + "]");
  }
}

std::string ToString(const QueryResult& r) {
  if (r.failed()) return "FAIL";
  return std::to_string(r.item().value) + ":" + std::to_string(r.estimate());
}

FrequencyVector::FrequencyVector(std::int64_t n, std::int64_t initial) {
  if (n < 0) throw std::invalid_argument("universe size must be nonnegative");
  f_.assign(static_cast<std::size_t>(n), initial);
}

FrequencyVector::FrequencyVector(std::vector<std::int64_t> counts)
    : f_(std::move(counts)) {}

void FrequencyVector::Apply(const Update& u) {
  CheckItem(u.item, n());
  f_[u.item.index()] += u.delta;
}

std::int64_t FrequencyVector::L1Norm() const {
  std::int64_t total = 0;
  for (auto x : f_) total += std::abs(x);
  return total;
}

std::int64_t FrequencyVector::NetSum() const {
  std::int64_t total = 0;
  for (auto x : f_) total += x;
  return total;
}

FrequencyVector ApplyUpdate(FrequencyVector fv, const Update& u) {
  fv.Apply(u);
  return fv;
}

std::int64_t L1Norm(const FrequencyVector& fv) { return fv.L1Norm(); }
std::int64_t NetSum(const FrequencyVector& fv) { return fv.NetSum(); }

FrequencyVector OffsetFrequencies(std::int64_t n, std::span<const ItemId> stream) {
  auto fv = FrequencyVector::Offset(n);
  for (auto item : stream) fv.Apply({item, +1});
  return fv;
}

std::vector<ItemId> MissingItems(std::int64_t n, std::span<const ItemId> stream) {
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (auto item : stream) {
    CheckItem(item, n);
    seen[item.index()] = true;
  }
  std::vector<ItemId> missing;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) missing.push_back(ItemId::FromIndex(i));
  }
  return missing;
}

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::int64_t ParseInt(std::string_view s, std::size_t line_no) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("stream line " + std::to_string(line_no) +
                                ": not an integer: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

StreamFile ParseStream(const std::string& text) {
  StreamFile file;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = Trim(raw);
    if (line.empty()) continue;
    if (first && line.starts_with("n=")) {
      file.n = ParseInt(Trim(line.substr(2)), line_no);
      if (*file.n < 1) throw std::invalid_argument("stream header: n must be >= 1");
      first = false;
      continue;
    }
    first = false;
    const ItemId item(ParseInt(line, line_no));
    if (item.value < 1 || (file.n && item.value > *file.n)) {
      throw std::out_of_range("stream line " + std::to_string(line_no) +
                              ": item " + std::to_string(item.value) +
                              " out of range");
    }
    file.items.push_back(item);
  }
  return file;
}

StreamFile ReadStreamFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stream file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseStream(buf.str());
}

std::string FormatStream(const StreamFile& file) {
  std::string out;
  if (file.n) out += "n=" + std::to_string(*file.n) + "\n";
  for (auto item : file.items) out += std::to_string(item.value) + "\n";
  return out;
}

}  // namespace mif
