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

// Turnstile stream model: items, updates, dense frequency vectors and the
// brute-force missing-item oracle every other module is tested against.

#ifndef MIF_STREAM_H_
#define MIF_STREAM_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mif {

// 1-based item identifier in the universe [n].
struct ItemId {
  std::int64_t value = 0;

  constexpr ItemId() = default;
  constexpr explicit ItemId(std::int64_t v) : value(v) {}

  // 0-based position, used for internal array indexing.
  constexpr std::size_t index() const { return static_cast<std::size_t>(value - 1); }
  static constexpr ItemId FromIndex(std::size_t i) {
    return ItemId(static_cast<std::int64_t>(i) + 1);
  }

  friend constexpr auto operator<=>(ItemId, ItemId) = default;
};

// Throws std::out_of_range unless 1 <= item <= n.
void CheckItem(ItemId item, std::int64_t n);

struct Update {
  ItemId item;
  std::int64_t delta = 0;
};

// Result of a sampler or MIF query: a (claimed) item with a signed frequency
// estimate, or FAIL.
class QueryResult {
 public:
  struct Item {
    ItemId item;
    std::int64_t estimate = 0;
    friend bool operator==(const Item&, const Item&) = default;
  };
  struct Fail {
    friend bool operator==(const Fail&, const Fail&) = default;
  };

  QueryResult() : value_(Fail{}) {}
  static QueryResult Of(ItemId item, std::int64_t estimate) {
    return QueryResult(Item{item, estimate});
  }
  static QueryResult Failed() { return QueryResult(Fail{}); }

  bool failed() const { return std::holds_alternative<Fail>(value_); }
  explicit operator bool() const { return !failed(); }
  ItemId item() const { return std::get<Item>(value_).item; }
  std::int64_t estimate() const { return std::get<Item>(value_).estimate; }

  friend bool operator==(const QueryResult&, const QueryResult&) = default;

 private:
  explicit QueryResult(std::variant<Item, Fail> v) : value_(v) {}
  std::variant<Item, Fail> value_;
};

std::string ToString(const QueryResult& r);

// Dense signed frequency vector over a fixed universe [n].
class FrequencyVector {
 public:
  FrequencyVector() = default;
  explicit FrequencyVector(std::int64_t n, std::int64_t initial = 0);
  explicit FrequencyVector(std::vector<std::int64_t> counts);

  // The state after feeding (i, -1) for every i in [n].
  static FrequencyVector Offset(std::int64_t n) { return FrequencyVector(n, -1); }

  std::int64_t n() const { return static_cast<std::int64_t>(f_.size()); }
  std::int64_t operator[](ItemId item) const { return f_[item.index()]; }
  std::span<const std::int64_t> counts() const { return f_; }

  // Throws std::out_of_range on an item outside [1, n].
  void Apply(const Update& u);

  std::int64_t L1Norm() const;
  std::int64_t NetSum() const;

  friend bool operator==(const FrequencyVector&, const FrequencyVector&) = default;

 private:
  std::vector<std::int64_t> f_;
};

FrequencyVector ApplyUpdate(FrequencyVector fv, const Update& u);
std::int64_t L1Norm(const FrequencyVector& fv);
std::int64_t NetSum(const FrequencyVector& fv);

// Initialization offset plus one unit insertion per stream element.
FrequencyVector OffsetFrequencies(std::int64_t n, std::span<const ItemId> stream);

// Sorted list of the items of [n] that appear nowhere in `stream`.
std::vector<ItemId> MissingItems(std::int64_t n, std::span<const ItemId> stream);

// Replay file: newline-separated decimal 1-based ids, blank lines ignored,
// optional `n=<int>` header on the first non-blank line.
struct StreamFile {
  std::optional<std::int64_t> n;
  std::vector<ItemId> items;
};

StreamFile ParseStream(const std::string& text);
StreamFile ReadStreamFile(const std::filesystem::path& path);
std::string FormatStream(const StreamFile& file);

}  // namespace mif

#endif  // MIF_STREAM_H_
