#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "newsent/date.hpp"
#include "newsent/error.hpp"
#include "newsent/rng.hpp"

namespace newsent::corpus {

struct HeadlineRecord {
  Date date;
  std::string text;
  std::string source;
  // Present only when a label column was requested at load time.
  std::optional<int> label;

  bool operator==(const HeadlineRecord&) const = default;
};

struct OhlcvBar {
  Date date;
  double open = 0, high = 0, low = 0, close = 0, adj_close = 0;
  std::int64_t volume = 0;
  std::string name;

  bool operator==(const OhlcvBar&) const = default;
};

bool satisfies_invariants(const OhlcvBar& bar);

// rows_in == rows_kept + dropped_missing + dropped_duplicate + dropped_invariant
struct LoadReport {
  std::size_t rows_in = 0;
  std::size_t rows_kept = 0;
  std::size_t dropped_missing = 0;
  std::size_t dropped_duplicate = 0;
  std::size_t dropped_invariant = 0;

  std::size_t dropped() const { return dropped_missing + dropped_duplicate + dropped_invariant; }
  nlohmann::json to_json() const;
  static LoadReport from_json(const nlohmann::json& j);
  bool operator==(const LoadReport&) const = default;
};

template <class T>
struct Loaded {
  std::vector<T> records;
  LoadReport report;
};

struct HeadlineColumns {
  std::string date = "Date";
  std::string text = "Title";
  // Optional 0/1 label column. Rows with a label outside {0,1} count as missing.
  std::string label;
};

Loaded<HeadlineRecord> load_headlines(const std::filesystem::path& path,
                                      const HeadlineColumns& columns,
                                      const std::string& source);

inline Loaded<HeadlineRecord> load_headlines(const std::filesystem::path& path,
                                             const std::string& date_column,
                                             const std::string& text_column,
                                             const std::string& source) {
  return load_headlines(path, HeadlineColumns{date_column, text_column, {}}, source);
}

Loaded<OhlcvBar> load_ohlcv(const std::filesystem::path& path);

void write_headlines(const std::filesystem::path& path, const std::vector<HeadlineRecord>& records);

struct SplitSpec {
  double fraction = 0.2;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

// |validation| = round(fraction * n); indices within each part ascending.
SplitIndices split_indices(std::size_t n, const SplitSpec& spec);

template <class T>
std::pair<std::vector<T>, std::vector<T>> split(const std::vector<T>& records, const SplitSpec& spec) {
  auto idx = split_indices(records.size(), spec);
  std::pair<std::vector<T>, std::vector<T>> out;
  out.first.reserve(idx.train.size());
  out.second.reserve(idx.validation.size());
  for (auto i : idx.train) out.first.push_back(records[i]);
  for (auto i : idx.validation) out.second.push_back(records[i]);
  return out;
}

}  // namespace newsent::corpus
