#include "newsent/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "newsent/csv.hpp"

namespace newsent::corpus {

namespace {

std::string normalize_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::int64_t> parse_volume(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc{} && ptr == s.data() + s.size()) return v;
  // Some exports write volume as "1234.0".
  auto d = parse_double(s);
  if (d && std::floor(*d) == *d && std::fabs(*d) < 9e18) return static_cast<std::int64_t>(*d);
  return std::nullopt;
}

std::size_t require_column(const csv::Table& t, const std::string& name,
                           const std::filesystem::path& path) {
  auto c = t.find_column(name);
  if (!c) throw Error(ErrorKind::Schema, "missing column '" + name + "'", path.string());
  return *c;
}

const std::string& cell(const csv::Row& row, std::size_t i) {
  static const std::string kEmpty;
  return i < row.size() ? row[i] : kEmpty;
}

}  // namespace

bool satisfies_invariants(const OhlcvBar& b) {
  return b.low <= std::min(b.open, b.close) && b.high >= std::max(b.open, b.close) && b.volume >= 0;
}

nlohmann::json LoadReport::to_json() const {
  return {{"rows_in", rows_in},
          {"rows_kept", rows_kept},
          {"dropped_missing", dropped_missing},
          {"dropped_duplicate", dropped_duplicate},
          {"dropped_invariant", dropped_invariant}};
}

LoadReport LoadReport::from_json(const nlohmann::json& j) {
  LoadReport r;
  r.rows_in = j.at("rows_in").get<std::size_t>();
  r.rows_kept = j.at("rows_kept").get<std::size_t>();
  r.dropped_missing = j.at("dropped_missing").get<std::size_t>();
  r.dropped_duplicate = j.at("dropped_duplicate").get<std::size_t>();
  r.dropped_invariant = j.at("dropped_invariant").get<std::size_t>();
  return r;
}

Loaded<HeadlineRecord> load_headlines(const std::filesystem::path& path,
                                      const HeadlineColumns& columns, const std::string& source) {
  auto table = csv::read_table(path);
  if (table.header.empty()) throw Error(ErrorKind::Schema, "file has no header row", path.string());
  const auto date_col = require_column(table, columns.date, path);
  const auto text_col = require_column(table, columns.text, path);
  std::optional<std::size_t> label_col;
  if (!columns.label.empty()) label_col = require_column(table, columns.label, path);

  Loaded<HeadlineRecord> out;
  std::set<std::pair<Date, std::string>> seen;
  for (const auto& row : table.rows) {
    ++out.report.rows_in;
    auto date = parse_date(cell(row, date_col));
    const std::string& text = cell(row, text_col);
    std::string key = normalize_whitespace(text);
    std::optional<int> label;
    if (label_col) {
      auto v = parse_double(cell(row, *label_col));
      if (v && (*v == 0.0 || *v == 1.0)) label = static_cast<int>(*v);
    }
    if (!date || key.empty() || (label_col && !label)) {
      ++out.report.dropped_missing;
      continue;
    }
    if (!seen.emplace(*date, key).second) {
      ++out.report.dropped_duplicate;
      continue;
    }
    out.records.push_back(HeadlineRecord{*date, text, source, label});
  }
  out.report.rows_kept = out.records.size();
  return out;
}

Loaded<OhlcvBar> load_ohlcv(const std::filesystem::path& path) {
  auto table = csv::read_table(path);
  if (table.header.empty()) throw Error(ErrorKind::EmptyDataset, "no parseable rows", path.string());
  const auto c_date = require_column(table, "Date", path);
  const auto c_open = require_column(table, "Open", path);
  const auto c_high = require_column(table, "High", path);
  const auto c_low = require_column(table, "Low", path);
  const auto c_close = require_column(table, "Close", path);
  const auto c_volume = require_column(table, "Volume", path);
  const auto c_adj = require_column(table, "Adj Close", path);
  const auto c_name = require_column(table, "Name", path);

  Loaded<OhlcvBar> out;
  std::set<std::pair<std::string, Date>> seen;
  for (const auto& row : table.rows) {
    ++out.report.rows_in;
    auto date = parse_date(cell(row, c_date));
    auto open = parse_double(cell(row, c_open));
    auto high = parse_double(cell(row, c_high));
    auto low = parse_double(cell(row, c_low));
    auto close = parse_double(cell(row, c_close));
    auto adj = parse_double(cell(row, c_adj));
    auto volume = parse_volume(cell(row, c_volume));
    std::string name(trim(cell(row, c_name)));
    if (!date || !open || !high || !low || !close || !adj || !volume || name.empty()) {
      ++out.report.dropped_missing;
      continue;
    }
    OhlcvBar bar{*date, *open, *high, *low, *close, *adj, *volume, name};
    if (!satisfies_invariants(bar)) {
      ++out.report.dropped_invariant;
      continue;
    }
    if (!seen.emplace(name, *date).second) {
      ++out.report.dropped_duplicate;
      continue;
    }
    out.records.push_back(std::move(bar));
  }
  if (out.records.empty()) throw Error(ErrorKind::EmptyDataset, "no parseable rows", path.string());
  std::stable_sort(out.records.begin(), out.records.end(), [](const OhlcvBar& a, const OhlcvBar& b) {
    if (a.name != b.name) return a.name < b.name;
    return a.date < b.date;
  });
  out.report.rows_kept = out.records.size();
  return out;
}

void write_headlines(const std::filesystem::path& path, const std::vector<HeadlineRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write file", path.string());
  bool labelled = std::any_of(records.begin(), records.end(), [](auto& r) { return r.label.has_value(); });
  csv::write_row(out, labelled ? csv::Row{"Date", "Title", "Source", "Label"}
                               : csv::Row{"Date", "Title", "Source"});
  for (const auto& r : records) {
    csv::Row row{r.date.iso(), r.text, r.source};
    if (labelled) row.push_back(r.label ? std::to_string(*r.label) : "");
    csv::write_row(out, row);
  }
}

void SplitSpec::validate() const {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "split fraction must be in (0,1)", "fraction");
  }
}

SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
  spec.validate();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "cannot split fewer than 2 records");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(spec.seed);
  rng.shuffle(std::span<std::size_t>(order));
  const auto n_val = static_cast<std::size_t>(std::llround(spec.fraction * static_cast<double>(n)));
  SplitIndices out;
  out.validation.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  out.train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
  std::sort(out.validation.begin(), out.validation.end());
  std::sort(out.train.begin(), out.train.end());
  return out;
}

}  // namespace newsent::corpus
