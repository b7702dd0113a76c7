#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "newsent/corpus.hpp"
#include "newsent/date.hpp"

namespace newsent::signals {

enum class Action { Buy, Sell, Hold };

std::string_view to_string(Action a);
Action action_from_string(std::string_view s);

// Buy when compound > theta, Sell when compound < -theta, otherwise Hold.
// Throws InvalidArgument for theta < 0.
Action decide(double compound, double theta = 0.0);

struct ScoreEntry {
  Date date;
  std::string ticker;
  double compound = 0;
};

struct SignalRecord {
  Date date;
  std::string ticker;
  double compound = 0;
  Action action = Action::Hold;
  std::optional<double> close;

  bool operator==(const SignalRecord&) const = default;
};

struct JoinResult {
  std::vector<SignalRecord> records;  // one per score, input order
  std::size_t matched = 0;
  std::size_t unmatched = 0;
};

// Exact (date, ticker) match; unmatched scores keep an empty close.
JoinResult join_signals(std::span<const ScoreEntry> scores, std::span<const corpus::OhlcvBar> bars,
                        double theta = 0.0);

// Standalone SVG: close-price polyline plus a green (buy) or red (sell)
// marker per non-Hold record. Empty input gives an empty canvas.
std::string render_svg(std::string_view ticker, std::span<const SignalRecord> records);

struct ChartFiles {
  std::filesystem::path csv;
  std::vector<std::filesystem::path> svgs;
};

// Writes <dir>/signals.csv (date,ticker,close,compound,action) and one
// <dir>/<ticker>_signals.svg per ticker present in `records`.
ChartFiles emit_chart_data(std::span<const SignalRecord> records, const std::filesystem::path& dir);

std::vector<SignalRecord> read_signals_csv(const std::filesystem::path& path);

}  // namespace newsent::signals
