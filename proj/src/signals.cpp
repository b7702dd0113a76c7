#include "newsent/signals.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>

#include "newsent/csv.hpp"
#include "newsent/error.hpp"

namespace newsent::signals {

std::string_view to_string(Action a) {
  switch (a) {
    case Action::Buy: return "buy";
    case Action::Sell: return "sell";
    case Action::Hold: return "hold";
  }
  return "hold";
}

Action action_from_string(std::string_view s) {
  if (s == "buy") return Action::Buy;
  if (s == "sell") return Action::Sell;
  if (s == "hold") return Action::Hold;
  throw Error(ErrorKind::Parse, "unknown action '" + std::string(s) + "'");
}

Action decide(double compound, double theta) {
  if (!(theta >= 0)) throw Error(ErrorKind::InvalidArgument, "threshold must be non-negative", "theta");
  if (compound > theta) return Action::Buy;
  if (compound < -theta) return Action::Sell;
  return Action::Hold;
}

JoinResult join_signals(std::span<const ScoreEntry> scores, std::span<const corpus::OhlcvBar> bars, double theta) {
  std::map<std::pair<std::string, Date>, double> close;
  for (const auto& b : bars) close.emplace(std::make_pair(b.name, b.date), b.close);
  JoinResult r;
  r.records.reserve(scores.size());
  for (const auto& s : scores) {
    SignalRecord rec{s.date, s.ticker, s.compound, decide(s.compound, theta), std::nullopt};
    auto it = close.find({s.ticker, s.date});
    if (it != close.end()) {
      rec.close = it->second;
      ++r.matched;
    } else {
      ++r.unmatched;
    }
    r.records.push_back(std::move(rec));
  }
  return r;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

long day_number(const Date& d) {
  const int y = d.year - (d.month <= 2 ? 1 : 0);
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned mp = d.month > 2 ? d.month - 3 : d.month + 9;
  const unsigned doy = (153 * mp + 2) / 5 + d.day - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return static_cast<long>(era) * 146097 + static_cast<long>(doe);
}

constexpr double kWidth = 800, kHeight = 400, kMargin = 40;

}  // namespace

std::string render_svg(std::string_view ticker, std::span<const SignalRecord> records) {
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + coord(kWidth) + "\" height=\"" +
                    coord(kHeight) + "\" viewBox=\"0 0 " + coord(kWidth) + " " + coord(kHeight) + "\">\n";
  svg += "<title>" + xml_escape(ticker) + " signals</title>\n";
  if (records.empty()) return svg + "</svg>\n";

  long d_lo = day_number(records.front().date), d_hi = d_lo;
  double p_lo = 0, p_hi = 0;
  bool any_price = false;
  for (const auto& r : records) {
    d_lo = std::min(d_lo, day_number(r.date));
    d_hi = std::max(d_hi, day_number(r.date));
    if (r.close) {
      p_lo = any_price ? std::min(p_lo, *r.close) : *r.close;
      p_hi = any_price ? std::max(p_hi, *r.close) : *r.close;
      any_price = true;
    }
  }
  auto x_of = [&](const Date& d) {
    const double span = d_hi > d_lo ? static_cast<double>(d_hi - d_lo) : 1.0;
    return kMargin + (kWidth - 2 * kMargin) * static_cast<double>(day_number(d) - d_lo) / span;
  };
  auto y_of = [&](std::optional<double> p) {
    if (!p) return kHeight - kMargin;
    const double span = p_hi > p_lo ? p_hi - p_lo : 1.0;
    return kHeight - kMargin - (kHeight - 2 * kMargin) * (*p - p_lo) / span;
  };

  std::vector<const SignalRecord*> priced;
  for (const auto& r : records)
    if (r.close) priced.push_back(&r);
  std::stable_sort(priced.begin(), priced.end(), [](const auto* a, const auto* b) { return a->date < b->date; });
  if (!priced.empty()) {
    svg += "<polyline class=\"price\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < priced.size(); ++i) {
      if (i) svg += ' ';
      svg += coord(x_of(priced[i]->date)) + "," + coord(y_of(priced[i]->close));
    }
    svg += "\"/>\n";
  }
  for (const auto& r : records) {
    if (r.action == Action::Hold) continue;
    const bool buy = r.action == Action::Buy;
    svg += "<circle class=\"" + std::string(buy ? "buy" : "sell") + "\" cx=\"" + coord(x_of(r.date)) + "\" cy=\"" +
           coord(y_of(r.close)) + "\" r=\"4\" fill=\"" + (buy ? "#2e7d32" : "#c62828") + "\"/>\n";
  }
  return svg + "</svg>\n";
}

ChartFiles emit_chart_data(std::span<const SignalRecord> records, const std::filesystem::path& dir) {
  ChartFiles files;
  files.csv = dir / "signals.csv";
  {
    std::ofstream out(files.csv);
    if (!out) throw Error(ErrorKind::Io, "cannot write file", files.csv.string());
    out << "date,ticker,close,compound,action\n";
    for (const auto& r : records)
      csv::write_row(out, {r.date.iso(), r.ticker, r.close ? num(*r.close) : "", num(r.compound),
                           std::string(to_string(r.action))});
  }
  std::map<std::string, std::vector<SignalRecord>> by_ticker;
  for (const auto& r : records) by_ticker[r.ticker].push_back(r);
  for (const auto& [ticker, recs] : by_ticker) {
    auto path = dir / (ticker + "_signals.svg");
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write file", path.string());
    out << render_svg(ticker, recs);
    files.svgs.push_back(std::move(path));
  }
  return files;
}

std::vector<SignalRecord> read_signals_csv(const std::filesystem::path& path) {
  const auto table = csv::read_table(path);
  const char* names[] = {"date", "ticker", "close", "compound", "action"};
  std::size_t col[5];
  for (int i = 0; i < 5; ++i) {
    auto c = table.find_column(names[i]);
    if (!c) throw Error(ErrorKind::Schema, std::string("missing column '") + names[i] + "'", path.string());
    col[i] = *c;
  }
  std::vector<SignalRecord> out;
  std::size_t line = 1;
  for (const auto& row : table.rows) {
    ++line;
    const std::string where = path.string() + ":" + std::to_string(line);
    if (row.size() < table.header.size()) throw Error(ErrorKind::Parse, "short row", where);
    auto parse_num = [&](const std::string& s) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (s.empty() || *end != '\0') throw Error(ErrorKind::Parse, "not a number: '" + s + "'", where);
      return v;
    };
    SignalRecord r;
    auto d = parse_date(row[col[0]]);
    if (!d) throw Error(ErrorKind::Parse, "bad date '" + row[col[0]] + "'", where);
    r.date = *d;
    r.ticker = row[col[1]];
    if (!row[col[2]].empty()) r.close = parse_num(row[col[2]]);
    r.compound = parse_num(row[col[3]]);
    r.action = action_from_string(row[col[4]]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace newsent::signals
