#include <doctest.h>

#include "newsent/error.hpp"
#include "newsent/rng.hpp"
#include "newsent/signals.hpp"
#include "support.hpp"

using namespace newsent;
using namespace newsent::signals;

namespace {

constexpr const char* kGreen = "fill=\"#2e7d32\"";
constexpr const char* kRed = "fill=\"#c62828\"";

corpus::OhlcvBar bar(Date d, const std::string& name, double close) {
  return corpus::OhlcvBar{d, close, close + 1, close - 1, close, close, 100, name};
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("decide") {
  CHECK(decide(0.788) == Action::Buy);
  CHECK(decide(-0.77) == Action::Sell);
  CHECK(decide(0.0) == Action::Hold);
  CHECK(decide(0.04, 0.05) == Action::Hold);
  CHECK(decide(0.05, 0.05) == Action::Hold);
  CHECK_THROWS_AS(decide(0.3, -0.1), Error);
  CHECK(action_from_string(to_string(Action::Sell)) == Action::Sell);
}

TEST_CASE("decide is monotone and mirror-symmetric") {
  auto rank = [](Action a) { return a == Action::Sell ? 0 : a == Action::Hold ? 1 : 2; };
  Rng rng(3);
  for (int t = 0; t < 2000; ++t) {
    const double theta = rng.uniform(0, 0.3);
    const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
    if (a >= b) CHECK(rank(decide(a, theta)) >= rank(decide(b, theta)));
    if (a != 0) CHECK(rank(decide(-a, theta)) == 2 - rank(decide(a, theta)));
  }
}

TEST_CASE("join_signals") {
  std::vector<corpus::OhlcvBar> bars{bar({2021, 1, 4}, "ABC", 10), bar({2021, 1, 5}, "ABC", 11),
                                     bar({2021, 1, 4}, "XYZ", 50)};
  std::vector<ScoreEntry> one{{{2021, 1, 5}, "ABC", 0.6}};
  auto j = join_signals(one, bars);
  REQUIRE(j.records.size() == 1);
  CHECK(j.records[0].close == 11.0);
  CHECK(j.records[0].action == Action::Buy);
  CHECK(j.matched == 1);

  std::vector<ScoreEntry> miss{{{2021, 1, 6}, "ABC", -0.4}, {{2021, 1, 4}, "XYZ", 0.0}, {{2021, 1, 4}, "QQQ", 0.2}};
  auto k = join_signals(miss, bars);
  CHECK(k.records.size() == 3);
  CHECK_FALSE(k.records[0].close);
  CHECK(k.records[1].close == 50.0);
  CHECK(k.unmatched == 2);
  CHECK(k.matched + k.unmatched == miss.size());

  Rng rng(5);
  std::vector<ScoreEntry> many;
  for (int i = 0; i < 300; ++i)
    many.push_back({{2021, 1, static_cast<unsigned>(1 + rng.below(10))}, rng.below(2) ? "ABC" : "XYZ", rng.uniform(-1, 1)});
  auto m = join_signals(many, bars, 0.1);
  REQUIRE(m.records.size() == many.size());
  for (std::size_t i = 0; i < many.size(); ++i) {
    CHECK(m.records[i].date == many[i].date);
    CHECK(m.records[i].compound == many[i].compound);
    CHECK(m.records[i].action == decide(many[i].compound, 0.1));
  }
}

TEST_CASE("emit_chart_data") {
  support::TempDir dir;
  auto empty = emit_chart_data(std::vector<SignalRecord>{}, dir.path());
  CHECK(support::read_file(empty.csv) == "date,ticker,close,compound,action\n");
  CHECK(read_signals_csv(empty.csv).empty());
  const auto canvas = render_svg("ABC", std::vector<SignalRecord>{});
  CHECK(canvas.find("<svg") != std::string::npos);
  CHECK(count_of(canvas, "<circle") == 0);

  std::vector<SignalRecord> recs{{{2021, 1, 4}, "ABC", 0.5, Action::Buy, 10.25},
                                 {{2021, 1, 5}, "ABC", 0.0, Action::Hold, 11.0},
                                 {{2021, 1, 6}, "ABC", -0.3, Action::Sell, std::nullopt}};
  support::TempDir out;
  auto files = emit_chart_data(recs, out.path());
  REQUIRE(files.svgs.size() == 1);
  CHECK(files.svgs[0].filename() == "ABC_signals.svg");
  const auto svg = support::read_file(files.svgs[0]);
  CHECK(count_of(svg, "<circle") == 2);
  CHECK(count_of(svg, "class=\"buy\"") == 1);
  CHECK(count_of(svg, "class=\"sell\"") == 1);
  CHECK(count_of(svg, "class=\"buy\" cx=") == 1);
  CHECK(svg.find("class=\"buy\"") < svg.find(kGreen));
  CHECK(count_of(svg, kGreen) == 1);
  CHECK(count_of(svg, kRed) == 1);

  const auto csv = support::read_file(files.csv);
  CHECK(count_of(csv, "\n") == 4);
  CHECK(read_signals_csv(files.csv) == recs);
}

TEST_CASE("csv round-trip keeps full precision") {
  Rng rng(8);
  std::vector<SignalRecord> recs;
  for (int i = 0; i < 50; ++i) {
    const double c = rng.uniform(-1, 1);
    recs.push_back({{2020, 2, static_cast<unsigned>(1 + i % 28)}, i % 3 ? "T1" : "T,2", c, decide(c, 0.05),
                    i % 4 ? std::optional<double>(rng.uniform(1, 1000)) : std::nullopt});
  }
  support::TempDir dir;
  auto files = emit_chart_data(recs, dir.path());
  CHECK(files.svgs.size() == 2);
  CHECK(read_signals_csv(files.csv) == recs);
}
