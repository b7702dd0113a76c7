#include <cmath>
#include <set>

#include <doctest.h>

#include "newsent/eda.hpp"
#include "newsent/error.hpp"
#include "newsent/rng.hpp"
#include "newsent/sparse.hpp"
#include "support.hpp"

using namespace newsent;
using namespace newsent::eda;

namespace {

TokenSequence seq(std::initializer_list<const char*> tokens) {
  TokenSequence s;
  for (auto t : tokens) s.tokens.emplace_back(t);
  return s;
}

TokenSequence of_length(std::size_t n) {
  TokenSequence s;
  s.tokens.assign(n, "w");
  return s;
}

}  // namespace

TEST_CASE("top_frequencies") {
  CHECK(top_frequencies({seq({"a", "a", "b"})}, 1) == Ranked{{"a", 2}});
  CHECK(top_frequencies({}, 5).empty());
  auto tie = top_frequencies({seq({"c", "b", "a", "c", "d"})}, 3);
  CHECK(tie == Ranked{{"c", 2}, {"a", 1}, {"b", 1}});

  textprep::StopwordSet sw{"the"};
  CHECK(top_frequencies({seq({"the", "the", "x"})}, 5, true, &sw) == Ranked{{"x", 1}});
}

TEST_CASE("top_frequencies agrees with vocabulary counts") {
  Rng rng(2);
  std::vector<TokenSequence> corpus(40);
  for (auto& d : corpus)
    for (int k = 0; k < 7; ++k) d.tokens.push_back("t" + std::to_string(rng.below(15)));
  auto vocab = sparse::fit_vocabulary(corpus);
  auto ranked = top_frequencies(corpus, 1000);
  CHECK(ranked.size() == vocab.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    CHECK(ranked[i].second == vocab.word_counts.at(ranked[i].first));
    CHECK(vocab.index_of(ranked[i].first) == i + 1);
  }
}

TEST_CASE("percentiles and length summary") {
  std::vector<TokenSequence> corpus;
  for (std::size_t n = 1; n <= 100; ++n) corpus.push_back(of_length(n));
  auto s = sentence_length_summary(corpus);
  CHECK(s.at(10) == doctest::Approx(10.9));
  CHECK(s.at(90) == doctest::Approx(90.1));
  CHECK(s.at(50) == doctest::Approx(50.5));
  CHECK(s.outliers_low.size() == 10);
  CHECK(s.outliers_high.size() == 10);
  for (std::size_t k = 1; k < s.percentiles.size(); ++k) CHECK(s.percentiles[k - 1].second <= s.percentiles[k].second);

  std::vector<TokenSequence> constant(10, of_length(7));
  auto c = sentence_length_summary(constant);
  CHECK(c.outliers_low.empty());
  CHECK(c.outliers_high.empty());
  CHECK(c.skew.g1 == 0.0);
  CHECK(c.stddev == 0.0);

  auto one = sentence_length_summary({of_length(4)});
  for (const auto& [q, v] : one.percentiles) CHECK(v == 4.0);
  CHECK_THROWS_AS(sentence_length_summary({}), Error);
}

TEST_CASE("summary properties on random values") {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> v(5 + rng.below(40));
    for (auto& x : v) x = std::exp(rng.normal());
    auto s = summarize(v);
    CHECK(s.at(25) <= s.at(50));
    CHECK(s.at(50) <= s.at(75));
    std::set<std::size_t> low(s.outliers_low.begin(), s.outliers_low.end());
    for (auto i : s.outliers_high) CHECK(low.count(i) == 0);
    for (auto i : s.outliers_low) CHECK(v[i] < s.at(10));
    for (auto i : s.outliers_high) CHECK(v[i] > s.at(90));

    std::vector<double> moved(v), scaled(v);
    for (auto& x : moved) x += 17.5;
    for (auto& x : scaled) x *= 3.25;
    CHECK(skewness(moved).g1 == doctest::Approx(s.skew.g1).epsilon(1e-9));
    CHECK(skewness(scaled).g1 == doctest::Approx(s.skew.g1).epsilon(1e-9));
  }
}

TEST_CASE("skewness") {
  std::vector<double> sym{1, 2, 3, 4, 5};
  CHECK(skewness(sym).g1 == doctest::Approx(0.0));
  CHECK(skewness(sym).label == SkewLabel::ApproximatelyNormal);

  std::vector<double> right{1, 1, 1, 10};
  auto r = skewness(right);
  // mean 3.25; deviations -2.25 x3, 6.75; m2 = 15.1875, m3 = 68.34375
  CHECK(r.g1 == doctest::Approx(68.34375 / std::pow(15.1875, 1.5)));
  CHECK(r.g1 == doctest::Approx(2 / std::sqrt(3.0)));
  CHECK(r.g1 > 0.5);
  CHECK(r.label == SkewLabel::PositivelySkewed);

  std::vector<double> mirrored{-1, -1, -1, -10};
  auto m = skewness(mirrored);
  CHECK(m.g1 == -r.g1);
  CHECK(m.label == SkewLabel::NegativelySkewed);
  CHECK_THROWS_AS(skewness(std::vector<double>{}), Error);
  CHECK(to_string(SkewLabel::PositivelySkewed) == "positively_skewed");
}

TEST_CASE("sentiment_distribution") {
  std::vector<int> l{1, 1, 0};
  auto c = sentiment_distribution(l);
  CHECK(c.positive == 2);
  CHECK(c.negative == 1);
  CHECK(c.total() == 3);
  CHECK(sentiment_distribution(std::vector<int>{}).total() == 0);
  std::vector<int> bad{3};
  CHECK_THROWS_AS(sentiment_distribution(bad), Error);
}

TEST_CASE("stopword_share") {
  textprep::StopwordSet sw{"the", "a", "is"};
  auto s = stopword_share({seq({"the", "a"}), seq({"market", "rally"}), seq({"the", "market", "is", "up"}), seq({})},
                          sw);
  CHECK(s.counts == std::vector<std::size_t>{2, 0, 2, 0});
  CHECK(s.shares == std::vector<double>{1.0, 0.0, 0.5, 0.0});
  CHECK(s.summary.count == 4);
}

TEST_CASE("csv writers") {
  support::TempDir dir;
  write_frequencies_csv(dir / "f.csv", Ranked{{"a", 2}, {"b,c", 1}});
  CHECK(support::read_file(dir / "f.csv") == "token,count\na,2\n\"b,c\",1\n");
  write_lengths_csv(dir / "l.csv", {of_length(3), of_length(0)});
  CHECK(support::read_file(dir / "l.csv") == "document,length\n0,3\n1,0\n");
  write_sentiment_counts_csv(dir / "s.csv", SentimentCounts{1, 2, 3});
  CHECK(support::read_file(dir / "s.csv") == "label,count\n0,1\n1,2\n2,3\n");
}
