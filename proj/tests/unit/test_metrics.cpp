#include <algorithm>

#include <doctest.h>

#include "newsent/error.hpp"
#include "newsent/metrics.hpp"
#include "newsent/rng.hpp"

using namespace newsent;
using namespace newsent::metrics;

namespace {

std::pair<std::vector<int>, std::vector<int>> fixture() {
  // TP=3, FP=1, FN=2, TN=4
  std::vector<int> t{1, 1, 1, 0, 1, 1, 0, 0, 0, 0};
  std::vector<int> p{1, 1, 1, 1, 0, 0, 0, 0, 0, 0};
  return {t, p};
}

}  // namespace

TEST_CASE("confusion_matrix") {
  std::vector<int> y{0, 1, 1, 0};
  auto perfect = confusion_matrix(y, y);
  CHECK(perfect.fp() == 0);
  CHECK(perfect.fn() == 0);
  std::vector<int> wrong{1, 0, 0, 1};
  auto all_wrong = confusion_matrix(y, wrong);
  CHECK(all_wrong.tp() == 0);
  CHECK(all_wrong.tn() == 0);

  auto [t, p] = fixture();
  auto c = confusion_matrix(t, p);
  CHECK(c.tp() == 3);
  CHECK(c.fp() == 1);
  CHECK(c.fn() == 2);
  CHECK(c.tn() == 4);
  CHECK(c.total() == 10);

  std::vector<int> bad{0, 2};
  std::vector<int> two{0, 1};
  CHECK_THROWS_AS(confusion_matrix(bad, two), Error);
  CHECK_THROWS_AS(confusion_matrix(y, two), Error);
}

TEST_CASE("report on the fixture") {
  auto [t, p] = fixture();
  auto r = report(t, p);
  CHECK(r.positive.precision == doctest::Approx(0.75));
  CHECK(r.positive.recall == doctest::Approx(0.6));
  CHECK(r.positive.f1 == doctest::Approx(2 * 0.75 * 0.6 / 1.35));
  CHECK(r.positive.f1 == doctest::Approx(0.667).epsilon(1e-3));
  CHECK(r.negative.precision == doctest::Approx(4.0 / 6.0));
  CHECK(r.negative.recall == doctest::Approx(0.8));
  CHECK(r.accuracy == doctest::Approx(0.7));
  CHECK(r.positive.support == 5);
  CHECK(r.negative.support == 5);
  CHECK(r.macro_f1 == doctest::Approx((r.positive.f1 + r.negative.f1) / 2));

  auto j = r.to_json();
  CHECK(j["confusion"] == nlohmann::json::array({{4, 1}, {2, 3}}));
  const auto text = r.to_text();
  for (const char* s : {"precision", "recall", "f1-score", "support", "accuracy", "macro avg"})
    CHECK(text.find(s) != std::string::npos);
}

TEST_CASE("degenerate single-class report") {
  std::vector<int> y{1, 1, 1};
  auto r = report(y, y);
  CHECK(r.positive.precision == 1.0);
  CHECK(r.positive.recall == 1.0);
  CHECK(r.positive.f1 == 1.0);
  CHECK(r.negative.precision == 0.0);
  CHECK(r.negative.precision_undefined);
  CHECK(r.negative.recall_undefined);
  CHECK(r.negative.f1_undefined);
  CHECK(r.accuracy == 1.0);

  auto empty = report(std::vector<int>{}, std::vector<int>{});
  CHECK(empty.accuracy == 0.0);
  CHECK(empty.accuracy_undefined);
}

TEST_CASE("report properties on random instances") {
  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = 1 + rng.below(30);
    std::vector<int> t(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = static_cast<int>(rng.below(2));
      p[i] = static_cast<int>(rng.below(2));
    }
    auto r = report(t, p);
    for (const auto* s : {&r.positive, &r.negative}) {
      for (double v : {s->precision, s->recall, s->f1}) CHECK((v >= 0 && v <= 1));
      if (s->precision > 0 && s->recall > 0) {
        CHECK(s->f1 <= std::max(s->precision, s->recall) + 1e-15);
        CHECK(s->f1 >= std::min(s->precision, s->recall) - 1e-15);
      }
    }
    CHECK(r.confusion.total() == n);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(std::span(order));
    std::vector<int> t2(n), p2(n);
    for (std::size_t i = 0; i < n; ++i) t2[i] = t[order[i]], p2[i] = p[order[i]];
    auto r2 = report(t2, p2);
    CHECK(r2.to_json() == r.to_json());
  }
}
