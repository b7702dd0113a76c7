#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>
#include <doctest.h>

#include "newsent/embeddings.hpp"
#include "newsent/error.hpp"
#include "newsent/rng.hpp"
#include "support.hpp"

using namespace newsent;
using namespace newsent::embed;

namespace {

EmbeddingMatrix toy_matrix() {
  EmbeddingMatrix m(3);
  const double rows[][3] = {{1, 0, 0}, {0.9, 0.1, 0}, {0, 1, 0}, {-1, 0, 0.2}, {0.5, 0.5, 0.5}};
  const char* names[] = {"alpha", "beta", "gamma", "delta", "eps"};
  for (int i = 0; i < 5; ++i) m.add_row(names[i], rows[i]);
  return m;
}

TokenSequence seq(std::initializer_list<const char*> tokens) {
  TokenSequence s;
  for (auto t : tokens) s.tokens.emplace_back(t);
  return s;
}

// Brute-force n-gram oracle over code points.
std::set<std::string> ngram_oracle(const std::string& word, std::size_t minn, std::size_t maxn) {
  std::vector<std::string> cps;
  const std::string wrapped = "<" + word + ">";
  for (std::size_t i = 0; i < wrapped.size();) {
    std::size_t len = 1;
    const auto c = static_cast<unsigned char>(wrapped[i]);
    if (c >= 0xF0) len = 4;
    else if (c >= 0xE0) len = 3;
    else if (c >= 0xC0) len = 2;
    cps.push_back(wrapped.substr(i, len));
    i += len;
  }
  std::set<std::string> out{wrapped};
  for (std::size_t n = minn; n <= maxn; ++n)
    for (std::size_t s = 0; s + n <= cps.size(); ++s) {
      std::string g;
      for (std::size_t k = s; k < s + n; ++k) g += cps[k];
      out.insert(g);
    }
  return out;
}

std::vector<TokenSequence> topic_corpus(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<TokenSequence> out(n);
  for (auto& s : out) {
    const char* prefix = rng.below(2) ? "m" : "s";
    for (int k = 0; k < 8; ++k) s.tokens.push_back(prefix + std::to_string(rng.below(6)));
  }
  return out;
}

double cluster_gap(const EmbeddingMatrix& m) {
  double within = 0, across = 0;
  std::size_t nw = 0, na = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.rows(); ++j) {
      const double s = cosine_similarity(m.row(i), m.row(j));
      if (m.tokens()[i][0] == m.tokens()[j][0]) within += s, ++nw;
      else across += s, ++na;
    }
  return within / nw - across / na;
}

}  // namespace

TEST_CASE("EmbeddingMatrix rows and lookups") {
  auto m = toy_matrix();
  CHECK(m.rows() == 5);
  CHECK(m.find("gamma") == 2u);
  CHECK_FALSE(m.find("zeta"));
  CHECK(m.at("beta")[0] == 0.9);
  const double dup[] = {0, 0, 1};
  CHECK_THROWS_AS(m.add_row("alpha", dup), Error);
  const double short_row[] = {0, 0};
  CHECK_THROWS_AS(m.add_row("zeta", short_row), Error);
  CHECK_THROWS_AS(m.at("zeta"), Error);
}

TEST_CASE("cosine_similarity") {
  const std::vector<double> v{1, 2, 3}, neg{-1, -2, -3}, a{1, 0}, b{0, 5}, zero{0, 0, 0};
  CHECK(cosine_similarity(v, v) == doctest::Approx(1.0));
  CHECK(cosine_similarity(a, b) == 0.0);
  CHECK(cosine_similarity(v, neg) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(cosine_similarity(v, zero), Error);
  CHECK_THROWS_AS(cosine_similarity(v, a), Error);

  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(6), y(6), sx(6);
    for (auto& e : x) e = rng.normal();
    for (auto& e : y) e = rng.normal();
    const double lambda = rng.uniform(0.1, 10);
    for (int k = 0; k < 6; ++k) sx[k] = lambda * x[k];
    CHECK(cosine_similarity(x, y) == doctest::Approx(cosine_similarity(y, x)).epsilon(1e-14));
    CHECK(cosine_similarity(sx, y) == doctest::Approx(cosine_similarity(x, y)).epsilon(1e-12));
    const double c = cosine_similarity(x, y);
    CHECK((c >= -1 && c <= 1));
  }
}

TEST_CASE("most_similar against an exhaustive oracle") {
  auto m = toy_matrix();
  CHECK(most_similar("alpha", m, 0).empty());
  for (const auto& q : m.tokens()) {
    auto got = most_similar(q, m, 10);
    CHECK(got.size() == 4);
    Ranked oracle;
    for (const auto& t : m.tokens())
      if (t != q) oracle.emplace_back(t, cosine_similarity(m.at(q), m.at(t)));
    std::sort(oracle.begin(), oracle.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    REQUIRE(got.size() == oracle.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
      CHECK(got[k].first == oracle[k].first);
      CHECK(got[k].second == doctest::Approx(oracle[k].second));
    }
  }
}

TEST_CASE("analogy") {
  auto m = toy_matrix();
  auto cancel = analogy("alpha", "alpha", "gamma", m, 3);
  const std::string excl[] = {"alpha", "gamma"};
  auto near = nearest(m.at("gamma"), m, 3, excl);
  REQUIRE(cancel.size() == near.size());
  for (std::size_t k = 0; k < near.size(); ++k) CHECK(cancel[k].first == near[k].first);

  auto r = analogy("beta", "alpha", "gamma", m, 10);
  for (const auto& [t, s] : r) {
    CHECK(t != "alpha");
    CHECK(t != "beta");
    CHECK(t != "gamma");
  }
}

TEST_CASE("sgns pair gradient matches finite differences") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> w(8), c(8);
    for (auto& e : w) e = rng.normal() * 0.7;
    for (auto& e : c) e = rng.normal() * 0.7;
    const int label = trial % 2;
    const double g = sgns_pair_coefficient(w, c, label);
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double eps = 1e-6;
      auto wp = w, wm = w;
      wp[k] += eps;
      wm[k] -= eps;
      const double num = (sgns_pair_objective(wp, c, label) - sgns_pair_objective(wm, c, label)) / (2 * eps);
      const double ana = g * c[k];
      CHECK(std::abs(ana - num) / std::max({std::abs(ana), std::abs(num), 1e-3}) < 1e-4);
    }
  }
}

TEST_CASE("train_word2vec_sgns shape, determinism and clusters") {
  auto corpus = topic_corpus(300, 2);
  SgnsConfig cfg;
  cfg.dim = 100;
  cfg.epochs = 5;
  cfg.seed = 3;
  auto a = train_word2vec_sgns(corpus, cfg);
  CHECK(a.rows() == 12);
  CHECK(a.dim() == 100);
  for (double x : a.data()) CHECK(std::isfinite(x));
  CHECK(train_word2vec_sgns(corpus, cfg) == a);
  CHECK(cluster_gap(a) > 0.2);

  CHECK_THROWS_AS(train_word2vec_sgns({seq({"x", "x", "x"})}, cfg), Error);
}

TEST_CASE("char_ngrams") {
  auto g = char_ngrams("orange");
  CHECK(g.size() == 19);
  for (const char* s : {"<or", "ora", "nge>", "<orange>", "<orang", "range>"})
    CHECK(std::find(g.begin(), g.end(), s) != g.end());
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(char_ngrams("a") == std::vector<std::string>{"<a>"});
  CHECK(char_ngrams("x", 4, 6) == std::vector<std::string>{"<x>"});

  Rng rng(7);
  const std::vector<std::string> alphabet{"a", "b", "c", "é", "ß", "z", "q", "日"};
  for (int t = 0; t < 200; ++t) {
    std::string w;
    const auto len = 1 + rng.below(9);
    for (std::size_t k = 0; k < len; ++k) w += alphabet[rng.below(alphabet.size())];
    const std::size_t minn = 1 + rng.below(4), maxn = minn + rng.below(4);
    auto oracle = ngram_oracle(w, minn, maxn);
    auto got = char_ngrams(w, minn, maxn);
    CHECK(std::set<std::string>(got.begin(), got.end()) == oracle);
    CHECK(got.size() == oracle.size());
  }
}

TEST_CASE("fnv1a_32 reference values") {
  CHECK(fnv1a_32("") == 0x811c9dc5u);
  CHECK(fnv1a_32("a") == 0xe40c292cu);
  CHECK(fnv1a_32("foobar") == 0xbf9cf968u);
}

TEST_CASE("fasttext_word_vector is the exact n-gram sum") {
  auto zero = SubwordTable::zeros(5, 97);
  for (double x : fasttext_word_vector("orange", zero)) CHECK(x == 0.0);

  auto t = SubwordTable::zeros(5, 97);
  Rng rng(3);
  for (auto& x : t.buckets) x = rng.normal();
  auto single = fasttext_word_vector("a", t);
  auto b = t.bucket(t.bucket_of("<a>"));
  CHECK(std::equal(single.begin(), single.end(), b.begin(), b.end()));

  for (const char* w : {"orange", "market", "oov-word", "é"}) {
    std::vector<double> oracle(5, 0.0);
    for (const auto& g : char_ngrams(w)) {
      auto row = t.bucket(t.bucket_of(g));
      for (int k = 0; k < 5; ++k) oracle[k] += row[k];
    }
    CHECK(fasttext_word_vector(w, t) == oracle);
  }
}

TEST_CASE("train_fasttext shape, determinism and clusters") {
  auto corpus = topic_corpus(300, 4);
  FastTextConfig cfg;
  cfg.dim = 24;
  cfg.bucket_count = 4096;
  cfg.epochs = 5;
  cfg.seed = 9;
  auto t = train_fasttext(corpus, cfg);
  CHECK(t.buckets.size() == 4096u * 24u);
  CHECK(t.minn == 3);
  CHECK(t.maxn == 6);
  CHECK(t.hash_function == "fnv1a-32");
  CHECK(train_fasttext(corpus, cfg).buckets == t.buckets);

  std::vector<std::string> words;
  for (const char* p : {"m", "s"})
    for (int k = 0; k < 6; ++k) words.push_back(p + std::to_string(k));
  auto m = subword_matrix(t, words);
  CHECK(m.rows() == 12);
  CHECK(cluster_gap(m) > 0.2);
}

TEST_CASE("build_cooccurrence") {
  auto x = build_cooccurrence({seq({"a", "b"})}, 2);
  REQUIRE(x.tokens.size() == 2);
  CHECK(x.cells.size() == 2);
  CHECK(x.cells.at({0, 1}) == 1.0);
  CHECK(x.cells.at({1, 0}) == 1.0);
  CHECK(x.symmetric);

  auto far = build_cooccurrence({seq({"a", "b", "c"})}, 2);
  auto ia = std::find(far.tokens.begin(), far.tokens.end(), "a") - far.tokens.begin();
  auto ic = std::find(far.tokens.begin(), far.tokens.end(), "c") - far.tokens.begin();
  CHECK(far.cells.at({static_cast<std::uint32_t>(ia), static_cast<std::uint32_t>(ic)}) == 0.5);

  CHECK(build_cooccurrence({}, 5).cells.empty());

  auto corpus = topic_corpus(50, 1);
  const double total = build_cooccurrence(corpus, 3).total();
  std::reverse(corpus.begin(), corpus.end());
  Rng rng(2);
  rng.shuffle(std::span(corpus));
  CHECK(build_cooccurrence(corpus, 3).total() == doctest::Approx(total).epsilon(1e-12));

  auto table = build_cooccurrence(corpus, 3);
  for (const auto& [ij, v] : table.cells) {
    CHECK(v > 0);
    CHECK(table.cells.at({ij.second, ij.first}) == v);
  }
}

TEST_CASE("glove weighting") {
  CHECK(glove_weight(100, 100, 0.75) == 1.0);
  CHECK(glove_weight(250, 100, 0.75) == 1.0);
  double prev = 0;
  for (double x = 0.5; x < 100; x += 0.5) {
    const double f = glove_weight(x, 100, 0.75);
    CHECK(f > prev);
    CHECK(f < 1.0);
    prev = f;
  }
}

TEST_CASE("glove loss is non-increasing and matches a direct evaluation") {
  auto x = build_cooccurrence(topic_corpus(30, 5), 2);
  REQUIRE(x.cells.size() <= 200);
  GloveConfig cfg;
  cfg.dim = 10;
  cfg.epochs = 40;
  cfg.seed = 2;
  auto r = train_glove(x, cfg);
  REQUIRE(r.epoch_loss.size() == 40);
  for (std::size_t e = 1; e < r.epoch_loss.size(); ++e) CHECK(r.epoch_loss[e] <= r.epoch_loss[e - 1] + 1e-6);

  double direct = 0;
  const auto& m = r.model;
  for (const auto& [ij, v] : x.cells) {
    double dot = 0;
    for (std::size_t k = 0; k < m.dim; ++k) dot += m.w[ij.first * m.dim + k] * m.w_tilde[ij.second * m.dim + k];
    const double diff = dot + m.b[ij.first] + m.b_tilde[ij.second] - std::log(v);
    direct += glove_weight(v, cfg.x_max, cfg.alpha) * diff * diff;
  }
  CHECK(std::abs(glove_loss(m, x, cfg) - direct) <= 1e-10 * std::max(1.0, direct));
  CHECK(std::abs(r.epoch_loss.back() - direct) <= 1e-10 * std::max(1.0, direct));

  for (std::size_t i = 0; i < x.tokens.size(); ++i)
    for (std::size_t k = 0; k < m.dim; ++k)
      CHECK(r.vectors.row(i)[k] == m.w[i * m.dim + k] + m.w_tilde[i * m.dim + k]);
  CHECK(train_glove(x, cfg).vectors == r.vectors);
}

TEST_CASE("glove single cell converges to ln X") {
  CooccurrenceTable one;
  one.tokens = {"a"};
  one.cells[{0, 0}] = 7.0;
  GloveConfig cfg;
  cfg.dim = 4;
  cfg.epochs = 2000;
  auto r = train_glove(one, cfg);
  CHECK(std::abs(r.model.prediction(0, 0) - std::log(7.0)) < 1e-3);
  CHECK_THROWS_AS(train_glove(CooccurrenceTable{}, cfg), Error);
}

TEST_CASE("cooccurrence csv") {
  support::TempDir dir;
  write_cooccurrence_csv(dir / "x.csv", build_cooccurrence({seq({"a", "b"})}, 2));
  CHECK(support::read_file(dir / "x.csv") == "i,j,x\na,b,1\nb,a,1\n");
}

TEST_CASE("load_pretrained_text") {
  support::TempDir dir;
  auto path = support::write_file(dir / "v.txt", "king 1 2 3 4\nqueen 0.5 -1 2.25 3\nman 0 0 0 1e-3\n");
  auto m = load_pretrained_text(path);
  CHECK(m.rows() == 3);
  CHECK(m.dim() == 4);
  CHECK(m.at("queen")[2] == 2.25);
  CHECK(m.at("man")[3] == 1e-3);

  try {
    load_pretrained_text(support::write_file(dir / "bad.txt", "a 1 2 3\nb 1 2\n"));
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(e.context().find(":2") != std::string::npos);
  }
  CHECK_THROWS_AS(load_pretrained_text(support::write_file(dir / "dup.txt", "a 1 2\na 3 4\n")), Error);

  save_text(dir / "round.txt", m);
  CHECK(load_pretrained_text(dir / "round.txt") == m);
}

TEST_CASE("load_sentence_vectors") {
  support::TempDir dir;
  auto v = load_sentence_vectors(support::write_file(dir / "s.txt", "0 0.1 0.2\n1 -0.3 0.4\n7 1 2\n"));
  REQUIRE(v.size() == 3);
  CHECK(v[1].id == "1");
  CHECK(v[1].values == std::vector<double>{-0.3, 0.4});
  CHECK_THROWS_AS(load_sentence_vectors(support::write_file(dir / "b.txt", "0 1 2\n1 3\n")), Error);
  CHECK_THROWS_AS(load_sentence_vectors(support::write_file(dir / "d.txt", "0 1 2\n0 3 4\n")), Error);
}

TEST_CASE("embedding_layer_matrix") {
  auto vocab = sparse::fit_vocabulary({seq({"alpha", "alpha", "beta", "gamma"})});
  auto m = toy_matrix();
  auto full = embedding_layer_matrix(vocab, m, 3);
  CHECK(full.rows == 4);
  CHECK(full.matched == 3);
  CHECK(full.coverage == 1.0);
  for (std::size_t k = 0; k < 3; ++k) CHECK(full.data[k] == 0.0);
  for (std::size_t i = 1; i < 4; ++i)
    for (std::size_t k = 0; k < 3; ++k) CHECK(full.data[i * 3 + k] == m.at(vocab.index_word[i])[k]);

  auto partial_vocab = sparse::fit_vocabulary({seq({"alpha", "zeta", "eta", "eta"})});
  auto part = embedding_layer_matrix(partial_vocab, m, 3);
  CHECK(part.matched == 1);
  CHECK(part.unmatched == 2);
  CHECK(part.coverage == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const auto zeta = partial_vocab.index_of("zeta");
  for (std::size_t k = 0; k < 3; ++k) CHECK(part.data[zeta * 3 + k] == 0.0);
  CHECK_THROWS_AS(embedding_layer_matrix(vocab, m, 4), Error);
}

TEST_CASE("pca projection") {
  EmbeddingMatrix two(3);
  const double p[] = {1, 2, 3}, q[] = {4, 0, -1};
  two.add_row("p", p);
  two.add_row("q", q);
  const std::string pq[] = {"p", "q"};
  auto proj = pca_project_2d(two, pq);
  REQUIRE(proj.points.size() == 2);
  const double d2 = std::hypot(proj.points[0].x - proj.points[1].x, proj.points[0].y - proj.points[1].y);
  CHECK(d2 == doctest::Approx(std::sqrt(9 + 4 + 16.0)));

  EmbeddingMatrix same(3);
  same.add_row("a", p);
  same.add_row("b", p);
  same.add_row("c", q);
  const std::string abc[] = {"a", "b", "c"};
  auto s = pca_project_2d(same, abc);
  CHECK(s.points[0].x == s.points[1].x);
  CHECK(s.points[0].y == s.points[1].y);
}

TEST_CASE("pca variance matches a dense eigensolver") {
  EmbeddingMatrix m(3);
  const double rows[5][3] = {{2, 0, 1}, {1, 3, -1}, {0, -1, 2}, {4, 1, 0}, {-1, 2, 3}};
  std::vector<std::string> words;
  Eigen::MatrixXd x(5, 3);
  for (int i = 0; i < 5; ++i) {
    words.push_back("w" + std::to_string(i));
    m.add_row(words.back(), rows[i]);
    for (int k = 0; k < 3; ++k) x(i, k) = rows[i][k];
  }
  Eigen::MatrixXd centred = x.rowwise() - x.colwise().mean();
  Eigen::MatrixXd cov = centred.transpose() * centred / 5.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  const auto ev = es.eigenvalues();
  auto proj = pca_project_2d(m, words);
  CHECK(proj.variance_captured == doctest::Approx(ev(2) + ev(1)).epsilon(1e-10));
  CHECK(proj.total_variance == doctest::Approx(ev.sum()).epsilon(1e-10));

  for (int i = 0; i < 5; ++i) {
    const double ex = centred.row(i).dot(es.eigenvectors().col(2));
    const double ey = centred.row(i).dot(es.eigenvectors().col(1));
    CHECK(std::abs(std::abs(proj.points[i].x) - std::abs(ex)) < 1e-9);
    CHECK(std::abs(std::abs(proj.points[i].y) - std::abs(ey)) < 1e-9);
  }
}

TEST_CASE("jacobi_eigen agrees with Eigen on random symmetric matrices") {
  Rng rng(12);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 2 + rng.below(6);
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.normal();
    std::vector<double> flat(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) flat[i * n + j] = a(i, j);
    auto got = jacobi_eigen(flat, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    for (std::size_t k = 0; k < n; ++k) CHECK(got.values[k] == doctest::Approx(es.eigenvalues()(n - 1 - k)).epsilon(1e-10));
  }
}
