#include <cmath>
#include <numeric>

#include <doctest.h>

#include "gradcheck.hpp"
#include "newsent/error.hpp"
#include "newsent/nn/train.hpp"
#include "support.hpp"

using namespace newsent;
using namespace newsent::nn;

namespace {

NetworkConfig small_ids_config(RecurrentKind kind) {
  NetworkConfig c;
  c.input = InputKind::Ids;
  c.vocab_rows = 7;
  c.embedding_dim = 4;
  c.recurrent = kind;
  c.hidden_units = 2;
  c.dense_units = 3;
  c.seed = 5;
  return c;
}

Batch<double> ids_batch(std::size_t n, std::size_t steps, std::size_t rows, std::uint64_t seed) {
  Rng rng(seed);
  Batch<double> b;
  b.n = n;
  b.steps = steps;
  for (std::size_t i = 0; i < n * steps; ++i) b.ids.push_back(static_cast<std::int32_t>(rng.below(rows)));
  for (std::size_t i = 0; i < n; ++i) b.labels.push_back(static_cast<double>(i % 2));
  return b;
}

// 20 sequences whose label is a function of the first token.
Dataset memorization_set() {
  sparse::IdMatrix ids;
  ids.rows = 20;
  ids.cols = 6;
  Rng rng(3);
  std::vector<double> labels;
  for (std::size_t r = 0; r < 20; ++r) {
    const int y = static_cast<int>(r % 2);
    ids.data.push_back(y ? 1 : 2);
    for (int c = 1; c < 6; ++c) ids.data.push_back(static_cast<std::int32_t>(3 + rng.below(4)));
    labels.push_back(y);
  }
  return Dataset::from_ids(ids, labels);
}

}  // namespace

TEST_CASE("embedding forward") {
  Tensor<double> w({3, 2});
  w.data = {0, 0, 1, 2, 3, 4};
  std::vector<std::int32_t> zeros(6, 0);
  auto out = embedding_forward<double>(zeros, 2, 3, w);
  CHECK(out.shape == std::vector<std::size_t>{2, 3, 2});
  for (double x : out.data) CHECK(x == 0.0);
  std::vector<std::int32_t> one{2};
  auto g = embedding_forward<double>(one, 1, 1, w);
  CHECK(g.data == std::vector<double>{3, 4});
  std::vector<std::int32_t> bad{3};
  CHECK_THROWS_AS(embedding_forward<double>(bad, 1, 1, w), Error);
  CHECK(gradcheck::embedding().max_relative_error < 1e-7);
}

TEST_CASE("simple rnn forward") {
  Rng rng(1);
  auto x = gradcheck::random_tensor({2, 1, 3}, rng);
  RecurrentWeights<double> w{gradcheck::random_tensor({4, 3}, rng), gradcheck::random_tensor({4, 4}, rng),
                             gradcheck::random_tensor({4}, rng)};
  auto h = simple_rnn_forward(x, w);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      double a = w.b[j];
      for (std::size_t k = 0; k < 3; ++k) a += w.W[j * 3 + k] * x[i * 3 + k];
      CHECK(h[i * 4 + j] == doctest::Approx(std::tanh(a)).epsilon(1e-14));
    }

  RecurrentWeights<double> zero{Tensor<double>({4, 3}), Tensor<double>({4, 4}), Tensor<double>({4})};
  auto x5 = gradcheck::random_tensor({2, 5, 3}, rng);
  RecurrentCache<double> cache;
  simple_rnn_forward(x5, zero, &cache);
  for (double v : cache.h) CHECK(v == 0.0);
  CHECK(gradcheck::simple_rnn().max_relative_error < 1e-4);
}

TEST_CASE("lstm forward") {
  Rng rng(2);
  const std::size_t H = 2, D = 3;
  auto x = gradcheck::random_tensor({1, 6, D}, rng);
  RecurrentWeights<double> w{gradcheck::random_tensor({4 * H, D}, rng, 0.1),
                             gradcheck::random_tensor({4 * H, H}, rng, 0.1), Tensor<double>({4 * H})};
  for (std::size_t j = 0; j < H; ++j) w.b[j] = -60;      // input gate closed
  for (std::size_t j = H; j < 2 * H; ++j) w.b[j] = 60;   // forget gate open
  RecurrentCache<double> cache;
  lstm_forward(x, w, &cache);
  for (std::size_t t = 1; t <= 6; ++t)
    for (std::size_t j = 0; j < H; ++j) CHECK(std::abs(cache.c[t * H + j] - cache.c[j]) < 1e-20);

  // One step by hand, gate blocks ordered i, f, g, o.
  auto x1 = gradcheck::random_tensor({1, 1, D}, rng);
  RecurrentWeights<double> v{gradcheck::random_tensor({4 * H, D}, rng), gradcheck::random_tensor({4 * H, H}, rng),
                             gradcheck::random_tensor({4 * H}, rng)};
  auto h = lstm_forward(x1, v);
  auto pre = [&](std::size_t row) {
    double a = v.b[row];
    for (std::size_t k = 0; k < D; ++k) a += v.W[row * D + k] * x1[k];
    return a;
  };
  auto sig = [](double a) { return 1 / (1 + std::exp(-a)); };
  for (std::size_t j = 0; j < H; ++j) {
    const double i = sig(pre(j)), g = std::tanh(pre(2 * H + j)), o = sig(pre(3 * H + j));
    CHECK(h[j] == doctest::Approx(o * std::tanh(i * g)).epsilon(1e-14));
  }
  CHECK(gradcheck::lstm().max_relative_error < 1e-4);
}

TEST_CASE("dropout") {
  Rng rng(4);
  auto x = gradcheck::random_tensor({4, 5}, rng);
  CHECK(dropout(x, 0.0, Mode::Training, rng).data == x.data);
  CHECK(dropout(x, 0.7, Mode::Inference, rng).data == x.data);

  Tensor<double> ones({100000}, 1.0);
  std::vector<double> mask;
  auto y = dropout(ones, 0.5, Mode::Training, rng, &mask);
  const double mean = std::accumulate(y.data.begin(), y.data.end(), 0.0) / y.size();
  CHECK(std::abs(mean - 1.0) < 0.01);
  for (double m : mask) CHECK((m == 0.0 || m == 2.0));
}

TEST_CASE("dense and sigmoid") {
  Tensor<double> eye({3, 3});
  for (int i = 0; i < 3; ++i) eye[i * 3 + i] = 1;
  Rng rng(6);
  auto x = gradcheck::random_tensor({2, 3}, rng);
  CHECK(dense_forward(x, eye, Tensor<double>({3}), Activation::Linear).data == x.data);
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(0.0f) == 0.5f);
  CHECK(gradcheck::dense(Activation::Linear).max_relative_error < 1e-7);
  CHECK(gradcheck::dense(Activation::Relu).max_relative_error < 1e-7);
  CHECK(gradcheck::dense(Activation::Tanh).max_relative_error < 1e-4);
  CHECK(gradcheck::dense(Activation::Sigmoid).max_relative_error < 1e-4);
  CHECK(activation_from_string(to_string(Activation::Tanh)) == Activation::Tanh);
}

TEST_CASE("bce loss") {
  CHECK(bce_loss(0.5, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(bce_loss(1 - 1e-7, 1.0) == doctest::Approx(1e-7).epsilon(1e-6));
  CHECK(std::isfinite(bce_loss(0.0, 1.0)));
  CHECK(bce_loss(0.0, 1.0) == doctest::Approx(-std::log(1e-7)));
  CHECK(bce_grad(0.0, 1.0) == 0.0);
  CHECK(gradcheck::bce().max_relative_error < 1e-4);
}

TEST_CASE("clip_gradients") {
  Tensor<double> a({2}), b({1});
  a.data = {3, 4};
  b.data = {0};
  std::vector<Tensor<double>*> grads{&a, &b};
  CHECK(clip_gradients<double>(grads, 5.0) == doctest::Approx(5.0));
  CHECK(a.data == std::vector<double>{3, 4});

  a.data = {6, 0};
  b.data = {8};
  CHECK(clip_gradients<double>(grads, 5.0) == doctest::Approx(10.0));
  CHECK(a[0] == doctest::Approx(3.0));
  CHECK(b[0] == doctest::Approx(4.0));
  CHECK(std::hypot(a[0], a[1], b[0]) == doctest::Approx(5.0));
  CHECK((a[0] * 6 + b[0] * 8) / (5.0 * 10.0) == doctest::Approx(1.0));
}

TEST_CASE("adam") {
  Tensor<double> p({3}), g({3});
  p.data = {1, -2, 3};
  std::vector<Tensor<double>*> ps{&p}, gs{&g};
  AdamState<double> state;
  adam_step<double>(ps, gs, state);
  CHECK(p.data == std::vector<double>{1, -2, 3});
  CHECK(state.step == 1);

  Tensor<double> q({3}), h({3});
  h.data = {0.3, -40, 1e-3};
  std::vector<Tensor<double>*> qs{&q}, hs{&h};
  AdamState<double> s2;
  adam_step<double>(qs, hs, s2, AdamConfig{0.01});
  CHECK(q[0] == doctest::Approx(-0.01).epsilon(1e-5));
  CHECK(q[1] == doctest::Approx(0.01).epsilon(1e-5));
  CHECK(q[2] == doctest::Approx(-0.01).epsilon(1e-4));

  Tensor<double> x({1}, 1.0), dx({1});
  std::vector<Tensor<double>*> xs{&x}, dxs{&dx};
  AdamState<double> s3;
  for (int i = 0; i < 1000; ++i) {
    dx[0] = 2 * (x[0] - 0.3);
    adam_step<double>(xs, dxs, s3, AdamConfig{0.05});
  }
  CHECK(std::abs(x[0] - 0.3) < 1e-6);
}

TEST_CASE("clipped adam updates are bounded per step") {
  auto cfg = small_ids_config(RecurrentKind::Lstm);
  Network<double> net(cfg);
  net.initialize(1);
  auto batch = ids_batch(8, 5, cfg.vocab_rows, 2);
  AdamState<double> state;
  Rng rng(3);
  const double lr = 0.01, bound = lr * (1 - 0.9) / std::sqrt(1 - 0.999);
  for (int step = 0; step < 50; ++step) {
    net.loss(batch, Mode::Training, &rng, true);
    std::vector<Tensor<double>*> ps, gs;
    std::vector<Tensor<double>> before;
    for (auto& prm : net.parameters()) {
      ps.push_back(&prm.value);
      gs.push_back(&prm.grad);
      before.push_back(prm.value);
    }
    CHECK(clip_gradients<double>(gs, cfg.clip_norm) >= 0);
    adam_step<double>(ps, gs, state, AdamConfig{lr});
    for (std::size_t k = 0; k < ps.size(); ++k)
      for (std::size_t i = 0; i < ps[k]->size(); ++i) CHECK(std::abs((*ps[k])[i] - before[k][i]) <= bound * 1.0001);
  }
}

TEST_CASE("network gradient checks") {
  auto lstm = small_ids_config(RecurrentKind::Lstm);
  auto batch = ids_batch(3, 4, lstm.vocab_rows, 1);
  auto r = gradient_check(lstm, batch);
  CHECK(r.max_relative_error < 1e-4);
  CHECK(r.checked > 0);

  auto rnn = small_ids_config(RecurrentKind::SimpleRnn);
  CHECK(gradient_check(rnn, batch).max_relative_error < 1e-4);

  // Stochastic layers are frozen: the dropout rate cannot change the result.
  auto no_drop = lstm;
  no_drop.dropout = 0.0;
  CHECK(gradient_check(no_drop, batch).max_relative_error == r.max_relative_error);

  NetworkConfig linear;
  linear.input = InputKind::Dense;
  linear.input_features = 4;
  linear.recurrent = RecurrentKind::None;
  linear.dense_units = 3;
  linear.dense_activation = Activation::Linear;
  Batch<double> dense;
  dense.n = 3;
  dense.steps = 1;
  Rng rng(8);
  for (int i = 0; i < 12; ++i) dense.features.push_back(rng.normal());
  dense.labels = {1, 0, 1};
  CHECK(gradient_check(linear, dense).max_relative_error < 1e-7);
}

TEST_CASE("forward pass stays finite") {
  auto cfg = small_ids_config(RecurrentKind::Lstm);
  Network<float> net(cfg);
  net.initialize(3);
  for (auto& p : net.parameters())
    for (auto& v : p.value.data) v *= 40;
  Batch<float> b;
  b.n = 2;
  b.steps = 6;
  b.ids = {1, 2, 3, 4, 5, 6, 6, 5, 4, 3, 2, 1};
  b.labels = {1, 0};
  for (float p : net.predict_proba(b)) CHECK(std::isfinite(p));
  CHECK(std::isfinite(net.loss(b, Mode::Inference)));
}

TEST_CASE("config validation and json round-trip") {
  auto cfg = small_ids_config(RecurrentKind::Lstm);
  cfg.forget_bias = 2.0;
  CHECK(NetworkConfig::from_json(cfg.to_json()) == cfg);
  auto bad = cfg;
  bad.output_units = 2;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = cfg;
  bad.dropout = 1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = cfg;
  bad.recurrent = RecurrentKind::None;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("train with zero epochs returns the initialisation") {
  auto cfg = small_ids_config(RecurrentKind::Lstm);
  cfg.epochs = 0;
  auto data = memorization_set();
  auto r = train(cfg, data, {0.2, 1});
  CHECK(r.report.epochs.empty());
  CHECK(r.report.stop_reason == "no_epochs");
  Network<float> init(cfg);
  init.initialize(derive_seed(cfg.seed, 0));
  CHECK(r.checkpoint == Checkpoint::capture(init, 0));
}

TEST_CASE("train memorises a small fixture and is deterministic") {
  auto cfg = small_ids_config(RecurrentKind::Lstm);
  cfg.hidden_units = 8;
  cfg.dense_units = 8;
  cfg.dropout = 0.0;
  cfg.epochs = 200;
  cfg.patience = 0;
  cfg.batch_size = 20;
  cfg.optimizer.learning_rate = 0.01;
  auto data = memorization_set();
  corpus::SplitIndices all;
  for (std::size_t i = 0; i < data.n; ++i) all.train.push_back(i);
  auto r = train_on(cfg, data, all);
  CHECK(r.report.epochs.size() == 200);
  CHECK(r.report.epochs.back().train_loss < 0.05);

  auto again = train_on(cfg, data, all);
  CHECK(again.report == r.report);
  CHECK(again.checkpoint == r.checkpoint);
}

TEST_CASE("early stopping keeps the best epoch") {
  auto cfg = small_ids_config(RecurrentKind::SimpleRnn);
  cfg.epochs = 60;
  cfg.patience = 2;
  cfg.optimizer.learning_rate = 0.05;
  auto r = train(cfg, memorization_set(), {0.5, 4});
  REQUIRE_FALSE(r.report.epochs.empty());
  const auto best = r.report.best_epoch;
  for (const auto& e : r.report.epochs) CHECK(e.val_loss >= r.report.epochs[best - 1].val_loss);
  if (r.report.stop_reason == "early_stopping") CHECK(r.report.epochs.size() == best + cfg.patience);
  CHECK(TrainReport::from_json(r.report.to_json()) == r.report);
}

TEST_CASE("train rejects bad labels and empty training sets") {
  auto cfg = small_ids_config(RecurrentKind::Lstm);
  auto data = memorization_set();
  data.labels[3] = 2;
  CHECK_THROWS_AS(train(cfg, data, {0.2, 1}), Error);
  auto ok = memorization_set();
  corpus::SplitIndices none;
  none.validation = {0, 1};
  try {
    train_on(cfg, ok, none);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyDataset);
  }
}

TEST_CASE("classify and predict") {
  CHECK(classify(0.51) == 1);
  CHECK(classify(0.49) == 0);
  CHECK(classify(0.5) == 0);
  CHECK(classify(0.7, 0.8) == 0);

  auto cfg = small_ids_config(RecurrentKind::Lstm);
  cfg.epochs = 2;
  auto data = memorization_set();
  auto r = train(cfg, data, {0.2, 1});
  auto p = predict(r.checkpoint, data);
  CHECK(p.size() == data.n);
  CHECK(predict(r.checkpoint, data) == p);
  for (double x : p) CHECK((x > 0 && x < 1));
}

TEST_CASE("checkpoint round-trip is bitwise") {
  support::TempDir dir;
  auto cfg = small_ids_config(RecurrentKind::Lstm);
  cfg.epochs = 3;
  auto data = memorization_set();
  auto r = train(cfg, data, {0.2, 1});
  r.checkpoint.vocab_hash = 0xDEADBEEFCAFEull;
  r.checkpoint.save(dir / "m.ckpt");
  auto loaded = Checkpoint::load(dir / "m.ckpt");
  CHECK(loaded == r.checkpoint);
  CHECK(predict(loaded, data) == predict(r.checkpoint, data));

  const auto bytes = support::read_file(dir / "m.ckpt");
  CHECK(bytes.substr(0, 8) == "NSCKPT1\n");
  support::write_file(dir / "trailing.ckpt", bytes + "x");
  CHECK_THROWS_AS(Checkpoint::load(dir / "trailing.ckpt"), Error);
  support::write_file(dir / "short.ckpt", bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(Checkpoint::load(dir / "short.ckpt"), Error);
  support::write_file(dir / "junk.ckpt", "not a checkpoint at all");
  CHECK_THROWS_AS(Checkpoint::load(dir / "junk.ckpt"), Error);
  CHECK_THROWS_AS(Checkpoint::load(dir / "missing.ckpt"), Error);
}

TEST_CASE("frozen embedding rows stay fixed, row 0 is zero") {
  auto cfg = small_ids_config(RecurrentKind::Lstm);
  cfg.embedding_trainable = false;
  cfg.epochs = 3;
  std::vector<double> rows(cfg.vocab_rows * cfg.embedding_dim);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = 0.01 * static_cast<double>(i + 1);
  TrainOptions opt;
  opt.embedding = rows;
  auto r = train(cfg, memorization_set(), {0.2, 1}, opt);
  const auto& emb = r.checkpoint.parameters.front();
  CHECK(emb.name == "embedding");
  for (std::size_t k = 0; k < cfg.embedding_dim; ++k) CHECK(emb.values[k] == 0.0f);
  for (std::size_t i = cfg.embedding_dim; i < rows.size(); ++i) CHECK(emb.values[i] == static_cast<float>(rows[i]));
}
