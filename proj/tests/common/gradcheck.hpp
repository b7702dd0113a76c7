#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "newsent/nn/layers.hpp"
#include "newsent/nn/train.hpp"
#include "newsent/rng.hpp"

// Layer-level finite-difference checks. Each layer output y is reduced to
// the scalar L = sum(y * R) for a fixed random R, so dL/dy = R.
namespace gradcheck {

using newsent::Rng;
using newsent::nn::Tensor;

struct Result {
  double max_relative_error = 0;
  std::size_t checked = 0;

  void add(double analytic, double numeric) {
    const double denom = std::max({std::abs(analytic), std::abs(numeric), newsent::nn::kRelativeErrorFloor});
    max_relative_error = std::max(max_relative_error, std::abs(analytic - numeric) / denom);
    ++checked;
  }
  void merge(const Result& o) {
    max_relative_error = std::max(max_relative_error, o.max_relative_error);
    checked += o.checked;
  }
};

inline Tensor<double> random_tensor(std::vector<std::size_t> shape, Rng& rng, double scale = 1.0) {
  Tensor<double> t(std::move(shape));
  for (auto& x : t.data) x = rng.normal() * scale;
  return t;
}

inline double weighted_sum(const Tensor<double>& y, const Tensor<double>& r) {
  double s = 0;
  for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * r[i];
  return s;
}

// Central differences of `loss` w.r.t. every entry of `param`, compared with `grad`.
inline void compare(Tensor<double>& param, const Tensor<double>& grad, const std::function<double()>& loss,
                    Result& out, double eps = 1e-5) {
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double saved = param[i];
    param[i] = saved + eps;
    const double up = loss();
    param[i] = saved - eps;
    const double down = loss();
    param[i] = saved;
    out.add(grad[i], (up - down) / (2 * eps));
  }
}

inline Result embedding(std::uint64_t seed = 1) {
  using namespace newsent::nn;
  Rng rng(seed);
  const std::size_t n = 3, steps = 5, rows = 6, d = 4;
  std::vector<std::int32_t> ids(n * steps);
  for (auto& id : ids) id = static_cast<std::int32_t>(rng.below(rows));
  auto w = random_tensor({rows, d}, rng);
  auto r = random_tensor({n, steps, d}, rng);
  Tensor<double> dw({rows, d});
  embedding_backward<double>(ids, r, dw);
  Result res;
  compare(w, dw, [&] { return weighted_sum(embedding_forward<double>(ids, n, steps, w), r); }, res);
  return res;
}

template <bool Lstm>
Result recurrent(std::uint64_t seed, std::size_t n, std::size_t steps, std::size_t d, std::size_t h) {
  using namespace newsent::nn;
  Rng rng(seed);
  const std::size_t g = Lstm ? 4 : 1;
  auto x = random_tensor({n, steps, d}, rng);
  RecurrentWeights<double> w{random_tensor({g * h, d}, rng, 0.5), random_tensor({g * h, h}, rng, 0.5),
                             random_tensor({g * h}, rng, 0.5)};
  auto r = random_tensor({n, h}, rng);
  auto forward = [&](RecurrentCache<double>* cache) {
    return Lstm ? lstm_forward(x, w, cache) : simple_rnn_forward(x, w, cache);
  };
  RecurrentCache<double> cache;
  forward(&cache);
  RecurrentWeights<double> grads{Tensor<double>(w.W.shape), Tensor<double>(w.U.shape), Tensor<double>(w.b.shape)};
  Tensor<double> dx;
  if constexpr (Lstm) lstm_backward(x, w, cache, r, grads, &dx);
  else simple_rnn_backward(x, w, cache, r, grads, &dx);
  auto loss = [&] { return weighted_sum(forward(nullptr), r); };
  Result res;
  compare(w.W, grads.W, loss, res);
  compare(w.U, grads.U, loss, res);
  compare(w.b, grads.b, loss, res);
  compare(x, dx, loss, res);
  return res;
}

inline Result simple_rnn(std::uint64_t seed = 2) { return recurrent<false>(seed, 3, 5, 4, 3); }
inline Result lstm(std::uint64_t seed = 3) { return recurrent<true>(seed, 3, 4, 4, 2); }

inline Result dense(newsent::nn::Activation act, std::uint64_t seed = 4) {
  using namespace newsent::nn;
  Rng rng(seed);
  auto x = random_tensor({3, 4}, rng);
  auto W = random_tensor({5, 4}, rng);
  auto b = random_tensor({5}, rng);
  auto r = random_tensor({3, 5}, rng);
  auto y = dense_forward(x, W, b, act);
  Tensor<double> dW(W.shape), db(b.shape), dx;
  dense_backward(x, W, y, act, r, dW, db, &dx);
  auto loss = [&] { return weighted_sum(dense_forward(x, W, b, act), r); };
  Result res;
  compare(W, dW, loss, res);
  compare(b, db, loss, res);
  compare(x, dx, loss, res);
  return res;
}

inline Result bce() {
  using namespace newsent::nn;
  Result res;
  const double eps = 1e-7;
  for (double p : {0.01, 0.1, 0.3, 0.5, 0.77, 0.95, 0.999})
    for (double y : {0.0, 1.0}) {
      const double num = (bce_loss(p + eps, y) - bce_loss(p - eps, y)) / (2 * eps);
      res.add(bce_grad(p, y), num);
    }
  return res;
}

}  // namespace gradcheck
