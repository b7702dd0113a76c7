#include "newsent/nn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "newsent/error.hpp"

namespace newsent::nn {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Linear: return "linear";
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
    case Activation::Sigmoid: return "sigmoid";
  }
  return "linear";
}

Activation activation_from_string(std::string_view s) {
  if (s == "linear") return Activation::Linear;
  if (s == "relu") return Activation::Relu;
  if (s == "tanh") return Activation::Tanh;
  if (s == "sigmoid") return Activation::Sigmoid;
  throw Error(ErrorKind::Config, "unknown activation '" + std::string(s) + "'", "activation");
}

template <class T>
T sigmoid(T x) {
  if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}

template <class T>
Tensor<T> sigmoid(const Tensor<T>& x) {
  Tensor<T> y = x;
  for (auto& v : y.data) v = sigmoid(v);
  return y;
}

namespace {

template <class T>
T activate(T z, Activation a) {
  switch (a) {
    case Activation::Linear: return z;
    case Activation::Relu: return z > T(0) ? z : T(0);
    case Activation::Tanh: return std::tanh(z);
    case Activation::Sigmoid: return sigmoid(z);
  }
  return z;
}

// Derivative expressed through the activation output.
template <class T>
T activate_grad(T y, Activation a) {
  switch (a) {
    case Activation::Linear: return T(1);
    case Activation::Relu: return y > T(0) ? T(1) : T(0);
    case Activation::Tanh: return T(1) - y * y;
    case Activation::Sigmoid: return y * (T(1) - y);
  }
  return T(1);
}

// out[r] += sum_c M[r, c] * v[c]
template <class T>
inline void gemv_add(const T* M, const T* v, T* out, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const T* row = M + r * cols;
    T s = T(0);
    for (std::size_t c = 0; c < cols; ++c) s += row[c] * v[c];
    out[r] += s;
  }
}

// out[c] += sum_r M[r, c] * v[r]
template <class T>
inline void gemv_t_add(const T* M, const T* v, T* out, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const T vr = v[r];
    if (vr == T(0)) continue;
    const T* row = M + r * cols;
    for (std::size_t c = 0; c < cols; ++c) out[c] += row[c] * vr;
  }
}

// M[r, c] += a[r] * b[c]
template <class T>
inline void outer_add(T* M, const T* a, const T* b, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const T ar = a[r];
    if (ar == T(0)) continue;
    T* row = M + r * cols;
    for (std::size_t c = 0; c < cols; ++c) row[c] += ar * b[c];
  }
}

template <class T>
void check_recurrent(const Tensor<T>& x, const RecurrentWeights<T>& w, std::size_t gates) {
  if (x.shape.size() != 3) throw Error(ErrorKind::InvalidArgument, "recurrent input must be n x steps x d");
  const std::size_t gh = w.b.size();
  if (gh % gates != 0 || w.W.shape != std::vector<std::size_t>{gh, x.dim(2)} ||
      w.U.shape != std::vector<std::size_t>{gh, gh / gates})
    throw Error(ErrorKind::InvalidArgument, "recurrent weight shapes do not match the input");
}

}  // namespace

template <class T>
Tensor<T> embedding_forward(std::span<const std::int32_t> ids, std::size_t n, std::size_t steps,
                            const Tensor<T>& weights) {
  if (ids.size() != n * steps) throw Error(ErrorKind::InvalidArgument, "id count does not match n x steps");
  const std::size_t rows = weights.dim(0), d = weights.dim(1);
  Tensor<T> out({n, steps, d});
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const auto id = ids[k];
    if (id < 0 || static_cast<std::size_t>(id) >= rows)
      throw Error(ErrorKind::Range, "token id " + std::to_string(id) + " outside embedding rows", "ids");
    std::copy_n(weights.ptr() + static_cast<std::size_t>(id) * d, d, out.ptr() + k * d);
  }
  return out;
}

template <class T>
void embedding_backward(std::span<const std::int32_t> ids, const Tensor<T>& d_out, Tensor<T>& d_weights) {
  const std::size_t d = d_weights.dim(1);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    T* dst = d_weights.ptr() + static_cast<std::size_t>(ids[k]) * d;
    const T* src = d_out.ptr() + k * d;
    for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
  }
}

template <class T>
Tensor<T> simple_rnn_forward(const Tensor<T>& x, const RecurrentWeights<T>& w, RecurrentCache<T>* cache) {
  check_recurrent(x, w, 1);
  const std::size_t n = x.dim(0), steps = x.dim(1), D = x.dim(2), H = w.b.size();
  std::vector<T> h(n * (steps + 1) * H, T(0));
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < steps; ++t) {
      const T* xt = x.ptr() + (s * steps + t) * D;
      const T* prev = &h[(s * (steps + 1) + t) * H];
      T* cur = &h[(s * (steps + 1) + t + 1) * H];
      std::copy_n(w.b.ptr(), H, cur);
      gemv_add(w.W.ptr(), xt, cur, H, D);
      gemv_add(w.U.ptr(), prev, cur, H, H);
      for (std::size_t j = 0; j < H; ++j) cur[j] = std::tanh(cur[j]);
    }
  }
  Tensor<T> out({n, H});
  for (std::size_t s = 0; s < n; ++s) std::copy_n(&h[(s * (steps + 1) + steps) * H], H, out.ptr() + s * H);
  if (cache) {
    cache->n = n;
    cache->steps = steps;
    cache->hidden = H;
    cache->h = std::move(h);
  }
  return out;
}

template <class T>
void simple_rnn_backward(const Tensor<T>& x, const RecurrentWeights<T>& w, const RecurrentCache<T>& cache,
                         const Tensor<T>& d_h, RecurrentWeights<T>& grads, Tensor<T>* dx) {
  const std::size_t n = cache.n, steps = cache.steps, H = cache.hidden, D = x.dim(2);
  if (dx) *dx = Tensor<T>({n, steps, D});
  std::vector<T> dh(H), da(H);
  for (std::size_t s = 0; s < n; ++s) {
    std::copy_n(d_h.ptr() + s * H, H, dh.begin());
    for (std::size_t t = steps; t-- > 0;) {
      const T* cur = &cache.h[(s * (steps + 1) + t + 1) * H];
      const T* prev = &cache.h[(s * (steps + 1) + t) * H];
      const T* xt = x.ptr() + (s * steps + t) * D;
      for (std::size_t j = 0; j < H; ++j) da[j] = dh[j] * (T(1) - cur[j] * cur[j]);
      outer_add(grads.W.ptr(), da.data(), xt, H, D);
      outer_add(grads.U.ptr(), da.data(), prev, H, H);
      for (std::size_t j = 0; j < H; ++j) grads.b[j] += da[j];
      if (dx) gemv_t_add(w.W.ptr(), da.data(), dx->ptr() + (s * steps + t) * D, H, D);
      std::fill(dh.begin(), dh.end(), T(0));
      gemv_t_add(w.U.ptr(), da.data(), dh.data(), H, H);
    }
  }
}

template <class T>
Tensor<T> lstm_forward(const Tensor<T>& x, const RecurrentWeights<T>& w, RecurrentCache<T>* cache) {
  check_recurrent(x, w, 4);
  const std::size_t n = x.dim(0), steps = x.dim(1), D = x.dim(2), H = w.b.size() / 4;
  std::vector<T> h(n * (steps + 1) * H, T(0)), c(n * (steps + 1) * H, T(0));
  std::vector<T> gates(n * steps * 4 * H);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < steps; ++t) {
      const T* xt = x.ptr() + (s * steps + t) * D;
      const std::size_t prev_off = (s * (steps + 1) + t) * H, cur_off = prev_off + H;
      T* z = &gates[(s * steps + t) * 4 * H];
      std::copy_n(w.b.ptr(), 4 * H, z);
      gemv_add(w.W.ptr(), xt, z, 4 * H, D);
      gemv_add(w.U.ptr(), &h[prev_off], z, 4 * H, H);
      for (std::size_t j = 0; j < H; ++j) {
        const T i = sigmoid(z[j]), f = sigmoid(z[H + j]), g = std::tanh(z[2 * H + j]), o = sigmoid(z[3 * H + j]);
        z[j] = i;
        z[H + j] = f;
        z[2 * H + j] = g;
        z[3 * H + j] = o;
        c[cur_off + j] = f * c[prev_off + j] + i * g;
        h[cur_off + j] = o * std::tanh(c[cur_off + j]);
      }
    }
  }
  Tensor<T> out({n, H});
  for (std::size_t s = 0; s < n; ++s) std::copy_n(&h[(s * (steps + 1) + steps) * H], H, out.ptr() + s * H);
  if (cache) {
    cache->n = n;
    cache->steps = steps;
    cache->hidden = H;
    cache->h = std::move(h);
    cache->c = std::move(c);
    cache->gates = std::move(gates);
  }
  return out;
}

template <class T>
void lstm_backward(const Tensor<T>& x, const RecurrentWeights<T>& w, const RecurrentCache<T>& cache,
                   const Tensor<T>& d_h, RecurrentWeights<T>& grads, Tensor<T>* dx) {
  const std::size_t n = cache.n, steps = cache.steps, H = cache.hidden, D = x.dim(2);
  if (dx) *dx = Tensor<T>({n, steps, D});
  std::vector<T> dh(H), dc(H), dz(4 * H);
  for (std::size_t s = 0; s < n; ++s) {
    std::copy_n(d_h.ptr() + s * H, H, dh.begin());
    std::fill(dc.begin(), dc.end(), T(0));
    for (std::size_t t = steps; t-- > 0;) {
      const std::size_t prev_off = (s * (steps + 1) + t) * H, cur_off = prev_off + H;
      const T* gt = &cache.gates[(s * steps + t) * 4 * H];
      const T* xt = x.ptr() + (s * steps + t) * D;
      for (std::size_t j = 0; j < H; ++j) {
        const T i = gt[j], f = gt[H + j], g = gt[2 * H + j], o = gt[3 * H + j];
        const T tc = std::tanh(cache.c[cur_off + j]);
        const T d_o = dh[j] * tc;
        const T dcj = dc[j] + dh[j] * o * (T(1) - tc * tc);
        dz[j] = dcj * g * i * (T(1) - i);
        dz[H + j] = dcj * cache.c[prev_off + j] * f * (T(1) - f);
        dz[2 * H + j] = dcj * i * (T(1) - g * g);
        dz[3 * H + j] = d_o * o * (T(1) - o);
        dc[j] = dcj * f;
      }
      outer_add(grads.W.ptr(), dz.data(), xt, 4 * H, D);
      outer_add(grads.U.ptr(), dz.data(), &cache.h[prev_off], 4 * H, H);
      for (std::size_t j = 0; j < 4 * H; ++j) grads.b[j] += dz[j];
      if (dx) gemv_t_add(w.W.ptr(), dz.data(), dx->ptr() + (s * steps + t) * D, 4 * H, D);
      std::fill(dh.begin(), dh.end(), T(0));
      gemv_t_add(w.U.ptr(), dz.data(), dh.data(), 4 * H, H);
    }
  }
}

template <class T>
Tensor<T> dense_forward(const Tensor<T>& x, const Tensor<T>& W, const Tensor<T>& b, Activation act) {
  const std::size_t n = x.dim(0), in = x.size() / n, out = W.dim(0);
  if (W.dim(1) != in || b.size() != out) throw Error(ErrorKind::InvalidArgument, "dense weight shapes do not match");
  Tensor<T> y({n, out});
  for (std::size_t s = 0; s < n; ++s) {
    T* ys = y.ptr() + s * out;
    std::copy_n(b.ptr(), out, ys);
    gemv_add(W.ptr(), x.ptr() + s * in, ys, out, in);
    for (std::size_t j = 0; j < out; ++j) ys[j] = activate(ys[j], act);
  }
  return y;
}

template <class T>
void dense_backward(const Tensor<T>& x, const Tensor<T>& W, const Tensor<T>& y, Activation act,
                    const Tensor<T>& d_y, Tensor<T>& dW, Tensor<T>& db, Tensor<T>* dx) {
  const std::size_t n = x.dim(0), in = x.size() / n, out = W.dim(0);
  if (dx) *dx = Tensor<T>(x.shape);
  std::vector<T> da(out);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t j = 0; j < out; ++j) da[j] = d_y[s * out + j] * activate_grad(y[s * out + j], act);
    outer_add(dW.ptr(), da.data(), x.ptr() + s * in, out, in);
    for (std::size_t j = 0; j < out; ++j) db[j] += da[j];
    if (dx) gemv_t_add(W.ptr(), da.data(), dx->ptr() + s * in, out, in);
  }
}

template <class T>
Tensor<T> dropout(const Tensor<T>& x, double p, Mode mode, Rng& rng, std::vector<T>* mask) {
  if (!(p >= 0.0 && p < 1.0)) throw Error(ErrorKind::InvalidArgument, "dropout rate must be in [0,1)", "dropout");
  if (mode == Mode::Inference || p == 0.0) {
    if (mask) mask->assign(x.size(), T(1));
    return x;
  }
  const T keep = static_cast<T>(1.0 / (1.0 - p));
  Tensor<T> y = x;
  if (mask) mask->resize(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const T m = rng.uniform() < p ? T(0) : keep;
    y[i] *= m;
    if (mask) (*mask)[i] = m;
  }
  return y;
}

template <class T>
T bce_loss(T p, T y) {
  const T lo = static_cast<T>(kProbClamp), hi = static_cast<T>(1.0 - kProbClamp);
  const T pc = std::clamp(p, lo, hi);
  return -(y * std::log(pc) + (T(1) - y) * std::log(T(1) - pc));
}

template <class T>
T bce_grad(T p, T y) {
  const T lo = static_cast<T>(kProbClamp), hi = static_cast<T>(1.0 - kProbClamp);
  if (p < lo || p > hi) return T(0);
  return (p - y) / (p * (T(1) - p));
}

template <class T>
double clip_gradients(std::span<Tensor<T>* const> grads, double max_norm) {
  double sq = 0;
  for (const auto* g : grads)
    for (T v : g->data) sq += static_cast<double>(v) * static_cast<double>(v);
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const T scale = static_cast<T>(max_norm / norm);
    for (auto* g : grads)
      for (T& v : g->data) v *= scale;
  }
  return norm;
}

template <class T>
void adam_step(std::span<Tensor<T>* const> params, std::span<Tensor<T>* const> grads, AdamState<T>& state,
               const AdamConfig& cfg) {
  if (params.size() != grads.size()) throw Error(ErrorKind::InvalidArgument, "parameter/gradient count mismatch");
  if (state.m.empty()) {
    for (const auto* p : params) {
      state.m.emplace_back(p->shape);
      state.v.emplace_back(p->shape);
    }
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  const T b1 = static_cast<T>(cfg.beta1), b2 = static_cast<T>(cfg.beta2);
  const T step_size = static_cast<T>(cfg.learning_rate / bc1);
  const T sqrt_bc2 = static_cast<T>(std::sqrt(bc2));
  const T eps = static_cast<T>(cfg.epsilon);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& p = params[k]->data;
    const auto& g = grads[k]->data;
    auto& m = state.m[k].data;
    auto& v = state.v[k].data;
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = b1 * m[i] + (T(1) - b1) * g[i];
      v[i] = b2 * v[i] + (T(1) - b2) * g[i] * g[i];
      p[i] -= step_size * m[i] / (std::sqrt(v[i]) / sqrt_bc2 + eps);
    }
  }
}

#define NEWSENT_INSTANTIATE(T)                                                                                      \
  template T sigmoid<T>(T);                                                                                         \
  template Tensor<T> sigmoid<T>(const Tensor<T>&);                                                                  \
  template Tensor<T> embedding_forward<T>(std::span<const std::int32_t>, std::size_t, std::size_t, const Tensor<T>&); \
  template void embedding_backward<T>(std::span<const std::int32_t>, const Tensor<T>&, Tensor<T>&);                 \
  template Tensor<T> simple_rnn_forward<T>(const Tensor<T>&, const RecurrentWeights<T>&, RecurrentCache<T>*);       \
  template void simple_rnn_backward<T>(const Tensor<T>&, const RecurrentWeights<T>&, const RecurrentCache<T>&,      \
                                       const Tensor<T>&, RecurrentWeights<T>&, Tensor<T>*);                         \
  template Tensor<T> lstm_forward<T>(const Tensor<T>&, const RecurrentWeights<T>&, RecurrentCache<T>*);             \
  template void lstm_backward<T>(const Tensor<T>&, const RecurrentWeights<T>&, const RecurrentCache<T>&,            \
                                 const Tensor<T>&, RecurrentWeights<T>&, Tensor<T>*);                               \
  template Tensor<T> dense_forward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, Activation);            \
  template void dense_backward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, Activation,                 \
                                  const Tensor<T>&, Tensor<T>&, Tensor<T>&, Tensor<T>*);                            \
  template Tensor<T> dropout<T>(const Tensor<T>&, double, Mode, Rng&, std::vector<T>*);                             \
  template T bce_loss<T>(T, T);                                                                                     \
  template T bce_grad<T>(T, T);                                                                                     \
  template double clip_gradients<T>(std::span<Tensor<T>* const>, double);                                           \
  template void adam_step<T>(std::span<Tensor<T>* const>, std::span<Tensor<T>* const>, AdamState<T>&,               \
                             const AdamConfig&);

NEWSENT_INSTANTIATE(float)
NEWSENT_INSTANTIATE(double)

}  // namespace newsent::nn
