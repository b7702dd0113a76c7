#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "newsent/nn/tensor.hpp"
#include "newsent/rng.hpp"

namespace newsent::nn {

enum class Activation { Linear, Relu, Tanh, Sigmoid };

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view s);

// ---- embedding -----------------------------------------------------------

// ids: n x steps; weights: rows x d -> n x steps x d. Throws Range on an id
// outside [0, rows).
template <class T>
Tensor<T> embedding_forward(std::span<const std::int32_t> ids, std::size_t n, std::size_t steps,
                            const Tensor<T>& weights);

// Accumulates into d_weights.
template <class T>
void embedding_backward(std::span<const std::int32_t> ids, const Tensor<T>& d_out, Tensor<T>& d_weights);

// ---- recurrent -----------------------------------------------------------

// Gate-stacked weights: W is (G*H) x D, U is (G*H) x H, b is G*H, with G = 1
// for SimpleRNN and G = 4 for LSTM (gate blocks ordered i, f, g, o).
template <class T>
struct RecurrentWeights {
  Tensor<T> W, U, b;

  std::size_t hidden(std::size_t gates) const { return b.size() / gates; }
};

// Per-step activations kept for backpropagation through time.
template <class T>
struct RecurrentCache {
  std::size_t n = 0, steps = 0, hidden = 0;
  std::vector<T> h;  // n x (steps + 1) x H, step 0 is the zero initial state
  std::vector<T> c;  // LSTM cell, same layout
  std::vector<T> gates;  // LSTM i,f,g,o after nonlinearity: n x steps x 4H
};

// h_t = tanh(W x_t + U h_{t-1} + b), h_0 = 0. x: n x steps x D -> n x H.
template <class T>
Tensor<T> simple_rnn_forward(const Tensor<T>& x, const RecurrentWeights<T>& w, RecurrentCache<T>* cache = nullptr);

// Accumulates parameter gradients into `grads`; writes d/dx when dx != nullptr.
template <class T>
void simple_rnn_backward(const Tensor<T>& x, const RecurrentWeights<T>& w, const RecurrentCache<T>& cache,
                         const Tensor<T>& d_h, RecurrentWeights<T>& grads, Tensor<T>* dx = nullptr);

// i, f, o = sigmoid, g = tanh, c_t = f*c_{t-1} + i*g, h_t = o*tanh(c_t).
template <class T>
Tensor<T> lstm_forward(const Tensor<T>& x, const RecurrentWeights<T>& w, RecurrentCache<T>* cache = nullptr);

template <class T>
void lstm_backward(const Tensor<T>& x, const RecurrentWeights<T>& w, const RecurrentCache<T>& cache,
                   const Tensor<T>& d_h, RecurrentWeights<T>& grads, Tensor<T>* dx = nullptr);

// ---- dense, activations, dropout -----------------------------------------

// x: n x in, W: out x in, b: out -> n x out.
template <class T>
Tensor<T> dense_forward(const Tensor<T>& x, const Tensor<T>& W, const Tensor<T>& b, Activation act);

// `y` is the forward output. Accumulates dW and db; writes dx when non-null.
template <class T>
void dense_backward(const Tensor<T>& x, const Tensor<T>& W, const Tensor<T>& y, Activation act,
                    const Tensor<T>& d_y, Tensor<T>& dW, Tensor<T>& db, Tensor<T>* dx = nullptr);

template <class T>
T sigmoid(T x);

template <class T>
Tensor<T> sigmoid(const Tensor<T>& x);

enum class Mode { Training, Inference };

// Training: each entry zeroed with probability p, survivors scaled by
// 1/(1-p). `mask` receives the multipliers. Inference: identity.
template <class T>
Tensor<T> dropout(const Tensor<T>& x, double p, Mode mode, Rng& rng, std::vector<T>* mask = nullptr);

// ---- loss ----------------------------------------------------------------

inline constexpr double kProbClamp = 1e-7;

// -[y ln p + (1-y) ln(1-p)] with p clamped to [1e-7, 1 - 1e-7].
template <class T>
T bce_loss(T p, T y);

// dL/dp = (p - y) / (p (1 - p)); zero where the clamp is active.
template <class T>
T bce_grad(T p, T y);

// ---- optimisation --------------------------------------------------------

// Scales every gradient by max_norm / norm when the global L2 norm exceeds
// max_norm. Returns the norm before clipping.
template <class T>
double clip_gradients(std::span<Tensor<T>* const> grads, double max_norm = 5.0);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

template <class T>
struct AdamState {
  std::vector<Tensor<T>> m, v;
  std::uint64_t step = 0;
};

template <class T>
void adam_step(std::span<Tensor<T>* const> params, std::span<Tensor<T>* const> grads, AdamState<T>& state,
               const AdamConfig& cfg = {});

}  // namespace newsent::nn
