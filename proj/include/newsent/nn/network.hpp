#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "newsent/nn/layers.hpp"

namespace newsent::nn {

enum class InputKind { Ids, Dense };
enum class RecurrentKind { None, SimpleRnn, Lstm };

std::string_view to_string(RecurrentKind k);
RecurrentKind recurrent_from_string(std::string_view s);

// embedding -> recurrent -> dropout -> dense -> dense(1) + sigmoid.
// Dense inputs skip the embedding and enter the recurrent layer as one step.
// RecurrentKind::None is only valid with dense inputs.
struct NetworkConfig {
  InputKind input = InputKind::Ids;
  std::size_t vocab_rows = 0;  // V + 1
  std::size_t embedding_dim = 100;
  bool embedding_trainable = true;
  std::size_t input_features = 0;  // dense inputs only

  RecurrentKind recurrent = RecurrentKind::Lstm;
  std::size_t hidden_units = 64;
  double forget_bias = 1.0;  // LSTM forget-gate bias at initialisation
  double dropout = 0.5;
  std::size_t dense_units = 512;
  Activation dense_activation = Activation::Relu;
  std::size_t output_units = 1;

  AdamConfig optimizer;
  double clip_norm = 5.0;
  std::size_t epochs = 10;
  std::size_t batch_size = 32;
  std::size_t patience = 5;
  std::uint64_t seed = 1;
  double threshold = 0.5;

  // Throws Config on any inconsistent field.
  void validate() const;
  // Width of the vector that enters the recurrent layer.
  std::size_t step_width() const { return input == InputKind::Ids ? embedding_dim : input_features; }

  nlohmann::json to_json() const;
  static NetworkConfig from_json(const nlohmann::json& j);
  bool operator==(const NetworkConfig& o) const { return to_json() == o.to_json(); }
};

// A batch of n examples: either n x steps token ids or n x features values.
template <class T>
struct Batch {
  std::size_t n = 0;
  std::size_t steps = 0;
  std::vector<std::int32_t> ids;
  std::vector<T> features;
  std::vector<T> labels;  // empty when only predicting
};

template <class T>
struct Parameter {
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;
  bool trainable = true;
};

template <class T>
class Network {
 public:
  explicit Network(NetworkConfig cfg);

  const NetworkConfig& config() const { return cfg_; }
  std::vector<Parameter<T>>& parameters() { return params_; }
  const std::vector<Parameter<T>>& parameters() const { return params_; }
  Parameter<T>& parameter(const std::string& name);

  // Glorot-uniform weights, zero biases, forget-gate bias cfg.forget_bias, embedding
  // uniform in [-0.05, 0.05].
  void initialize(std::uint64_t seed);
  // Loads (V + 1) x d rows into the embedding; row 0 is forced to zero.
  void set_embedding(std::span<const double> rows);

  // Mean BCE over the batch. With `grad`, parameter gradients are
  // overwritten with d(loss)/d(param). `rng` drives dropout in training mode.
  // `probs` receives the per-example output probabilities.
  T loss(const Batch<T>& batch, Mode mode, Rng* rng = nullptr, bool grad = false, std::vector<T>* probs = nullptr);

  std::vector<T> predict_proba(const Batch<T>& batch) const;

  void zero_grad();

 private:
  struct Forward;
  Forward run(const Batch<T>& batch, Mode mode, Rng* rng) const;

  NetworkConfig cfg_;
  std::vector<Parameter<T>> params_;
  std::size_t emb_ = 0, rec_ = 0, dense_ = 0, out_ = 0;  // parameter offsets
};

extern template class Network<float>;
extern template class Network<double>;

}  // namespace newsent::nn
