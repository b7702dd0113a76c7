#include "newsent/nn/network.hpp"

#include <cmath>
#include <string>

#include "newsent/error.hpp"

namespace newsent::nn {

std::string_view to_string(RecurrentKind k) {
  switch (k) {
    case RecurrentKind::None: return "none";
    case RecurrentKind::SimpleRnn: return "simple_rnn";
    case RecurrentKind::Lstm: return "lstm";
  }
  return "none";
}

RecurrentKind recurrent_from_string(std::string_view s) {
  if (s == "none") return RecurrentKind::None;
  if (s == "simple_rnn" || s == "rnn") return RecurrentKind::SimpleRnn;
  if (s == "lstm") return RecurrentKind::Lstm;
  throw Error(ErrorKind::Config, "unknown recurrent layer '" + std::string(s) + "'", "recurrent");
}

void NetworkConfig::validate() const {
  auto fail = [](const std::string& msg, const char* field) { throw Error(ErrorKind::Config, msg, field); };
  if (output_units != 1) fail("network must have exactly one output unit", "output_units");
  if (!(dropout >= 0.0 && dropout < 1.0)) fail("dropout must be in [0,1)", "dropout");
  if (input == InputKind::Ids) {
    if (vocab_rows < 2) fail("vocabulary must hold at least one token plus padding", "vocab_rows");
    if (embedding_dim == 0) fail("embedding_dim must be positive", "embedding_dim");
    if (recurrent == RecurrentKind::None) fail("token-id input needs a recurrent layer", "recurrent");
  } else if (input_features == 0) {
    fail("input_features must be positive", "input_features");
  }
  if (recurrent != RecurrentKind::None && hidden_units == 0) fail("hidden_units must be positive", "hidden_units");
  if (!std::isfinite(forget_bias)) fail("forget_bias must be finite", "forget_bias");
  if (dense_units == 0) fail("dense_units must be positive", "dense_units");
  if (batch_size == 0) fail("batch_size must be positive", "batch_size");
  if (!(optimizer.learning_rate > 0)) fail("learning_rate must be positive", "learning_rate");
  if (!(optimizer.beta1 >= 0 && optimizer.beta1 < 1 && optimizer.beta2 >= 0 && optimizer.beta2 < 1))
    fail("Adam betas must be in [0,1)", "beta");
  if (!(optimizer.epsilon > 0)) fail("epsilon must be positive", "epsilon");
  if (!(clip_norm > 0)) fail("clip_norm must be positive", "clip_norm");
  if (!(threshold >= 0 && threshold <= 1)) fail("threshold must be in [0,1]", "threshold");
}

nlohmann::json NetworkConfig::to_json() const {
  return {
      {"input", input == InputKind::Ids ? "ids" : "dense"},
      {"vocab_rows", vocab_rows},
      {"embedding_dim", embedding_dim},
      {"embedding_trainable", embedding_trainable},
      {"input_features", input_features},
      {"recurrent", to_string(recurrent)},
      {"hidden_units", hidden_units},
      {"forget_bias", forget_bias},
      {"dropout", dropout},
      {"dense_units", dense_units},
      {"dense_activation", to_string(dense_activation)},
      {"output_units", output_units},
      {"optimizer",
       {{"name", "adam"},
        {"learning_rate", optimizer.learning_rate},
        {"beta1", optimizer.beta1},
        {"beta2", optimizer.beta2},
        {"epsilon", optimizer.epsilon}}},
      {"clip_norm", clip_norm},
      {"epochs", epochs},
      {"batch_size", batch_size},
      {"patience", patience},
      {"seed", seed},
      {"threshold", threshold},
  };
}

NetworkConfig NetworkConfig::from_json(const nlohmann::json& j) {
  NetworkConfig c;
  try {
    if (!j.is_object()) throw Error(ErrorKind::Config, "network config must be an object", "network");
    if (j.contains("input")) {
      const auto s = j.at("input").get<std::string>();
      if (s != "ids" && s != "dense") throw Error(ErrorKind::Config, "input must be 'ids' or 'dense'", "input");
      c.input = s == "ids" ? InputKind::Ids : InputKind::Dense;
    }
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    get("vocab_rows", c.vocab_rows);
    get("embedding_dim", c.embedding_dim);
    get("embedding_trainable", c.embedding_trainable);
    get("input_features", c.input_features);
    if (j.contains("recurrent")) c.recurrent = recurrent_from_string(j.at("recurrent").get<std::string>());
    get("hidden_units", c.hidden_units);
    get("forget_bias", c.forget_bias);
    get("dropout", c.dropout);
    get("dense_units", c.dense_units);
    if (j.contains("dense_activation"))
      c.dense_activation = activation_from_string(j.at("dense_activation").get<std::string>());
    get("output_units", c.output_units);
    if (j.contains("optimizer")) {
      const auto& o = j.at("optimizer");
      if (o.contains("name") && o.at("name").get<std::string>() != "adam")
        throw Error(ErrorKind::Config, "only the adam optimizer is supported", "optimizer.name");
      if (o.contains("learning_rate")) o.at("learning_rate").get_to(c.optimizer.learning_rate);
      if (o.contains("beta1")) o.at("beta1").get_to(c.optimizer.beta1);
      if (o.contains("beta2")) o.at("beta2").get_to(c.optimizer.beta2);
      if (o.contains("epsilon")) o.at("epsilon").get_to(c.optimizer.epsilon);
    }
    get("clip_norm", c.clip_norm);
    get("epochs", c.epochs);
    get("batch_size", c.batch_size);
    get("patience", c.patience);
    get("seed", c.seed);
    get("threshold", c.threshold);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, std::string("invalid network config: ") + e.what(), "network");
  }
  c.validate();
  return c;
}

template <class T>
struct Network<T>::Forward {
  Tensor<T> x;  // n x steps x width
  RecurrentCache<T> cache;
  Tensor<T> h;  // n x H
  std::vector<T> mask;
  Tensor<T> hd;  // after dropout
  Tensor<T> d1;  // n x dense_units
  Tensor<T> p;   // n x 1
};

template <class T>
Network<T>::Network(NetworkConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  auto add = [&](std::string name, std::vector<std::size_t> shape, bool trainable = true) {
    Parameter<T> p{std::move(name), Tensor<T>(shape), Tensor<T>(shape), trainable};
    params_.push_back(std::move(p));
    return params_.size() - 1;
  };
  const std::size_t D = cfg_.step_width();
  if (cfg_.input == InputKind::Ids)
    emb_ = add("embedding", {cfg_.vocab_rows, cfg_.embedding_dim}, cfg_.embedding_trainable);
  std::size_t width = D;
  if (cfg_.recurrent != RecurrentKind::None) {
    const std::size_t G = cfg_.recurrent == RecurrentKind::Lstm ? 4 : 1, H = cfg_.hidden_units;
    rec_ = add("recurrent.W", {G * H, D});
    add("recurrent.U", {G * H, H});
    add("recurrent.b", {G * H});
    width = H;
  }
  dense_ = add("dense.W", {cfg_.dense_units, width});
  add("dense.b", {cfg_.dense_units});
  out_ = add("output.W", {1, cfg_.dense_units});
  add("output.b", {1});
}

template <class T>
Parameter<T>& Network<T>::parameter(const std::string& name) {
  for (auto& p : params_)
    if (p.name == name) return p;
  throw Error(ErrorKind::InvalidArgument, "no parameter named '" + name + "'");
}

template <class T>
void Network<T>::initialize(std::uint64_t seed) {
  Rng rng(seed);
  auto glorot = [&](Tensor<T>& t, std::size_t fan_in, std::size_t fan_out) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (auto& v : t.data) v = static_cast<T>(rng.uniform(-limit, limit));
  };
  for (auto& p : params_) p.value.zero();
  if (cfg_.input == InputKind::Ids) {
    auto& e = params_[emb_].value;
    for (auto& v : e.data) v = static_cast<T>(rng.uniform(-0.05, 0.05));
  }
  if (cfg_.recurrent != RecurrentKind::None) {
    auto& W = params_[rec_].value;
    auto& U = params_[rec_ + 1].value;
    glorot(W, W.dim(1), W.dim(0));
    glorot(U, U.dim(1), U.dim(0));
    if (cfg_.recurrent == RecurrentKind::Lstm) {
      auto& b = params_[rec_ + 2].value;
      const std::size_t H = cfg_.hidden_units;
      for (std::size_t j = H; j < 2 * H; ++j) b[j] = static_cast<T>(cfg_.forget_bias);
    }
  }
  auto& Wd = params_[dense_].value;
  glorot(Wd, Wd.dim(1), Wd.dim(0));
  auto& Wo = params_[out_].value;
  glorot(Wo, Wo.dim(1), Wo.dim(0));
}

template <class T>
void Network<T>::set_embedding(std::span<const double> rows) {
  if (cfg_.input != InputKind::Ids) throw Error(ErrorKind::InvalidArgument, "network has no embedding layer");
  auto& e = params_[emb_].value;
  if (rows.size() != e.size())
    throw Error(ErrorKind::InvalidArgument, "embedding matrix has " + std::to_string(rows.size()) +
                                                " values, expected " + std::to_string(e.size()));
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<T>(rows[i]);
  for (std::size_t j = 0; j < cfg_.embedding_dim; ++j) e[j] = T(0);
}

template <class T>
void Network<T>::zero_grad() {
  for (auto& p : params_) p.grad.zero();
}

template <class T>
typename Network<T>::Forward Network<T>::run(const Batch<T>& batch, Mode mode, Rng* rng) const {
  Forward f;
  if (batch.n == 0) throw Error(ErrorKind::EmptyDataset, "empty batch");
  if (cfg_.input == InputKind::Ids) {
    f.x = embedding_forward<T>(batch.ids, batch.n, batch.steps, params_[emb_].value);
  } else {
    if (batch.features.size() != batch.n * cfg_.input_features)
      throw Error(ErrorKind::InvalidArgument, "feature batch does not match input_features");
    f.x.shape = {batch.n, 1, cfg_.input_features};
    f.x.data = batch.features;
  }
  if (cfg_.recurrent == RecurrentKind::None) {
    f.h.shape = {batch.n, cfg_.input_features};
    f.h.data = f.x.data;
  } else {
    const RecurrentWeights<T> w{params_[rec_].value, params_[rec_ + 1].value, params_[rec_ + 2].value};
    f.h = cfg_.recurrent == RecurrentKind::Lstm ? lstm_forward(f.x, w, &f.cache) : simple_rnn_forward(f.x, w, &f.cache);
  }
  if (mode == Mode::Training && cfg_.dropout > 0.0) {
    if (!rng) throw Error(ErrorKind::InvalidArgument, "training mode needs a random stream for dropout");
    f.hd = dropout(f.h, cfg_.dropout, mode, *rng, &f.mask);
  } else {
    f.hd = f.h;
  }
  f.d1 = dense_forward(f.hd, params_[dense_].value, params_[dense_ + 1].value, cfg_.dense_activation);
  f.p = dense_forward(f.d1, params_[out_].value, params_[out_ + 1].value, Activation::Sigmoid);
  return f;
}

template <class T>
std::vector<T> Network<T>::predict_proba(const Batch<T>& batch) const {
  return run(batch, Mode::Inference, nullptr).p.data;
}

template <class T>
T Network<T>::loss(const Batch<T>& batch, Mode mode, Rng* rng, bool grad, std::vector<T>* probs) {
  if (batch.labels.size() != batch.n) throw Error(ErrorKind::InvalidArgument, "batch labels missing");
  Forward f = run(batch, mode, rng);
  if (probs) *probs = f.p.data;
  const T inv_n = T(1) / static_cast<T>(batch.n);
  T total = T(0);
  for (std::size_t s = 0; s < batch.n; ++s) total += bce_loss(f.p[s], batch.labels[s]);
  if (!grad) return total * inv_n;

  zero_grad();
  Tensor<T> dp({batch.n, 1});
  for (std::size_t s = 0; s < batch.n; ++s) dp[s] = bce_grad(f.p[s], batch.labels[s]) * inv_n;
  Tensor<T> d_d1, d_hd;
  dense_backward(f.d1, params_[out_].value, f.p, Activation::Sigmoid, dp, params_[out_].grad, params_[out_ + 1].grad,
                 &d_d1);
  dense_backward(f.hd, params_[dense_].value, f.d1, cfg_.dense_activation, d_d1, params_[dense_].grad,
                 params_[dense_ + 1].grad, &d_hd);
  if (!f.mask.empty())
    for (std::size_t i = 0; i < d_hd.size(); ++i) d_hd[i] *= f.mask[i];
  if (cfg_.recurrent != RecurrentKind::None) {
    const RecurrentWeights<T> w{params_[rec_].value, params_[rec_ + 1].value, params_[rec_ + 2].value};
    RecurrentWeights<T> g{std::move(params_[rec_].grad), std::move(params_[rec_ + 1].grad),
                          std::move(params_[rec_ + 2].grad)};
    const bool need_dx = cfg_.input == InputKind::Ids && params_[emb_].trainable;
    Tensor<T> dx;
    if (cfg_.recurrent == RecurrentKind::Lstm)
      lstm_backward(f.x, w, f.cache, d_hd, g, need_dx ? &dx : nullptr);
    else
      simple_rnn_backward(f.x, w, f.cache, d_hd, g, need_dx ? &dx : nullptr);
    params_[rec_].grad = std::move(g.W);
    params_[rec_ + 1].grad = std::move(g.U);
    params_[rec_ + 2].grad = std::move(g.b);
    if (need_dx) embedding_backward<T>(batch.ids, dx, params_[emb_].grad);
  }
  return total * inv_n;
}

template class Network<float>;
template class Network<double>;

}  // namespace newsent::nn
