#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "newsent/error.hpp"
#include "newsent/nn/train.hpp"

namespace newsent::nn {

Dataset Dataset::from_ids(const sparse::IdMatrix& ids, std::vector<double> labels) {
  Dataset d;
  d.kind = InputKind::Ids;
  d.n = ids.rows;
  d.width = ids.cols;
  d.ids = ids.data;
  d.labels = std::move(labels);
  return d;
}

Dataset Dataset::from_dense(std::size_t rows, std::size_t cols, const std::vector<double>& values,
                            std::vector<double> labels) {
  if (values.size() != rows * cols) throw Error(ErrorKind::InvalidArgument, "dense values do not match rows x cols");
  Dataset d;
  d.kind = InputKind::Dense;
  d.n = rows;
  d.width = cols;
  d.features.assign(values.begin(), values.end());
  d.labels = std::move(labels);
  return d;
}

template <class T>
Batch<T> Dataset::gather(std::span<const std::size_t> rows) const {
  Batch<T> b;
  b.n = rows.size();
  b.steps = kind == InputKind::Ids ? width : 1;
  for (std::size_t r : rows) {
    if (kind == InputKind::Ids)
      b.ids.insert(b.ids.end(), ids.begin() + static_cast<std::ptrdiff_t>(r * width),
                   ids.begin() + static_cast<std::ptrdiff_t>((r + 1) * width));
    else
      for (std::size_t k = 0; k < width; ++k) b.features.push_back(static_cast<T>(features[r * width + k]));
    if (!labels.empty()) b.labels.push_back(static_cast<T>(labels[r]));
  }
  return b;
}

template Batch<float> Dataset::gather<float>(std::span<const std::size_t>) const;
template Batch<double> Dataset::gather<double>(std::span<const std::size_t>) const;

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset d;
  d.kind = kind;
  d.width = width;
  d.n = rows.size();
  for (std::size_t r : rows) {
    if (kind == InputKind::Ids)
      d.ids.insert(d.ids.end(), ids.begin() + static_cast<std::ptrdiff_t>(r * width),
                   ids.begin() + static_cast<std::ptrdiff_t>((r + 1) * width));
    else
      d.features.insert(d.features.end(), features.begin() + static_cast<std::ptrdiff_t>(r * width),
                        features.begin() + static_cast<std::ptrdiff_t>((r + 1) * width));
    if (!labels.empty()) d.labels.push_back(labels[r]);
  }
  return d;
}

nlohmann::json TrainReport::to_json() const {
  nlohmann::json j;
  auto column = [&](auto member) {
    std::vector<double> v;
    for (const auto& e : epochs) v.push_back(e.*member);
    return v;
  };
  std::vector<std::size_t> ids;
  for (const auto& e : epochs) ids.push_back(e.epoch);
  j["epoch"] = ids;
  j["train_loss"] = column(&EpochStats::train_loss);
  j["train_accuracy"] = column(&EpochStats::train_accuracy);
  j["val_loss"] = column(&EpochStats::val_loss);
  j["val_accuracy"] = column(&EpochStats::val_accuracy);
  j["best_epoch"] = best_epoch;
  j["stop_reason"] = stop_reason;
  j["train_size"] = train_size;
  j["validation_size"] = validation_size;
  return j;
}

TrainReport TrainReport::from_json(const nlohmann::json& j) {
  TrainReport r;
  try {
    const auto ids = j.at("epoch").get<std::vector<std::size_t>>();
    const auto tl = j.at("train_loss").get<std::vector<double>>();
    const auto ta = j.at("train_accuracy").get<std::vector<double>>();
    const auto vl = j.at("val_loss").get<std::vector<double>>();
    const auto va = j.at("val_accuracy").get<std::vector<double>>();
    if (tl.size() != ids.size() || ta.size() != ids.size() || vl.size() != ids.size() || va.size() != ids.size())
      throw Error(ErrorKind::Parse, "train report arrays differ in length");
    for (std::size_t i = 0; i < ids.size(); ++i) r.epochs.push_back({ids[i], tl[i], ta[i], vl[i], va[i]});
    j.at("best_epoch").get_to(r.best_epoch);
    j.at("stop_reason").get_to(r.stop_reason);
    j.at("train_size").get_to(r.train_size);
    j.at("validation_size").get_to(r.validation_size);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("invalid train report: ") + e.what());
  }
  return r;
}

int classify(double prob, double threshold) { return prob > threshold ? 1 : 0; }

namespace {

constexpr std::size_t kEvalChunk = 256;

struct Evaluation {
  double loss = 0, accuracy = 0;
};

Evaluation evaluate(const Network<float>& net, const Dataset& data, std::span<const std::size_t> rows) {
  Evaluation ev;
  if (rows.empty()) return ev;
  double loss = 0;
  std::size_t correct = 0;
  for (std::size_t start = 0; start < rows.size(); start += kEvalChunk) {
    auto chunk = rows.subspan(start, std::min(kEvalChunk, rows.size() - start));
    const auto batch = data.gather<float>(chunk);
    const auto p = net.predict_proba(batch);
    for (std::size_t i = 0; i < p.size(); ++i) {
      loss += static_cast<double>(bce_loss(p[i], batch.labels[i]));
      correct += classify(p[i], net.config().threshold) == static_cast<int>(batch.labels[i]);
    }
  }
  ev.loss = loss / static_cast<double>(rows.size());
  ev.accuracy = static_cast<double>(correct) / static_cast<double>(rows.size());
  return ev;
}

void check_data(const NetworkConfig& cfg, const Dataset& data) {
  if (data.labels.size() != data.n) throw Error(ErrorKind::InvalidArgument, "label count does not match rows");
  for (double y : data.labels)
    if (y != 0.0 && y != 1.0) throw Error(ErrorKind::InvalidArgument, "labels must be 0 or 1", "labels");
  if (data.kind != cfg.input) throw Error(ErrorKind::InvalidArgument, "dataset kind does not match network input");
  if (data.kind == InputKind::Dense && data.width != cfg.input_features)
    throw Error(ErrorKind::InvalidArgument, "feature width does not match input_features");
}

}  // namespace

TrainResult train(const NetworkConfig& cfg, const Dataset& data, const corpus::SplitSpec& split,
                  const TrainOptions& options) {
  check_data(cfg, data);
  if (data.n == 0) throw Error(ErrorKind::EmptyDataset, "training set is empty");
  return train_on(cfg, data, corpus::split_indices(data.n, split), options);
}

TrainResult train_on(const NetworkConfig& cfg, const Dataset& data, const corpus::SplitIndices& split,
                     const TrainOptions& options) {
  cfg.validate();
  check_data(cfg, data);
  if (split.train.empty()) throw Error(ErrorKind::EmptyDataset, "training set is empty");

  Network<float> net(cfg);
  net.initialize(derive_seed(cfg.seed, 0));
  if (options.embedding) net.set_embedding(*options.embedding);

  TrainResult result;
  result.split = split;
  result.report.train_size = split.train.size();
  result.report.validation_size = split.validation.size();
  result.checkpoint = Checkpoint::capture(net, options.vocab_hash);
  if (cfg.epochs == 0) {
    result.report.stop_reason = "no_epochs";
    return result;
  }

  Rng shuffle_rng(derive_seed(cfg.seed, 1));
  Rng dropout_rng(derive_seed(cfg.seed, 2));
  AdamState<float> adam;
  std::vector<Tensor<float>*> values, grads;
  for (auto& p : net.parameters()) {
    if (!p.trainable) continue;
    values.push_back(&p.value);
    grads.push_back(&p.grad);
  }

  std::vector<std::size_t> order = split.train;
  double best = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  result.report.stop_reason = "completed";

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::span<const std::size_t> rows(order.data() + start, std::min(cfg.batch_size, order.size() - start));
      const auto batch = data.gather<float>(rows);
      std::vector<float> p;
      const float loss = net.loss(batch, Mode::Training, &dropout_rng, true, &p);
      loss_sum += static_cast<double>(loss) * static_cast<double>(rows.size());
      clip_gradients<float>(grads, cfg.clip_norm);
      adam_step<float>(values, grads, adam, cfg.optimizer);
      for (std::size_t i = 0; i < p.size(); ++i)
        correct += classify(p[i], cfg.threshold) == static_cast<int>(batch.labels[i]);
    }
    EpochStats st;
    st.epoch = epoch;
    st.train_loss = loss_sum / static_cast<double>(order.size());
    st.train_accuracy = static_cast<double>(correct) / static_cast<double>(order.size());
    const auto val = evaluate(net, data, split.validation);
    st.val_loss = val.loss;
    st.val_accuracy = val.accuracy;
    result.report.epochs.push_back(st);

    const auto snapshot = Checkpoint::capture(net, options.vocab_hash);
    if (options.on_epoch) options.on_epoch(st, snapshot);
    const double monitored = split.validation.empty() ? st.train_loss : st.val_loss;
    if (monitored < best) {
      best = monitored;
      since_best = 0;
      result.report.best_epoch = epoch;
      result.checkpoint = snapshot;
    } else if (cfg.patience > 0 && ++since_best >= cfg.patience) {
      result.report.stop_reason = "early_stopping";
      break;
    }
  }
  return result;
}

std::vector<double> predict(const Checkpoint& checkpoint, const Dataset& data) {
  const auto net = checkpoint.network();
  if (data.kind != checkpoint.config.input) throw Error(ErrorKind::InvalidArgument, "dataset kind does not match model");
  std::vector<std::size_t> rows(data.n);
  std::iota(rows.begin(), rows.end(), 0);
  std::vector<double> out;
  out.reserve(data.n);
  for (std::size_t start = 0; start < rows.size(); start += kEvalChunk) {
    const std::span<const std::size_t> chunk(rows.data() + start, std::min(kEvalChunk, rows.size() - start));
    for (float p : net.predict_proba(data.gather<float>(chunk))) out.push_back(static_cast<double>(p));
  }
  return out;
}

GradientCheckResult gradient_check(Network<double>& net, const Batch<double>& batch, double eps) {
  net.loss(batch, Mode::Inference, nullptr, true);
  GradientCheckResult r;
  for (auto& p : net.parameters()) {
    if (!p.trainable) continue;
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double saved = p.value[i];
      p.value[i] = saved + eps;
      const double up = net.loss(batch, Mode::Inference);
      p.value[i] = saved - eps;
      const double down = net.loss(batch, Mode::Inference);
      p.value[i] = saved;
      const double numeric = (up - down) / (2 * eps);
      const double analytic = p.grad[i];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), kRelativeErrorFloor});
      const double rel = std::abs(analytic - numeric) / denom;
      ++r.checked;
      if (rel > r.max_relative_error || r.worst_parameter.empty()) {
        r.max_relative_error = std::max(rel, r.max_relative_error);
        r.worst_parameter = p.name;
        r.worst_index = i;
      }
    }
  }
  return r;
}

GradientCheckResult gradient_check(const NetworkConfig& cfg, const Batch<double>& batch, double eps) {
  Network<double> net(cfg);
  net.initialize(derive_seed(cfg.seed, 0));
  return gradient_check(net, batch, eps);
}

}  // namespace newsent::nn
