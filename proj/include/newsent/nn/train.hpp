#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "newsent/corpus.hpp"
#include "newsent/nn/network.hpp"
#include "newsent/sparse.hpp"

namespace newsent::nn {

// Model inputs with binary labels: padded token ids or dense feature rows.
struct Dataset {
  InputKind kind = InputKind::Ids;
  std::size_t n = 0;
  std::size_t width = 0;  // steps for ids, features for dense
  std::vector<std::int32_t> ids;
  std::vector<float> features;
  std::vector<double> labels;

  static Dataset from_ids(const sparse::IdMatrix& ids, std::vector<double> labels);
  static Dataset from_dense(std::size_t rows, std::size_t cols, const std::vector<double>& values,
                            std::vector<double> labels);

  template <class T>
  Batch<T> gather(std::span<const std::size_t> rows) const;
  Dataset subset(std::span<const std::size_t> rows) const;
};

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0, train_accuracy = 0;
  double val_loss = 0, val_accuracy = 0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  std::size_t best_epoch = 0;  // 0 when no epoch ran
  std::string stop_reason;     // "no_epochs", "completed" or "early_stopping"
  std::size_t train_size = 0, validation_size = 0;

  nlohmann::json to_json() const;
  static TrainReport from_json(const nlohmann::json& j);
  bool operator==(const TrainReport& o) const { return to_json() == o.to_json(); }
};

struct ParameterBlock {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<float> values;

  bool operator==(const ParameterBlock&) const = default;
};

// Container: 8-byte magic "NSCKPT1\n", u64 LE header length, JSON header
// {config, vocab_hash, parameters: [{name, shape}]}, then each parameter as
// row-major float32 little-endian.
struct Checkpoint {
  NetworkConfig config;
  std::uint64_t vocab_hash = 0;
  std::vector<ParameterBlock> parameters;

  static Checkpoint capture(const Network<float>& net, std::uint64_t vocab_hash);
  Network<float> network() const;

  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);
  bool operator==(const Checkpoint&) const = default;
};

struct TrainOptions {
  std::optional<std::vector<double>> embedding;  // (V + 1) x d initial rows
  std::uint64_t vocab_hash = 0;
  std::function<void(const EpochStats&, const Checkpoint&)> on_epoch;
};

struct TrainResult {
  Checkpoint checkpoint;  // parameters from the best epoch
  TrainReport report;
  corpus::SplitIndices split;
};

// Mini-batch BPTT with Adam and gradient clipping; early stopping on
// validation loss (training loss when the validation part is empty).
// Throws InvalidArgument for labels outside {0, 1}, EmptyDataset when the
// training part is empty.
TrainResult train(const NetworkConfig& cfg, const Dataset& data, const corpus::SplitSpec& split,
                  const TrainOptions& options = {});

// Same as above with an explicit split.
TrainResult train_on(const NetworkConfig& cfg, const Dataset& data, const corpus::SplitIndices& split,
                     const TrainOptions& options = {});

std::vector<double> predict(const Checkpoint& checkpoint, const Dataset& data);

// 1 when prob > threshold, else 0.
int classify(double prob, double threshold = 0.5);

struct GradientCheckResult {
  double max_relative_error = 0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  std::size_t checked = 0;
};

// |a - n| / max(|a|, |n|, floor) over every trainable parameter entry, with
// n the central difference of the total loss in double precision. Dropout is
// frozen (inference mode).
inline constexpr double kRelativeErrorFloor = 1e-3;

GradientCheckResult gradient_check(Network<double>& net, const Batch<double>& batch, double eps = 1e-5);
GradientCheckResult gradient_check(const NetworkConfig& cfg, const Batch<double>& batch, double eps = 1e-5);

}  // namespace newsent::nn
