#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "newsent/embeddings.hpp"
#include "newsent/nn/train.hpp"
#include "newsent/pipeline.hpp"
#include "newsent/sparse.hpp"

namespace newsent::pipeline::detail {

struct FeatureSpace {
  EmbeddingKind kind = EmbeddingKind::Bow;
  sparse::Vocabulary vocab;
  std::optional<std::vector<double>> embedding_rows;  // (V + 1) x dim for id inputs
  std::size_t dim = 0;
  double coverage = 1.0;
  std::unordered_map<std::string, std::vector<double>> sentence_vectors;
};

// Fits the vocabulary (and trains the embedding, when there is one) on the
// `train` documents only.
FeatureSpace fit_features(const PipelineConfig& cfg, EmbeddingKind kind,
                          const std::vector<textprep::TokenSequence>& docs, const std::vector<std::size_t>& train,
                          std::uint64_t seed);

// Rebuilds a feature space from a saved vocabulary (no embedding rows).
FeatureSpace restore_features(const PipelineConfig& cfg, EmbeddingKind kind, sparse::Vocabulary vocab);

// docs[rows[i]] with labels[i]; sentence vectors are looked up by the
// document's origin index.
nn::Dataset make_dataset(const PipelineConfig& cfg, const FeatureSpace& space,
                         const std::vector<textprep::TokenSequence>& docs, const std::vector<std::size_t>& rows,
                         const std::vector<double>& labels);

nn::NetworkConfig network_for(const PipelineConfig& cfg, const FeatureSpace& space, ModelKind model,
                              std::uint64_t seed);

// Labelled documents and the shared split over them.
struct Prepared {
  std::vector<corpus::HeadlineRecord> headlines;
  std::vector<textprep::TokenSequence> docs;  // parallel to headlines
  LabelledSet labelled;
  corpus::SplitIndices split;                 // indices into labelled.rows
  std::vector<std::size_t> train_docs, val_docs;
  std::vector<double> train_labels, val_labels;
};

Prepared prepare(const PipelineConfig& cfg);

void ensure_output_dir(const PipelineConfig& cfg);
void write_json(const fs::path& path, const nlohmann::json& j);

}  // namespace newsent::pipeline::detail
