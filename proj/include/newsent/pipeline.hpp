#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "newsent/corpus.hpp"
#include "newsent/nn/network.hpp"
#include "newsent/textprep.hpp"

namespace newsent::pipeline {

namespace fs = std::filesystem;

enum class EmbeddingKind { Bow, Tfidf, Word2vec, Glove, Fasttext, Pretrained, SentenceVectors };
enum class ModelKind { Rnn, Lstm };

std::string_view to_string(EmbeddingKind k);
std::string_view to_string(ModelKind k);
EmbeddingKind embedding_from_string(std::string_view s);  // throws Config
ModelKind model_from_string(std::string_view s);          // throws Config

// bow, tfidf and sentence_vectors feed dense rows; the rest feed token ids.
bool uses_token_ids(EmbeddingKind k);

struct HeadlineInput {
  fs::path path;
  std::string date_column = "Date";
  std::string text_column = "Title";
  std::string label_column;  // empty: labels come from the lexicon
  std::string source;
  std::string ticker;  // price series the headlines are joined to
};

struct EmbeddingSettings {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  std::size_t minn = 3, maxn = 6;
  std::size_t bucket_count = 1u << 17;
  double fasttext_learning_rate = 0.05;
  double x_max = 100.0, alpha = 0.75;
  std::size_t glove_epochs = 25;
  double glove_learning_rate = 0.05;
  std::size_t max_words = 0;
  std::size_t maxlen = 50;
  std::size_t projection_words = 50;
  fs::path pretrained_path;
  fs::path sentence_vectors_path;  // ids are the 0-based kept-headline positions
};

struct PipelineConfig {
  std::vector<HeadlineInput> headlines;
  std::vector<fs::path> prices;
  textprep::CleanConfig clean;
  fs::path lexicon_path;
  double neutral_band = 0.05;  // |compound| <= band is Neutral and excluded from training
  EmbeddingKind embedding = EmbeddingKind::Word2vec;
  ModelKind model = ModelKind::Lstm;
  EmbeddingSettings embeddings;
  nn::NetworkConfig network;  // shape fields are filled in per run
  double split_fraction = 0.2;
  std::uint64_t seed = 0;
  fs::path output_dir;
  double signal_theta = 0.0;
  std::size_t top_n = 50;
  std::vector<EmbeddingKind> grid_embeddings;
  std::vector<ModelKind> grid_models;
  bool record_runtime = false;
  std::size_t grid_threads = 0;  // 0: one per hardware thread

  // Throws Config on an invalid combination or missing required path.
  void validate() const;
  nlohmann::json to_json() const;
};

// Relative paths resolve against the config file's directory; resource
// paths default to files under `data_dir`. A "seed" key is required.
PipelineConfig parse_config(const nlohmann::json& j, const fs::path& base_dir, const fs::path& data_dir);
PipelineConfig load_config(const fs::path& path, const fs::path& data_dir);

// ---- pipeline stages -----------------------------------------------------

struct IngestResult {
  std::vector<corpus::HeadlineRecord> headlines;
  std::vector<std::string> tickers;  // parallel to headlines
  std::vector<corpus::LoadReport> headline_reports;  // one per input
  std::vector<corpus::OhlcvBar> bars;
  std::vector<corpus::LoadReport> price_reports;
};

IngestResult ingest(const PipelineConfig& cfg, bool with_prices = true);

std::vector<textprep::TokenSequence> clean(const PipelineConfig& cfg, const std::vector<corpus::HeadlineRecord>& h);

// Training examples: headlines with a binary label. Lexicon labels drop the
// neutral band; column labels are used as given.
struct LabelledSet {
  std::vector<std::size_t> rows;  // indices into the headline list
  std::vector<double> labels;
  std::size_t dropped_neutral = 0;
};

LabelledSet label_headlines(const PipelineConfig& cfg, const std::vector<corpus::HeadlineRecord>& h);

// ---- subcommands ---------------------------------------------------------

// Each writes its artifacts under cfg.output_dir and returns a JSON summary.
nlohmann::json run_ingest(const PipelineConfig& cfg);
nlohmann::json run_clean(const PipelineConfig& cfg);
nlohmann::json run_score(const PipelineConfig& cfg);
nlohmann::json run_eda(const PipelineConfig& cfg);
nlohmann::json run_train_embedding(const PipelineConfig& cfg);
nlohmann::json run_train_model(const PipelineConfig& cfg);
nlohmann::json run_evaluate(const PipelineConfig& cfg, const fs::path& checkpoint = {});
nlohmann::json run_signals(const PipelineConfig& cfg);
nlohmann::json run_grid(const PipelineConfig& cfg);

struct GridRow {
  EmbeddingKind embedding;
  ModelKind model;
  double accuracy = 0, precision = 0, recall = 0, f1 = 0;
  std::size_t epochs = 0;
  double runtime_seconds = 0;
};

// Runs every (embedding, model) cell with a shared split; cell i trains with
// seed derive_seed(cfg.seed, i).
std::vector<GridRow> grid(const PipelineConfig& cfg);

// ---- synthetic corpora ---------------------------------------------------

struct SyntheticSet {
  std::vector<textprep::TokenSequence> sequences;
  std::vector<double> labels;
};

// Long-range recall: a class token ("keya*" -> 1, "keyb*" -> 0) followed by
// steps - 1 distractor tokens; the label depends only on the first token.
SyntheticSet recall_task(std::size_t n, std::size_t steps, std::uint64_t seed);

// Sentences drawn from one of two disjoint topic vocabularies; label = topic.
SyntheticSet two_topic_corpus(std::size_t n, std::size_t length, std::uint64_t seed);

// Writes a headline CSV (Date, Title, Label) for a synthetic set.
void write_synthetic_headlines(const fs::path& path, const SyntheticSet& set);

}  // namespace newsent::pipeline
