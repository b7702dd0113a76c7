#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "newsent/sparse.hpp"
#include "newsent/textprep.hpp"

namespace newsent::embed {

using textprep::TokenSequence;
using Vector = std::vector<double>;

inline constexpr std::size_t kDefaultDim = 100;

// Row-per-token dense matrix. Every token has exactly one row.
class EmbeddingMatrix {
 public:
  explicit EmbeddingMatrix(std::size_t dim = kDefaultDim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t rows() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Throws InvalidArgument on a dimension mismatch or a duplicate token.
  void add_row(const std::string& token, std::span<const double> values);

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  std::optional<std::size_t> find(const std::string& token) const;
  std::span<const double> at(const std::string& token) const;  // throws InvalidArgument if absent

  const std::vector<double>& data() const { return data_; }
  bool operator==(const EmbeddingMatrix& o) const {
    return dim_ == o.dim_ && tokens_ == o.tokens_ && data_ == o.data_;
  }

 private:
  std::size_t dim_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
};

// ---- similarity queries -------------------------------------------------

// Throws InvalidArgument when either vector is zero or sizes differ.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

using Ranked = std::vector<std::pair<std::string, double>>;

// Descending similarity, lexicographic tie-break, query excluded.
Ranked most_similar(const std::string& word, const EmbeddingMatrix& emb, std::size_t n);
Ranked nearest(std::span<const double> query, const EmbeddingMatrix& emb, std::size_t n,
               std::span<const std::string> exclude = {});
// Nearest tokens to vec(a) - vec(b) + vec(c), never returning a, b or c.
Ranked analogy(const std::string& a, const std::string& b, const std::string& c, const EmbeddingMatrix& emb,
               std::size_t n);

// ---- skip-gram with negative sampling ------------------------------------

struct SgnsConfig {
  std::size_t dim = kDefaultDim;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 1;
};

double sigmoid(double x);

// Per-pair objective: log sigma(w.c) for label 1, log sigma(-w.c) for label 0.
double sgns_pair_objective(std::span<const double> w, std::span<const double> c, int label);
// Coefficient g such that d(objective)/dw = g * c and d(objective)/dc = g * w.
double sgns_pair_coefficient(std::span<const double> w, std::span<const double> c, int label);

// Vocabulary order: descending count, lexicographic tie-break. Throws
// InvalidArgument when the corpus has fewer than two distinct tokens.
EmbeddingMatrix train_word2vec_sgns(const std::vector<TokenSequence>& corpus, const SgnsConfig& cfg);

// ---- fastText subwords ---------------------------------------------------

// Distinct n-grams (in code points) of "<word>" with minn <= n <= maxn, plus
// the wrapped token itself; sorted.
std::vector<std::string> char_ngrams(std::string_view word, std::size_t minn = 3, std::size_t maxn = 6);

std::uint32_t fnv1a_32(std::string_view bytes);

struct SubwordTable {
  std::size_t dim = kDefaultDim;
  std::size_t minn = 3;
  std::size_t maxn = 6;
  std::size_t bucket_count = 1u << 17;
  std::string hash_function = "fnv1a-32";
  std::vector<double> buckets;  // bucket_count x dim

  static SubwordTable zeros(std::size_t dim, std::size_t bucket_count, std::size_t minn = 3, std::size_t maxn = 6);

  std::size_t bucket_of(std::string_view ngram) const { return fnv1a_32(ngram) % bucket_count; }
  std::span<const double> bucket(std::size_t b) const { return {buckets.data() + b * dim, dim}; }
  std::span<double> bucket(std::size_t b) { return {buckets.data() + b * dim, dim}; }
};

// Exact sum of the bucket vectors of char_ngrams(word); defined for any word.
Vector fasttext_word_vector(std::string_view word, const SubwordTable& table);

struct FastTextConfig {
  std::size_t dim = kDefaultDim;
  std::size_t minn = 3;
  std::size_t maxn = 6;
  std::size_t bucket_count = 1u << 17;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.05;
  std::uint64_t seed = 1;
};

SubwordTable train_fasttext(const std::vector<TokenSequence>& corpus, const FastTextConfig& cfg);

// One row per word, built from subword sums.
EmbeddingMatrix subword_matrix(const SubwordTable& table, std::span<const std::string> words);

// ---- GloVe ---------------------------------------------------------------

struct CooccurrenceTable {
  std::vector<std::string> tokens;                                  // index -> token
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> cells;  // only X_ij > 0 stored
  std::size_t window = 0;
  bool symmetric = true;

  double total() const;
};

// X_ij += 1/distance for every ordered pair within the window, both directions.
CooccurrenceTable build_cooccurrence(const std::vector<TokenSequence>& corpus, std::size_t window);

void write_cooccurrence_csv(const std::filesystem::path& path, const CooccurrenceTable& table);

struct GloveConfig {
  std::size_t dim = kDefaultDim;
  double x_max = 100.0;
  double alpha = 0.75;
  std::size_t epochs = 25;
  double learning_rate = 0.05;
  std::uint64_t seed = 1;
};

// Weighting f(x) = (x / x_max)^alpha, capped at 1.
double glove_weight(double x, double x_max, double alpha);

struct GloveModel {
  std::size_t dim = 0;
  std::vector<double> w, w_tilde;  // V x dim
  std::vector<double> b, b_tilde;  // V

  double prediction(std::uint32_t i, std::uint32_t j) const;
};

// J = sum over stored cells of f(X_ij) (w_i . w~_j + b_i + b~_j - ln X_ij)^2.
double glove_loss(const GloveModel& model, const CooccurrenceTable& x, const GloveConfig& cfg);

struct GloveResult {
  GloveModel model;
  std::vector<double> epoch_loss;  // J after each epoch
  EmbeddingMatrix vectors;         // w + w~
};

// Per-cell AdaGrad steps in a seeded shuffled order. Throws InvalidArgument
// on an empty table.
GloveResult train_glove(const CooccurrenceTable& x, const GloveConfig& cfg);

// ---- files ---------------------------------------------------------------

// "token v1 ... vd" per line; d inferred from the first line. Throws Parse
// with "path:line" context on a line of different width.
EmbeddingMatrix load_pretrained_text(const std::filesystem::path& path);
void save_text(const std::filesystem::path& path, const EmbeddingMatrix& emb);

struct SentenceVector {
  std::string id;
  Vector values;
};

// Same whitespace format as load_pretrained_text; first field is a record id.
// Ids must be unique and every vector the same length.
std::vector<SentenceVector> load_sentence_vectors(const std::filesystem::path& path);

// ---- model boundary ------------------------------------------------------

struct LayerMatrix {
  std::size_t rows = 0;  // V + 1
  std::size_t dim = 0;
  std::vector<double> data;
  std::size_t matched = 0;
  std::size_t unmatched = 0;
  double coverage = 0.0;  // matched / V
};

// Row i holds the vector of the token with index i; row 0 and tokens missing
// from `pretrained` stay zero.
LayerMatrix embedding_layer_matrix(const sparse::Vocabulary& vocab, const EmbeddingMatrix& pretrained,
                                   std::size_t dim);

// ---- projection ----------------------------------------------------------

struct ProjectedPoint {
  std::string token;
  double x = 0, y = 0;
};

struct Projection {
  std::vector<ProjectedPoint> points;
  double variance_captured = 0;  // lambda1 + lambda2 of the covariance (1/n)
  double total_variance = 0;
};

// Symmetric eigen-decomposition by cyclic Jacobi rotations. Eigenvalues
// descending; eigenvectors are the columns of `vectors` (n x n row-major).
struct SymmetricEigen {
  std::vector<double> values;
  std::vector<double> vectors;
};
SymmetricEigen jacobi_eigen(std::vector<double> matrix, std::size_t n);

// Top-2 principal components of the mean-centred rows for `words`.
Projection pca_project_2d(const EmbeddingMatrix& emb, std::span<const std::string> words);

void write_projection_csv(const std::filesystem::path& path, const Projection& projection);

}  // namespace newsent::embed
