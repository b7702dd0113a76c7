#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "newsent/textprep.hpp"

namespace newsent::sparse {

using textprep::TokenSequence;

// Token <-> index map. Indices run 1..size() contiguously, ordered by
// descending count with lexicographic tie-break; 0 is reserved for padding
// and out-of-vocabulary.
struct Vocabulary {
  std::map<std::string, std::size_t> word_index;
  std::map<std::string, std::size_t> word_counts;
  std::map<std::string, std::size_t> word_docs;
  std::size_t document_count = 0;
  std::size_t max_words = 0;
  std::vector<std::string> index_word;  // index_word[0] == ""

  std::size_t size() const { return word_index.size(); }
  std::size_t index_of(const std::string& token) const;  // 0 when absent

  // Stable 64-bit FNV-1a digest of the (token, index) pairs.
  std::uint64_t hash() const;

  nlohmann::json to_json() const;
  static Vocabulary from_json(const nlohmann::json& j);
};

// Throws InvalidArgument on an empty corpus. max_words == 0 means unbounded.
Vocabulary fit_vocabulary(const std::vector<TokenSequence>& corpus, std::size_t max_words = 0);

// Sparse (index, weight) pairs with strictly increasing indices.
struct DocVector {
  std::vector<std::pair<std::size_t, double>> entries;
  bool normalized = false;

  bool empty() const { return entries.empty(); }
  double l2_norm() const;
};

DocVector bow_vector(const TokenSequence& doc, const Vocabulary& vocab);

// Smoothed idf: ln((1 + N) / (1 + df)) + 1, for every indexed token.
std::map<std::string, double> idf(const Vocabulary& vocab);

// count * idf, then L2-normalised per document.
std::vector<DocVector> tfidf_matrix(const std::vector<TokenSequence>& corpus, const Vocabulary& vocab);

std::vector<std::vector<std::int32_t>> texts_to_sequences(const std::vector<TokenSequence>& corpus,
                                                          const Vocabulary& vocab);

// Row-major N x cols integer matrix.
struct IdMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int32_t> data;

  std::int32_t at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  bool operator==(const IdMatrix&) const = default;
};

inline constexpr std::size_t kDefaultMaxLen = 50;

// Left-pads with 0; sequences longer than maxlen keep their first maxlen ids.
IdMatrix pad_sequences(const std::vector<std::vector<std::int32_t>>& seqs, std::size_t maxlen = kDefaultMaxLen);

// Dense N x width expansion; entry (index i) lands in column i - 1.
std::vector<double> densify(const std::vector<DocVector>& docs, std::size_t width);

}  // namespace newsent::sparse
