#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "newsent/embeddings.hpp"
#include "newsent/error.hpp"
#include "newsent/rng.hpp"

namespace newsent::embed::detail {

// Token ids ordered by descending count, lexicographic tie-break.
struct TrainVocab {
  std::vector<std::string> tokens;
  std::vector<std::uint64_t> counts;
  std::vector<std::vector<std::uint32_t>> sentences;
};

inline TrainVocab encode(const std::vector<TokenSequence>& corpus) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& seq : corpus)
    for (const auto& t : seq.tokens) ++counts[t];
  TrainVocab v;
  std::vector<std::pair<std::string, std::uint64_t>> items(counts.begin(), counts.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::unordered_map<std::string, std::uint32_t> index;
  for (const auto& [tok, n] : items) {
    index.emplace(tok, static_cast<std::uint32_t>(v.tokens.size()));
    v.tokens.push_back(tok);
    v.counts.push_back(n);
  }
  for (const auto& seq : corpus) {
    if (seq.tokens.size() < 2) continue;
    std::vector<std::uint32_t> ids;
    ids.reserve(seq.tokens.size());
    for (const auto& t : seq.tokens) ids.push_back(index.at(t));
    v.sentences.push_back(std::move(ids));
  }
  return v;
}

// Draws token ids with probability proportional to count^0.75.
class NoiseSampler {
 public:
  explicit NoiseSampler(const std::vector<std::uint64_t>& counts) {
    cumulative_.reserve(counts.size());
    double acc = 0;
    for (auto c : counts) {
      acc += std::pow(static_cast<double>(c), 0.75);
      cumulative_.push_back(acc);
    }
  }

  std::uint32_t draw(Rng& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::uint32_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

inline double dot(const double* a, const double* b, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline void check_common(std::size_t dim, std::size_t window, std::size_t epochs, double lr) {
  if (dim == 0) throw Error(ErrorKind::InvalidArgument, "embedding dimension must be positive", "dim");
  if (window == 0) throw Error(ErrorKind::InvalidArgument, "window must be positive", "window");
  if (epochs == 0) throw Error(ErrorKind::InvalidArgument, "epochs must be positive", "epochs");
  if (!(lr > 0)) throw Error(ErrorKind::InvalidArgument, "learning rate must be positive", "learning_rate");
}

}  // namespace newsent::embed::detail
