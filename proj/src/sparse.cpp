#include "newsent/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "newsent/error.hpp"

namespace newsent::sparse {

std::size_t Vocabulary::index_of(const std::string& token) const {
  auto it = word_index.find(token);
  return it == word_index.end() ? 0 : it->second;
}

std::uint64_t Vocabulary::hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  auto mix = [&h](std::string_view bytes) {
    for (char c : bytes) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
  };
  for (std::size_t i = 1; i < index_word.size(); ++i) {
    mix(index_word[i]);
    mix(std::string_view("\0", 1));
  }
  return h;
}

nlohmann::json Vocabulary::to_json() const {
  return {{"word_index", word_index},
          {"word_counts", word_counts},
          {"word_docs", word_docs},
          {"document_count", document_count},
          {"max_words", max_words}};
}

Vocabulary Vocabulary::from_json(const nlohmann::json& j) {
  Vocabulary v;
  v.word_index = j.at("word_index").get<std::map<std::string, std::size_t>>();
  v.word_counts = j.at("word_counts").get<std::map<std::string, std::size_t>>();
  v.word_docs = j.at("word_docs").get<std::map<std::string, std::size_t>>();
  v.document_count = j.at("document_count").get<std::size_t>();
  v.max_words = j.value("max_words", std::size_t{0});
  v.index_word.assign(v.word_index.size() + 1, std::string());
  for (const auto& [token, idx] : v.word_index) {
    if (idx == 0 || idx > v.word_index.size() || !v.index_word[idx].empty()) {
      throw Error(ErrorKind::Parse, "word_index is not contiguous 1..V", token);
    }
    v.index_word[idx] = token;
  }
  return v;
}

Vocabulary fit_vocabulary(const std::vector<TokenSequence>& corpus, std::size_t max_words) {
  if (corpus.empty()) throw Error(ErrorKind::InvalidArgument, "cannot fit a vocabulary on an empty corpus");
  Vocabulary v;
  v.max_words = max_words;
  v.document_count = corpus.size();
  for (const auto& doc : corpus) {
    std::set<std::string_view> distinct;
    for (const auto& t : doc.tokens) {
      ++v.word_counts[t];
      distinct.insert(t);
    }
    for (auto t : distinct) ++v.word_docs[std::string(t)];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(v.word_counts.begin(), v.word_counts.end());
  // word_counts iterates lexicographically, so a stable sort keeps that tie order.
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (max_words > 0 && ranked.size() > max_words) ranked.resize(max_words);
  v.index_word.assign(1, std::string());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    v.word_index[ranked[i].first] = i + 1;
    v.index_word.push_back(ranked[i].first);
  }
  return v;
}

double DocVector::l2_norm() const {
  double s = 0.0;
  for (const auto& [i, w] : entries) s += w * w;
  return std::sqrt(s);
}

DocVector bow_vector(const TokenSequence& doc, const Vocabulary& vocab) {
  std::map<std::size_t, double> counts;
  for (const auto& t : doc.tokens) {
    if (auto idx = vocab.index_of(t); idx != 0) counts[idx] += 1.0;
  }
  DocVector out;
  out.entries.assign(counts.begin(), counts.end());
  return out;
}

std::map<std::string, double> idf(const Vocabulary& vocab) {
  std::map<std::string, double> out;
  const double n = static_cast<double>(vocab.document_count);
  for (const auto& [token, idx] : vocab.word_index) {
    const double df = static_cast<double>(vocab.word_docs.at(token));
    out[token] = std::log((1.0 + n) / (1.0 + df)) + 1.0;
  }
  return out;
}

std::vector<DocVector> tfidf_matrix(const std::vector<TokenSequence>& corpus, const Vocabulary& vocab) {
  const auto weights = idf(vocab);
  std::vector<double> by_index(vocab.size() + 1, 0.0);
  for (const auto& [token, w] : weights) by_index[vocab.index_of(token)] = w;

  std::vector<DocVector> out;
  out.reserve(corpus.size());
  for (const auto& doc : corpus) {
    DocVector v = bow_vector(doc, vocab);
    for (auto& [i, w] : v.entries) w *= by_index[i];
    const double norm = v.l2_norm();
    if (norm > 0) {
      for (auto& [i, w] : v.entries) w /= norm;
    }
    v.normalized = true;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::vector<std::int32_t>> texts_to_sequences(const std::vector<TokenSequence>& corpus,
                                                          const Vocabulary& vocab) {
  std::vector<std::vector<std::int32_t>> out;
  out.reserve(corpus.size());
  for (const auto& doc : corpus) {
    std::vector<std::int32_t> seq;
    for (const auto& t : doc.tokens) {
      if (auto idx = vocab.index_of(t); idx != 0) seq.push_back(static_cast<std::int32_t>(idx));
    }
    out.push_back(std::move(seq));
  }
  return out;
}

IdMatrix pad_sequences(const std::vector<std::vector<std::int32_t>>& seqs, std::size_t maxlen) {
  if (maxlen == 0) throw Error(ErrorKind::InvalidArgument, "maxlen must be positive", "maxlen");
  IdMatrix m{seqs.size(), maxlen, std::vector<std::int32_t>(seqs.size() * maxlen, 0)};
  for (std::size_t r = 0; r < seqs.size(); ++r) {
    const auto& s = seqs[r];
    const std::size_t keep = std::min(s.size(), maxlen);
    const std::size_t offset = maxlen - keep;
    std::copy_n(s.begin(), keep, m.data.begin() + static_cast<std::ptrdiff_t>(r * maxlen + offset));
  }
  return m;
}

std::vector<double> densify(const std::vector<DocVector>& docs, std::size_t width) {
  std::vector<double> out(docs.size() * width, 0.0);
  for (std::size_t r = 0; r < docs.size(); ++r) {
    for (const auto& [i, w] : docs[r].entries) {
      if (i >= 1 && i <= width) out[r * width + (i - 1)] = w;
    }
  }
  return out;
}

}  // namespace newsent::sparse
