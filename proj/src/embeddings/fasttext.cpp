#include <algorithm>
#include <set>

#include "../textprep/utf8.hpp"
#include "internal.hpp"

namespace newsent::embed {

std::uint32_t fnv1a_32(std::string_view bytes) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

std::vector<std::string> char_ngrams(std::string_view word, std::size_t minn, std::size_t maxn) {
  if (minn == 0 || maxn < minn) throw Error(ErrorKind::InvalidArgument, "require 0 < minn <= maxn", "minn/maxn");
  const std::string wrapped = "<" + std::string(word) + ">";
  std::vector<std::size_t> starts;  // byte offset of each code point, plus the end
  std::size_t pos = 0;
  while (pos < wrapped.size()) {
    starts.push_back(pos);
    newsent::textprep::detail::next_code_point(wrapped, pos);
  }
  const std::size_t n_cp = starts.size();
  starts.push_back(wrapped.size());

  std::set<std::string> grams;
  for (std::size_t i = 0; i < n_cp; ++i)
    for (std::size_t n = minn; n <= maxn && i + n <= n_cp; ++n)
      grams.insert(wrapped.substr(starts[i], starts[i + n] - starts[i]));
  grams.insert(wrapped);
  return {grams.begin(), grams.end()};
}

SubwordTable SubwordTable::zeros(std::size_t dim, std::size_t bucket_count, std::size_t minn, std::size_t maxn) {
  if (dim == 0 || bucket_count == 0)
    throw Error(ErrorKind::InvalidArgument, "dimension and bucket count must be positive");
  SubwordTable t;
  t.dim = dim;
  t.bucket_count = bucket_count;
  t.minn = minn;
  t.maxn = maxn;
  t.buckets.assign(dim * bucket_count, 0.0);
  return t;
}

namespace {

std::vector<std::size_t> word_buckets(std::string_view word, const SubwordTable& table) {
  std::vector<std::size_t> out;
  for (const auto& g : char_ngrams(word, table.minn, table.maxn)) out.push_back(table.bucket_of(g));
  return out;
}

}  // namespace

Vector fasttext_word_vector(std::string_view word, const SubwordTable& table) {
  Vector v(table.dim, 0.0);
  for (std::size_t b : word_buckets(word, table)) {
    auto row = table.bucket(b);
    for (std::size_t j = 0; j < table.dim; ++j) v[j] += row[j];
  }
  return v;
}

SubwordTable train_fasttext(const std::vector<TokenSequence>& corpus, const FastTextConfig& cfg) {
  detail::check_common(cfg.dim, cfg.window, cfg.epochs, cfg.learning_rate);
  auto table = SubwordTable::zeros(cfg.dim, cfg.bucket_count, cfg.minn, cfg.maxn);
  const auto vocab = detail::encode(corpus);
  if (vocab.tokens.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "corpus needs at least two distinct tokens", "corpus");
  const std::size_t V = vocab.tokens.size(), d = cfg.dim;

  Rng rng(cfg.seed);
  for (auto& x : table.buckets) x = rng.uniform(-1.0, 1.0) / static_cast<double>(d);
  std::vector<double> out(V * d, 0.0);
  std::vector<std::vector<std::size_t>> subwords(V);
  for (std::size_t i = 0; i < V; ++i) subwords[i] = word_buckets(vocab.tokens[i], table);
  const detail::NoiseSampler noise(vocab.counts);

  std::size_t total = 0;
  for (const auto& s : vocab.sentences) total += s.size();
  total *= cfg.epochs;
  std::size_t processed = 0;

  std::vector<double> h(d), grad(d);
  std::vector<std::size_t> order(vocab.sentences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t si : order) {
      const auto& sent = vocab.sentences[si];
      for (std::size_t pos = 0; pos < sent.size(); ++pos, ++processed) {
        const double progress = static_cast<double>(processed) / static_cast<double>(total);
        const double lr = cfg.learning_rate * std::max(1e-4, 1.0 - progress);
        const auto& buckets = subwords[sent[pos]];
        const double share = 1.0 / static_cast<double>(buckets.size());
        const std::size_t lo = pos >= cfg.window ? pos - cfg.window : 0;
        const std::size_t hi = std::min(sent.size() - 1, pos + cfg.window);
        for (std::size_t cpos = lo; cpos <= hi; ++cpos) {
          if (cpos == pos) continue;
          std::fill(h.begin(), h.end(), 0.0);
          for (std::size_t b : buckets) {
            auto row = table.bucket(b);
            for (std::size_t j = 0; j < d; ++j) h[j] += row[j];
          }
          std::fill(grad.begin(), grad.end(), 0.0);
          const std::uint32_t context = sent[cpos];
          for (std::size_t k = 0; k <= cfg.negatives; ++k) {
            std::uint32_t target = context;
            int label = 1;
            if (k > 0) {
              target = noise.draw(rng);
              if (target == context) continue;
              label = 0;
            }
            double* c = &out[target * d];
            const double g = lr * sgns_pair_coefficient(h, {c, d}, label);
            for (std::size_t j = 0; j < d; ++j) grad[j] += g * c[j];
            for (std::size_t j = 0; j < d; ++j) c[j] += g * h[j];
          }
          for (std::size_t b : buckets) {
            auto row = table.bucket(b);
            for (std::size_t j = 0; j < d; ++j) row[j] += share * grad[j];
          }
        }
      }
    }
  }
  return table;
}

EmbeddingMatrix subword_matrix(const SubwordTable& table, std::span<const std::string> words) {
  EmbeddingMatrix emb(table.dim);
  for (const auto& w : words)
    if (!emb.find(w)) emb.add_row(w, fasttext_word_vector(w, table));
  return emb;
}

}  // namespace newsent::embed
