#include <cmath>

#include "internal.hpp"

namespace newsent::embed {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double sgns_pair_objective(std::span<const double> w, std::span<const double> c, int label) {
  const double s = detail::dot(w.data(), c.data(), w.size());
  return std::log(sigmoid(label ? s : -s));
}

double sgns_pair_coefficient(std::span<const double> w, std::span<const double> c, int label) {
  return static_cast<double>(label) - sigmoid(detail::dot(w.data(), c.data(), w.size()));
}

EmbeddingMatrix train_word2vec_sgns(const std::vector<TokenSequence>& corpus, const SgnsConfig& cfg) {
  detail::check_common(cfg.dim, cfg.window, cfg.epochs, cfg.learning_rate);
  const auto vocab = detail::encode(corpus);
  if (vocab.tokens.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "corpus needs at least two distinct tokens", "corpus");
  const std::size_t V = vocab.tokens.size(), d = cfg.dim;

  Rng rng(cfg.seed);
  std::vector<double> in(V * d), out(V * d, 0.0);
  for (auto& x : in) x = (rng.uniform() - 0.5) / static_cast<double>(d);
  const detail::NoiseSampler noise(vocab.counts);

  std::size_t total = 0;
  for (const auto& s : vocab.sentences) total += s.size();
  total *= cfg.epochs;
  std::size_t processed = 0;

  std::vector<double> grad(d);
  std::vector<std::size_t> order(vocab.sentences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t si : order) {
      const auto& sent = vocab.sentences[si];
      for (std::size_t pos = 0; pos < sent.size(); ++pos, ++processed) {
        const double progress = static_cast<double>(processed) / static_cast<double>(total);
        const double lr = cfg.learning_rate * std::max(1e-4, 1.0 - progress);
        const std::uint32_t center = sent[pos];
        double* w = &in[center * d];
        const std::size_t lo = pos >= cfg.window ? pos - cfg.window : 0;
        const std::size_t hi = std::min(sent.size() - 1, pos + cfg.window);
        for (std::size_t cpos = lo; cpos <= hi; ++cpos) {
          if (cpos == pos) continue;
          const std::uint32_t context = sent[cpos];
          std::fill(grad.begin(), grad.end(), 0.0);
          for (std::size_t k = 0; k <= cfg.negatives; ++k) {
            std::uint32_t target = context;
            int label = 1;
            if (k > 0) {
              target = noise.draw(rng);
              if (target == context) continue;
              label = 0;
            }
            double* c = &out[target * d];
            const double g = lr * sgns_pair_coefficient({w, d}, {c, d}, label);
            for (std::size_t j = 0; j < d; ++j) grad[j] += g * c[j];
            for (std::size_t j = 0; j < d; ++j) c[j] += g * w[j];
          }
          for (std::size_t j = 0; j < d; ++j) w[j] += grad[j];
        }
      }
    }
  }

  EmbeddingMatrix emb(d);
  for (std::size_t i = 0; i < V; ++i) emb.add_row(vocab.tokens[i], {&in[i * d], d});
  return emb;
}

}  // namespace newsent::embed
