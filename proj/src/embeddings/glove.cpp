#include <cmath>
#include <cstdio>
#include <fstream>

#include "internal.hpp"

namespace newsent::embed {

double CooccurrenceTable::total() const {
  double s = 0;
  for (const auto& [_, x] : cells) s += x;
  return s;
}

CooccurrenceTable build_cooccurrence(const std::vector<TokenSequence>& corpus, std::size_t window) {
  if (window == 0) throw Error(ErrorKind::InvalidArgument, "window must be positive", "window");
  const auto vocab = detail::encode(corpus);
  CooccurrenceTable t;
  t.tokens = vocab.tokens;
  t.window = window;
  for (const auto& sent : vocab.sentences) {
    for (std::size_t i = 0; i < sent.size(); ++i) {
      for (std::size_t j = i + 1; j < sent.size() && j - i <= window; ++j) {
        const double inc = 1.0 / static_cast<double>(j - i);
        t.cells[{sent[i], sent[j]}] += inc;
        t.cells[{sent[j], sent[i]}] += inc;
      }
    }
  }
  return t;
}

void write_cooccurrence_csv(const std::filesystem::path& path, const CooccurrenceTable& table) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write file", path.string());
  out << "i,j,x\n";
  char buf[40];
  for (const auto& [key, x] : table.cells) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << table.tokens[key.first] << ',' << table.tokens[key.second] << ',' << buf << '\n';
  }
}

double glove_weight(double x, double x_max, double alpha) {
  return x < x_max ? std::pow(x / x_max, alpha) : 1.0;
}

double GloveModel::prediction(std::uint32_t i, std::uint32_t j) const {
  return detail::dot(&w[i * dim], &w_tilde[j * dim], dim) + b[i] + b_tilde[j];
}

double glove_loss(const GloveModel& model, const CooccurrenceTable& x, const GloveConfig& cfg) {
  double j = 0;
  for (const auto& [key, v] : x.cells) {
    const double diff = model.prediction(key.first, key.second) - std::log(v);
    j += glove_weight(v, cfg.x_max, cfg.alpha) * diff * diff;
  }
  return j;
}

GloveResult train_glove(const CooccurrenceTable& x, const GloveConfig& cfg) {
  detail::check_common(cfg.dim, 1, cfg.epochs, cfg.learning_rate);
  if (x.cells.empty()) throw Error(ErrorKind::InvalidArgument, "co-occurrence table is empty", "cooccurrence");
  if (!(cfg.x_max > 0) || !(cfg.alpha > 0))
    throw Error(ErrorKind::InvalidArgument, "x_max and alpha must be positive", "x_max/alpha");
  const std::size_t V = x.tokens.size(), d = cfg.dim;

  GloveResult r{GloveModel{}, {}, EmbeddingMatrix(d)};
  auto& m = r.model;
  m.dim = d;
  Rng rng(cfg.seed);
  auto init = [&](std::vector<double>& v, std::size_t n) {
    v.resize(n);
    for (auto& e : v) e = (rng.uniform() - 0.5) / static_cast<double>(d);
  };
  init(m.w, V * d);
  init(m.w_tilde, V * d);
  init(m.b, V);
  init(m.b_tilde, V);
  std::vector<double> gw(V * d, 1.0), gwt(V * d, 1.0), gb(V, 1.0), gbt(V, 1.0);

  struct Cell {
    std::uint32_t i, j;
    double weight, log_x;
  };
  std::vector<Cell> cells;
  cells.reserve(x.cells.size());
  for (const auto& [key, v] : x.cells)
    cells.push_back({key.first, key.second, glove_weight(v, cfg.x_max, cfg.alpha), std::log(v)});

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<Cell>(cells));
    for (const auto& c : cells) {
      double* wi = &m.w[c.i * d];
      double* wj = &m.w_tilde[c.j * d];
      const double diff = detail::dot(wi, wj, d) + m.b[c.i] + m.b_tilde[c.j] - c.log_x;
      const double fdiff = 2.0 * c.weight * diff;
      double* gi = &gw[c.i * d];
      double* gj = &gwt[c.j * d];
      for (std::size_t k = 0; k < d; ++k) {
        const double g1 = fdiff * wj[k];
        const double g2 = fdiff * wi[k];
        wi[k] -= cfg.learning_rate * g1 / std::sqrt(gi[k]);
        wj[k] -= cfg.learning_rate * g2 / std::sqrt(gj[k]);
        gi[k] += g1 * g1;
        gj[k] += g2 * g2;
      }
      m.b[c.i] -= cfg.learning_rate * fdiff / std::sqrt(gb[c.i]);
      m.b_tilde[c.j] -= cfg.learning_rate * fdiff / std::sqrt(gbt[c.j]);
      gb[c.i] += fdiff * fdiff;
      gbt[c.j] += fdiff * fdiff;
    }
    r.epoch_loss.push_back(glove_loss(m, x, cfg));
  }

  Vector row(d);
  for (std::size_t i = 0; i < V; ++i) {
    for (std::size_t k = 0; k < d; ++k) row[k] = m.w[i * d + k] + m.w_tilde[i * d + k];
    r.vectors.add_row(x.tokens[i], row);
  }
  return r;
}

}  // namespace newsent::embed
