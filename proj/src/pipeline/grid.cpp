#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <thread>

#include "features.hpp"
#include "newsent/error.hpp"
#include "newsent/metrics.hpp"

namespace newsent::pipeline {

std::vector<GridRow> grid(const PipelineConfig& cfg) {
  const auto p = detail::prepare(cfg);

  struct Cell {
    std::size_t embedding = 0;
    ModelKind model = ModelKind::Lstm;
  };
  std::vector<detail::FeatureSpace> spaces;
  std::vector<nn::Dataset> train_sets, val_sets;
  for (std::size_t e = 0; e < cfg.grid_embeddings.size(); ++e) {
    spaces.push_back(detail::fit_features(cfg, cfg.grid_embeddings[e], p.docs, p.train_docs,
                                          derive_seed(cfg.seed, 1000 + e)));
    train_sets.push_back(detail::make_dataset(cfg, spaces.back(), p.docs, p.train_docs, p.train_labels));
    val_sets.push_back(detail::make_dataset(cfg, spaces.back(), p.docs, p.val_docs, p.val_labels));
  }
  std::vector<Cell> cells;
  for (std::size_t e = 0; e < cfg.grid_embeddings.size(); ++e)
    for (auto m : cfg.grid_models) cells.push_back({e, m});

  std::vector<GridRow> rows(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  auto run_cell = [&](std::size_t i) {
    try {
      const auto& c = cells[i];
      const auto start = std::chrono::steady_clock::now();
      const auto& space = spaces[c.embedding];
      const auto net = detail::network_for(cfg, space, c.model, derive_seed(cfg.seed, i));

      // Train and validation rows stacked so the split is shared by every cell.
      nn::Dataset data = train_sets[c.embedding];
      const auto& val = val_sets[c.embedding];
      data.ids.insert(data.ids.end(), val.ids.begin(), val.ids.end());
      data.features.insert(data.features.end(), val.features.begin(), val.features.end());
      data.labels.insert(data.labels.end(), val.labels.begin(), val.labels.end());
      data.n += val.n;
      corpus::SplitIndices split;
      for (std::size_t k = 0; k < train_sets[c.embedding].n; ++k) split.train.push_back(k);
      for (std::size_t k = 0; k < val.n; ++k) split.validation.push_back(train_sets[c.embedding].n + k);

      nn::TrainOptions opt;
      opt.embedding = space.embedding_rows;
      opt.vocab_hash = space.vocab.hash();
      const auto result = nn::train_on(net, data, split, opt);

      std::vector<int> truth, pred;
      if (val.n > 0) {
        const auto probs = nn::predict(result.checkpoint, val);
        for (std::size_t k = 0; k < probs.size(); ++k) {
          truth.push_back(static_cast<int>(val.labels[k]));
          pred.push_back(nn::classify(probs[k], net.threshold));
        }
      }
      const auto rep = metrics::report(truth, pred);
      GridRow& row = rows[i];
      row.embedding = cfg.grid_embeddings[c.embedding];
      row.model = c.model;
      row.accuracy = rep.accuracy;
      row.precision = rep.macro_precision;
      row.recall = rep.macro_recall;
      row.f1 = rep.macro_f1;
      row.epochs = result.report.epochs.size();
      row.runtime_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  std::size_t threads = cfg.grid_threads ? cfg.grid_threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, cells.size());
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) run_cell(i);
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

nlohmann::json run_grid(const PipelineConfig& cfg) {
  detail::ensure_output_dir(cfg);
  const auto rows = grid(cfg);
  auto write = [&](const fs::path& path, bool runtime) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write file", path.string());
    out << "embedding,model,accuracy,precision,recall,f1,epochs,runtime\n";
    char buf[160];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%s,%s,%.6f,%.6f,%.6f,%.6f,%zu,", to_string(r.embedding).data(),
                    to_string(r.model).data(), r.accuracy, r.precision, r.recall, r.f1, r.epochs);
      out << buf;
      if (runtime) {
        std::snprintf(buf, sizeof buf, "%.3f", r.runtime_seconds);
        out << buf;
      }
      out << '\n';
    }
  };
  write(cfg.output_dir / "comparison.csv", cfg.record_runtime);
  write(cfg.output_dir / "timings.csv", true);
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows)
    j.push_back({{"embedding", to_string(r.embedding)},
                 {"model", to_string(r.model)},
                 {"accuracy", r.accuracy},
                 {"f1", r.f1},
                 {"epochs", r.epochs}});
  return {{"cells", rows.size()}, {"rows", j}};
}

}  // namespace newsent::pipeline
