#include <cstdio>
#include <fstream>
#include <map>

#include "features.hpp"
#include "newsent/csv.hpp"
#include "newsent/eda.hpp"
#include "newsent/error.hpp"
#include "newsent/lexicon.hpp"
#include "newsent/metrics.hpp"
#include "newsent/signals.hpp"

namespace newsent::pipeline {

using detail::ensure_output_dir;
using detail::write_json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write file", path.string());
  return out;
}

}  // namespace

IngestResult ingest(const PipelineConfig& cfg, bool with_prices) {
  IngestResult r;
  for (const auto& in : cfg.headlines) {
    auto loaded = corpus::load_headlines(in.path, {in.date_column, in.text_column, in.label_column}, in.source);
    for (auto& h : loaded.records) {
      r.headlines.push_back(std::move(h));
      r.tickers.push_back(in.ticker);
    }
    r.headline_reports.push_back(loaded.report);
  }
  if (with_prices) {
    for (const auto& p : cfg.prices) {
      auto loaded = corpus::load_ohlcv(p);
      r.bars.insert(r.bars.end(), loaded.records.begin(), loaded.records.end());
      r.price_reports.push_back(loaded.report);
    }
  }
  return r;
}

std::vector<textprep::TokenSequence> clean(const PipelineConfig& cfg, const std::vector<corpus::HeadlineRecord>& h) {
  const auto res = textprep::Resources::load(cfg.clean);
  std::vector<textprep::TokenSequence> out;
  out.reserve(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    auto seq = textprep::clean_pipeline(h[i].text, cfg.clean, res);
    seq.origin = i;
    out.push_back(std::move(seq));
  }
  return out;
}

LabelledSet label_headlines(const PipelineConfig& cfg, const std::vector<corpus::HeadlineRecord>& h) {
  LabelledSet s;
  std::optional<lexicon::SentimentLexicon> lex;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i].label) {
      s.rows.push_back(i);
      s.labels.push_back(*h[i].label);
      continue;
    }
    if (!lex) lex = lexicon::load_lexicon(cfg.lexicon_path);
    const auto label = lexicon::label(lexicon::polarity_scores(h[i].text, *lex).compound, cfg.neutral_band);
    if (label == lexicon::Sentiment::Neutral) {
      ++s.dropped_neutral;
      continue;
    }
    s.rows.push_back(i);
    s.labels.push_back(label == lexicon::Sentiment::Positive ? 1.0 : 0.0);
  }
  return s;
}

nlohmann::json run_ingest(const PipelineConfig& cfg) {
  ensure_output_dir(cfg);
  const auto r = ingest(cfg);
  corpus::write_headlines(cfg.output_dir / "headlines.csv", r.headlines);
  {
    auto out = open_out(cfg.output_dir / "prices.csv");
    out << "Date,Open,High,Low,Close,Volume,Adj Close,Name\n";
    for (const auto& b : r.bars)
      csv::write_row(out, {b.date.iso(), fmt(b.open), fmt(b.high), fmt(b.low), fmt(b.close),
                           std::to_string(b.volume), fmt(b.adj_close), b.name});
  }
  nlohmann::json report = {{"headlines", nlohmann::json::array()}, {"prices", nlohmann::json::array()}};
  for (std::size_t i = 0; i < r.headline_reports.size(); ++i) {
    auto j = r.headline_reports[i].to_json();
    j["path"] = cfg.headlines[i].path.string();
    report["headlines"].push_back(j);
  }
  for (std::size_t i = 0; i < r.price_reports.size(); ++i) {
    auto j = r.price_reports[i].to_json();
    j["path"] = cfg.prices[i].string();
    report["prices"].push_back(j);
  }
  write_json(cfg.output_dir / "ingest_report.json", report);
  return {{"headlines", r.headlines.size()}, {"bars", r.bars.size()}, {"report", report}};
}

nlohmann::json run_clean(const PipelineConfig& cfg) {
  ensure_output_dir(cfg);
  const auto h = ingest(cfg, false).headlines;
  const auto docs = clean(cfg, h);
  auto out = open_out(cfg.output_dir / "clean.csv");
  out << "index,date,source,text,tokens\n";
  std::size_t empty = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    empty += docs[i].tokens.empty();
    csv::write_row(out, {std::to_string(i), h[i].date.iso(), h[i].source, h[i].text, textprep::join(docs[i])});
  }
  return {{"documents", docs.size()}, {"empty_after_cleaning", empty}};
}

nlohmann::json run_score(const PipelineConfig& cfg) {
  ensure_output_dir(cfg);
  const auto h = ingest(cfg, false).headlines;
  const auto lex = lexicon::load_lexicon(cfg.lexicon_path);
  auto out = open_out(cfg.output_dir / "scores.csv");
  out << "index,date,source,text,neg,neu,pos,compound,label\n";
  std::map<std::string, std::size_t> counts;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto s = lexicon::polarity_scores(h[i].text, lex);
    const auto label = std::string(lexicon::to_string(lexicon::label(s.compound, cfg.neutral_band)));
    ++counts[label];
    csv::write_row(out, {std::to_string(i), h[i].date.iso(), h[i].source, h[i].text, fmt(s.neg), fmt(s.neu),
                         fmt(s.pos), fmt(s.compound), label});
  }
  return {{"scored", h.size()}, {"labels", counts}};
}

nlohmann::json run_eda(const PipelineConfig& cfg) {
  ensure_output_dir(cfg);
  const auto h = ingest(cfg, false).headlines;
  if (h.empty()) throw Error(ErrorKind::EmptyDataset, "no headlines to explore");
  const auto docs = clean(cfg, h);
  const auto res = textprep::Resources::load(cfg.clean);
  std::vector<textprep::TokenSequence> raw;
  for (std::size_t i = 0; i < h.size(); ++i) {
    auto seq = textprep::tokenize(textprep::strip_special(textprep::lowercase(h[i].text)));
    seq.origin = i;
    raw.push_back(std::move(seq));
  }
  const auto freq = eda::top_frequencies(docs, cfg.top_n, !res.stopwords.empty(), &res.stopwords);
  eda::write_frequencies_csv(cfg.output_dir / "frequencies.csv", freq);
  eda::write_lengths_csv(cfg.output_dir / "lengths.csv", raw);
  const auto lengths = eda::sentence_length_summary(raw);

  const auto lex = lexicon::load_lexicon(cfg.lexicon_path);
  std::vector<int> labels;
  for (const auto& r : h)
    labels.push_back(static_cast<int>(lexicon::label(lexicon::polarity_scores(r.text, lex).compound, cfg.neutral_band)));
  const auto counts = eda::sentiment_distribution(labels);
  eda::write_sentiment_counts_csv(cfg.output_dir / "sentiment_counts.csv", counts);

  nlohmann::json summary = {
      {"documents", h.size()},
      {"sentence_length", lengths.to_json()},
      {"sentiment", {{"negative", counts.negative}, {"positive", counts.positive}, {"neutral", counts.neutral}}},
  };
  if (!res.stopwords.empty()) summary["stopwords"] = eda::stopword_share(raw, res.stopwords).summary.to_json();
  write_json(cfg.output_dir / "eda_summary.json", summary);
  return summary;
}

nlohmann::json run_train_embedding(const PipelineConfig& cfg) {
  ensure_output_dir(cfg);
  const auto h = ingest(cfg, false).headlines;
  const auto docs = clean(cfg, h);
  std::vector<std::size_t> all(docs.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto space = detail::fit_features(cfg, cfg.embedding, docs, all, derive_seed(cfg.seed, 1000));
  write_json(cfg.output_dir / "vocabulary.json", space.vocab.to_json());
  nlohmann::json summary = {{"embedding", to_string(cfg.embedding)},
                            {"documents", docs.size()},
                            {"vocabulary", space.vocab.size()},
                            {"dim", space.dim}};

  if (cfg.embedding == EmbeddingKind::Bow || cfg.embedding == EmbeddingKind::Tfidf) {
    const bool tfidf = cfg.embedding == EmbeddingKind::Tfidf;
    auto out = open_out(cfg.output_dir / (tfidf ? "tfidf.csv" : "bow.csv"));
    out << "document,index,weight\n";
    for (std::size_t d = 0; d < docs.size(); ++d) {
      const auto v = tfidf ? sparse::tfidf_matrix({docs[d]}, space.vocab).front() : sparse::bow_vector(docs[d], space.vocab);
      for (const auto& [idx, w] : v.entries) out << d << ',' << idx << ',' << fmt(w) << '\n';
    }
    return summary;
  }
  if (cfg.embedding == EmbeddingKind::SentenceVectors) {
    summary["vectors"] = space.sentence_vectors.size();
    return summary;
  }

  embed::EmbeddingMatrix matrix(space.dim);
  const auto& rows = *space.embedding_rows;
  std::size_t matched = 0;
  for (std::size_t i = 1; i <= space.vocab.size(); ++i) {
    std::span<const double> row(rows.data() + i * space.dim, space.dim);
    bool nonzero = false;
    for (double v : row) nonzero |= v != 0.0;
    if (!nonzero) continue;
    matrix.add_row(space.vocab.index_word[i], row);
    ++matched;
  }
  embed::save_text(cfg.output_dir / "embedding.txt", matrix);
  summary["coverage"] = space.coverage;
  summary["rows"] = matched;

  std::vector<std::string> top;
  for (std::size_t i = 1; i <= space.vocab.size() && top.size() < cfg.embeddings.projection_words; ++i)
    if (matrix.find(space.vocab.index_word[i])) top.push_back(space.vocab.index_word[i]);
  if (!top.empty()) {
    const auto proj = embed::pca_project_2d(matrix, top);
    embed::write_projection_csv(cfg.output_dir / "projection.csv", proj);
    summary["projection_variance"] = proj.variance_captured;
  }
  if (cfg.embedding == EmbeddingKind::Glove) {
    const auto x = embed::build_cooccurrence(docs, cfg.embeddings.window);
    embed::write_cooccurrence_csv(cfg.output_dir / "cooccurrence.csv", x);
  }
  return summary;
}

namespace {

void write_learning_curve(const fs::path& path, const nn::TrainReport& r) {
  auto out = open_out(path);
  out << "epoch,train_loss,train_accuracy,val_loss,val_accuracy\n";
  for (const auto& e : r.epochs)
    out << e.epoch << ',' << fmt(e.train_loss) << ',' << fmt(e.train_accuracy) << ',' << fmt(e.val_loss) << ','
        << fmt(e.val_accuracy) << '\n';
}

}  // namespace

nlohmann::json run_train_model(const PipelineConfig& cfg) {
  ensure_output_dir(cfg);
  const auto p = detail::prepare(cfg);
  const auto space = detail::fit_features(cfg, cfg.embedding, p.docs, p.train_docs, derive_seed(cfg.seed, 1000));
  const auto net = detail::network_for(cfg, space, cfg.model, cfg.seed);

  std::vector<std::size_t> rows = p.train_docs;
  rows.insert(rows.end(), p.val_docs.begin(), p.val_docs.end());
  std::vector<double> labels = p.train_labels;
  labels.insert(labels.end(), p.val_labels.begin(), p.val_labels.end());
  const auto data = detail::make_dataset(cfg, space, p.docs, rows, labels);
  corpus::SplitIndices split;
  for (std::size_t i = 0; i < p.train_docs.size(); ++i) split.train.push_back(i);
  for (std::size_t i = 0; i < p.val_docs.size(); ++i) split.validation.push_back(p.train_docs.size() + i);

  nn::TrainOptions opt;
  opt.embedding = space.embedding_rows;
  opt.vocab_hash = space.vocab.hash();
  const auto last = cfg.output_dir / "last.ckpt";
  opt.on_epoch = [&](const nn::EpochStats&, const nn::Checkpoint& c) { c.save(last); };
  const auto result = nn::train_on(net, data, split, opt);

  result.checkpoint.save(cfg.output_dir / "model.ckpt");
  write_json(cfg.output_dir / "train_report.json", result.report.to_json());
  write_json(cfg.output_dir / "vocabulary.json", space.vocab.to_json());
  write_learning_curve(cfg.output_dir / "learning_curve.csv", result.report);
  return {{"embedding", to_string(cfg.embedding)},
          {"model", to_string(cfg.model)},
          {"train_size", p.train_docs.size()},
          {"validation_size", p.val_docs.size()},
          {"dropped_neutral", p.labelled.dropped_neutral},
          {"embedding_coverage", space.coverage},
          {"report", result.report.to_json()}};
}

nlohmann::json run_evaluate(const PipelineConfig& cfg, const fs::path& checkpoint) {
  ensure_output_dir(cfg);
  const auto ckpt = nn::Checkpoint::load(checkpoint.empty() ? cfg.output_dir / "model.ckpt" : checkpoint);
  const auto vocab_path = cfg.output_dir / "vocabulary.json";
  std::ifstream vin(vocab_path);
  if (!vin) throw Error(ErrorKind::Io, "cannot open vocabulary (run train-model first)", vocab_path.string());
  sparse::Vocabulary vocab;
  try {
    vocab = sparse::Vocabulary::from_json(nlohmann::json::parse(vin));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("invalid vocabulary: ") + e.what(), vocab_path.string());
  }
  if (vocab.hash() != ckpt.vocab_hash)
    throw Error(ErrorKind::Schema, "vocabulary does not match the checkpoint", vocab_path.string());

  const auto p = detail::prepare(cfg);
  const auto space = detail::restore_features(cfg, cfg.embedding, std::move(vocab));
  const auto data = detail::make_dataset(cfg, space, p.docs, p.val_docs, p.val_labels);
  const auto probs = nn::predict(ckpt, data);
  std::vector<int> truth, pred;
  auto out = open_out(cfg.output_dir / "predictions.csv");
  out << "index,date,label,probability,prediction\n";
  for (std::size_t i = 0; i < probs.size(); ++i) {
    truth.push_back(static_cast<int>(p.val_labels[i]));
    pred.push_back(nn::classify(probs[i], ckpt.config.threshold));
    const auto doc = p.val_docs[i];
    out << doc << ',' << p.headlines[doc].date.iso() << ',' << truth.back() << ',' << fmt(probs[i]) << ','
        << pred.back() << '\n';
  }
  const auto rep = metrics::report(truth, pred);
  write_json(cfg.output_dir / "eval_report.json", rep.to_json());
  open_out(cfg.output_dir / "eval_report.txt") << rep.to_text();
  return rep.to_json();
}

nlohmann::json run_signals(const PipelineConfig& cfg) {
  ensure_output_dir(cfg);
  const auto r = ingest(cfg);
  const auto lex = lexicon::load_lexicon(cfg.lexicon_path);
  std::vector<signals::ScoreEntry> scores;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < r.headlines.size(); ++i) {
    if (r.tickers[i].empty()) {
      ++skipped;
      continue;
    }
    scores.push_back({r.headlines[i].date, r.tickers[i], lexicon::polarity_scores(r.headlines[i].text, lex).compound});
  }
  const auto joined = signals::join_signals(scores, r.bars, cfg.signal_theta);
  const auto files = signals::emit_chart_data(joined.records, cfg.output_dir);
  std::map<std::string, std::size_t> actions;
  for (const auto& rec : joined.records) ++actions[std::string(signals::to_string(rec.action))];
  nlohmann::json report = {{"headlines", r.headlines.size()},
                           {"skipped_no_ticker", skipped},
                           {"scores_in", scores.size()},
                           {"records_out", joined.records.size()},
                           {"matched", joined.matched},
                           {"unmatched", joined.unmatched},
                           {"actions", actions},
                           {"charts", files.svgs.size()}};
  write_json(cfg.output_dir / "signals_report.json", report);
  return report;
}

}  // namespace newsent::pipeline
