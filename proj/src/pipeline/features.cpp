#include "features.hpp"

#include <fstream>

#include "newsent/error.hpp"
#include "newsent/lexicon.hpp"

namespace newsent::pipeline::detail {

namespace {

std::vector<textprep::TokenSequence> pick(const std::vector<textprep::TokenSequence>& docs,
                                          const std::vector<std::size_t>& rows) {
  std::vector<textprep::TokenSequence> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(docs.at(r));
  return out;
}

}  // namespace

FeatureSpace restore_features(const PipelineConfig& cfg, EmbeddingKind kind, sparse::Vocabulary vocab) {
  FeatureSpace s;
  s.kind = kind;
  s.vocab = std::move(vocab);
  if (kind == EmbeddingKind::SentenceVectors) {
    for (auto& sv : embed::load_sentence_vectors(cfg.embeddings.sentence_vectors_path)) {
      s.dim = sv.values.size();
      s.sentence_vectors.emplace(sv.id, std::move(sv.values));
    }
  } else if (kind == EmbeddingKind::Bow || kind == EmbeddingKind::Tfidf) {
    s.dim = s.vocab.size();
  } else {
    s.dim = cfg.embeddings.dim;
  }
  return s;
}

FeatureSpace fit_features(const PipelineConfig& cfg, EmbeddingKind kind,
                          const std::vector<textprep::TokenSequence>& docs, const std::vector<std::size_t>& train,
                          std::uint64_t seed) {
  const auto train_docs = pick(docs, train);
  auto space = restore_features(cfg, kind, sparse::fit_vocabulary(train_docs, cfg.embeddings.max_words));
  if (!uses_token_ids(kind)) return space;

  const auto& e = cfg.embeddings;
  embed::EmbeddingMatrix matrix(e.dim);
  switch (kind) {
    case EmbeddingKind::Word2vec:
      matrix = embed::train_word2vec_sgns(train_docs, {e.dim, e.window, e.negatives, e.epochs, e.learning_rate, seed});
      break;
    case EmbeddingKind::Fasttext: {
      const auto table = embed::train_fasttext(
          train_docs, {e.dim, e.minn, e.maxn, e.bucket_count, e.window, e.negatives, e.epochs,
                       e.fasttext_learning_rate, seed});
      std::vector<std::string> words(space.vocab.index_word.begin() + 1, space.vocab.index_word.end());
      matrix = embed::subword_matrix(table, words);
      break;
    }
    case EmbeddingKind::Glove: {
      const auto x = embed::build_cooccurrence(train_docs, e.window);
      matrix = embed::train_glove(x, {e.dim, e.x_max, e.alpha, e.glove_epochs, e.glove_learning_rate, seed}).vectors;
      break;
    }
    case EmbeddingKind::Pretrained:
      matrix = embed::load_pretrained_text(e.pretrained_path);
      break;
    default:
      break;
  }
  const auto layer = embed::embedding_layer_matrix(space.vocab, matrix, matrix.dim());
  space.dim = matrix.dim();
  space.coverage = layer.coverage;
  space.embedding_rows = layer.data;
  return space;
}

nn::Dataset make_dataset(const PipelineConfig& cfg, const FeatureSpace& space,
                         const std::vector<textprep::TokenSequence>& docs, const std::vector<std::size_t>& rows,
                         const std::vector<double>& labels) {
  const auto selected = pick(docs, rows);
  switch (space.kind) {
    case EmbeddingKind::Bow:
    case EmbeddingKind::Tfidf: {
      std::vector<sparse::DocVector> vecs;
      if (space.kind == EmbeddingKind::Tfidf) {
        vecs = sparse::tfidf_matrix(selected, space.vocab);
      } else {
        for (const auto& d : selected) vecs.push_back(sparse::bow_vector(d, space.vocab));
      }
      return nn::Dataset::from_dense(selected.size(), space.dim, sparse::densify(vecs, space.dim), labels);
    }
    case EmbeddingKind::SentenceVectors: {
      std::vector<double> values;
      values.reserve(selected.size() * space.dim);
      for (const auto& d : selected) {
        const auto it = space.sentence_vectors.find(std::to_string(d.origin));
        if (it == space.sentence_vectors.end())
          throw Error(ErrorKind::Schema, "no sentence vector for headline " + std::to_string(d.origin),
                      cfg.embeddings.sentence_vectors_path.string());
        values.insert(values.end(), it->second.begin(), it->second.end());
      }
      return nn::Dataset::from_dense(selected.size(), space.dim, values, labels);
    }
    default:
      return nn::Dataset::from_ids(
          sparse::pad_sequences(sparse::texts_to_sequences(selected, space.vocab), cfg.embeddings.maxlen), labels);
  }
}

nn::NetworkConfig network_for(const PipelineConfig& cfg, const FeatureSpace& space, ModelKind model,
                              std::uint64_t seed) {
  nn::NetworkConfig n = cfg.network;
  n.recurrent = model == ModelKind::Lstm ? nn::RecurrentKind::Lstm : nn::RecurrentKind::SimpleRnn;
  n.seed = seed;
  if (uses_token_ids(space.kind)) {
    n.input = nn::InputKind::Ids;
    n.vocab_rows = space.vocab.size() + 1;
    n.embedding_dim = space.dim;
    n.input_features = 0;
  } else {
    n.input = nn::InputKind::Dense;
    n.input_features = space.dim;
    n.vocab_rows = 0;
  }
  n.validate();
  return n;
}

Prepared prepare(const PipelineConfig& cfg) {
  Prepared p;
  p.headlines = ingest(cfg, false).headlines;
  p.docs = clean(cfg, p.headlines);
  p.labelled = label_headlines(cfg, p.headlines);
  if (p.labelled.rows.size() < 2)
    throw Error(ErrorKind::EmptyDataset, "fewer than two labelled headlines to train on");
  p.split = corpus::split_indices(p.labelled.rows.size(), {cfg.split_fraction, cfg.seed});
  for (auto i : p.split.train) {
    p.train_docs.push_back(p.labelled.rows[i]);
    p.train_labels.push_back(p.labelled.labels[i]);
  }
  for (auto i : p.split.validation) {
    p.val_docs.push_back(p.labelled.rows[i]);
    p.val_labels.push_back(p.labelled.labels[i]);
  }
  return p;
}

void ensure_output_dir(const PipelineConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory: " + ec.message(), cfg.output_dir.string());
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write file", path.string());
  out << j.dump(2) << '\n';
}

}  // namespace newsent::pipeline::detail
