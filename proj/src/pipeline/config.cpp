#include <fstream>

#include "newsent/error.hpp"
#include "newsent/pipeline.hpp"

namespace newsent::pipeline {

namespace {

constexpr std::pair<EmbeddingKind, std::string_view> kEmbeddingNames[] = {
    {EmbeddingKind::Bow, "bow"},
    {EmbeddingKind::Tfidf, "tfidf"},
    {EmbeddingKind::Word2vec, "word2vec"},
    {EmbeddingKind::Glove, "glove"},
    {EmbeddingKind::Fasttext, "fasttext"},
    {EmbeddingKind::Pretrained, "pretrained"},
    {EmbeddingKind::SentenceVectors, "sentence_vectors"},
};

[[noreturn]] void config_error(const std::string& msg, const std::string& field) {
  throw Error(ErrorKind::Config, msg, field);
}

}  // namespace

std::string_view to_string(EmbeddingKind k) {
  for (const auto& [kind, name] : kEmbeddingNames)
    if (kind == k) return name;
  return "bow";
}

std::string_view to_string(ModelKind k) { return k == ModelKind::Rnn ? "rnn" : "lstm"; }

EmbeddingKind embedding_from_string(std::string_view s) {
  for (const auto& [kind, name] : kEmbeddingNames)
    if (name == s) return kind;
  config_error("unknown embedding '" + std::string(s) + "'", "embedding");
}

ModelKind model_from_string(std::string_view s) {
  if (s == "rnn" || s == "simple_rnn") return ModelKind::Rnn;
  if (s == "lstm") return ModelKind::Lstm;
  config_error("unknown model '" + std::string(s) + "'", "model");
}

bool uses_token_ids(EmbeddingKind k) {
  return k == EmbeddingKind::Word2vec || k == EmbeddingKind::Glove || k == EmbeddingKind::Fasttext ||
         k == EmbeddingKind::Pretrained;
}

void PipelineConfig::validate() const {
  if (headlines.empty()) config_error("at least one headline input is required", "inputs.headlines");
  for (const auto& h : headlines)
    if (h.path.empty()) config_error("headline input without a path", "inputs.headlines");
  try {
    clean.validate();
  } catch (const Error& e) {
    config_error(e.what(), "clean");
  }
  if (!(neutral_band >= 0)) config_error("neutral_band must be non-negative", "labels.neutral_band");
  if (!(split_fraction > 0 && split_fraction < 1)) config_error("split fraction must be in (0,1)", "split.fraction");
  if (!(signal_theta >= 0)) config_error("signal theta must be non-negative", "signals.theta");
  if (output_dir.empty()) config_error("output directory is required", "output_dir");
  if (embeddings.dim == 0 || embeddings.window == 0 || embeddings.maxlen == 0)
    config_error("embedding dim, window and maxlen must be positive", "embeddings");
  if (embeddings.minn == 0 || embeddings.maxn < embeddings.minn) config_error("require 0 < minn <= maxn", "embeddings");
  if (embeddings.bucket_count == 0) config_error("bucket_count must be positive", "embeddings.bucket_count");
  auto check_combo = [&](EmbeddingKind e, const char* field) {
    if (e == EmbeddingKind::Pretrained && embeddings.pretrained_path.empty())
      config_error("the pretrained embedding needs embeddings.pretrained_path", field);
    if (e == EmbeddingKind::SentenceVectors && embeddings.sentence_vectors_path.empty())
      config_error("sentence_vectors needs embeddings.sentence_vectors_path", field);
  };
  check_combo(embedding, "embedding");
  for (auto e : grid_embeddings) check_combo(e, "grid.embeddings");
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json inputs = {{"headlines", nlohmann::json::array()}, {"prices", nlohmann::json::array()}};
  for (const auto& h : headlines)
    inputs["headlines"].push_back({{"path", h.path.string()},
                                   {"date_column", h.date_column},
                                   {"text_column", h.text_column},
                                   {"label_column", h.label_column},
                                   {"source", h.source},
                                   {"ticker", h.ticker}});
  for (const auto& p : prices) inputs["prices"].push_back(p.string());
  nlohmann::json grid_e = nlohmann::json::array(), grid_m = nlohmann::json::array();
  for (auto e : grid_embeddings) grid_e.push_back(to_string(e));
  for (auto m : grid_models) grid_m.push_back(to_string(m));
  const auto& e = embeddings;
  return {
      {"seed", seed},
      {"output_dir", output_dir.string()},
      {"inputs", inputs},
      {"clean",
       {{"lowercase", clean.lowercase},
        {"strip_special", clean.strip_special},
        {"normalize_slang", clean.normalize_slang},
        {"stopwords", clean.stopwords},
        {"stem", clean.stem},
        {"lemmatize", clean.lemmatize},
        {"pos_tag", clean.pos_tag},
        {"stopword_path", clean.stopword_path.string()},
        {"slang_path", clean.slang_path.string()},
        {"lemma_exceptions_path", clean.lemma_exceptions_path.string()}}},
      {"lexicon", lexicon_path.string()},
      {"labels", {{"neutral_band", neutral_band}}},
      {"embedding", to_string(embedding)},
      {"model", to_string(model)},
      {"embeddings",
       {{"dim", e.dim},
        {"window", e.window},
        {"negatives", e.negatives},
        {"epochs", e.epochs},
        {"learning_rate", e.learning_rate},
        {"minn", e.minn},
        {"maxn", e.maxn},
        {"bucket_count", e.bucket_count},
        {"fasttext_learning_rate", e.fasttext_learning_rate},
        {"x_max", e.x_max},
        {"alpha", e.alpha},
        {"glove_epochs", e.glove_epochs},
        {"glove_learning_rate", e.glove_learning_rate},
        {"max_words", e.max_words},
        {"maxlen", e.maxlen},
        {"projection_words", e.projection_words},
        {"pretrained_path", e.pretrained_path.string()},
        {"sentence_vectors_path", e.sentence_vectors_path.string()}}},
      {"network", network.to_json()},
      {"split", {{"fraction", split_fraction}}},
      {"signals", {{"theta", signal_theta}}},
      {"eda", {{"top_n", top_n}}},
      {"grid",
       {{"embeddings", grid_e}, {"models", grid_m}, {"record_runtime", record_runtime}, {"threads", grid_threads}}},
  };
}

PipelineConfig parse_config(const nlohmann::json& j, const fs::path& base_dir, const fs::path& data_dir) {
  if (!j.is_object()) config_error("config must be a JSON object", "");
  PipelineConfig c;
  auto resolve = [&](const std::string& p) -> fs::path {
    if (p.empty()) return {};
    fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  const fs::path data = j.contains("data_dir") ? resolve(j.at("data_dir").get<std::string>()) : data_dir;

  try {
    if (!j.contains("seed")) config_error("a seed is required", "seed");
    c.seed = j.at("seed").get<std::uint64_t>();
    c.output_dir = resolve(j.value("output_dir", std::string("out")));

    if (!j.contains("inputs")) config_error("inputs are required", "inputs");
    const auto& in = j.at("inputs");
    for (const auto& h : in.at("headlines")) {
      HeadlineInput hi;
      hi.path = resolve(h.at("path").get<std::string>());
      hi.date_column = h.value("date_column", hi.date_column);
      hi.text_column = h.value("text_column", hi.text_column);
      hi.label_column = h.value("label_column", std::string());
      hi.source = h.value("source", hi.path.stem().string());
      hi.ticker = h.value("ticker", std::string());
      c.headlines.push_back(std::move(hi));
    }
    if (in.contains("prices"))
      for (const auto& p : in.at("prices")) c.prices.push_back(resolve(p.get<std::string>()));

    c.clean = textprep::bundled_config(data);
    if (j.contains("clean")) {
      const auto& cl = j.at("clean");
      c.clean.lowercase = cl.value("lowercase", c.clean.lowercase);
      c.clean.strip_special = cl.value("strip_special", c.clean.strip_special);
      c.clean.normalize_slang = cl.value("normalize_slang", c.clean.normalize_slang);
      c.clean.stopwords = cl.value("stopwords", c.clean.stopwords);
      c.clean.stem = cl.value("stem", c.clean.stem);
      c.clean.lemmatize = cl.value("lemmatize", c.clean.lemmatize);
      c.clean.pos_tag = cl.value("pos_tag", c.clean.pos_tag);
      if (cl.contains("stopword_path")) c.clean.stopword_path = resolve(cl.at("stopword_path").get<std::string>());
      if (cl.contains("slang_path")) c.clean.slang_path = resolve(cl.at("slang_path").get<std::string>());
      if (cl.contains("lemma_exceptions_path"))
        c.clean.lemma_exceptions_path = resolve(cl.at("lemma_exceptions_path").get<std::string>());
    }
    c.lexicon_path = j.contains("lexicon") ? resolve(j.at("lexicon").get<std::string>())
                                           : data / "lexicon" / "vader_lexicon.tsv";
    if (j.contains("labels")) c.neutral_band = j.at("labels").value("neutral_band", c.neutral_band);
    if (j.contains("embedding")) c.embedding = embedding_from_string(j.at("embedding").get<std::string>());
    if (j.contains("model")) c.model = model_from_string(j.at("model").get<std::string>());

    if (j.contains("embeddings")) {
      const auto& e = j.at("embeddings");
      auto& s = c.embeddings;
      s.dim = e.value("dim", s.dim);
      s.window = e.value("window", s.window);
      s.negatives = e.value("negatives", s.negatives);
      s.epochs = e.value("epochs", s.epochs);
      s.learning_rate = e.value("learning_rate", s.learning_rate);
      s.minn = e.value("minn", s.minn);
      s.maxn = e.value("maxn", s.maxn);
      s.bucket_count = e.value("bucket_count", s.bucket_count);
      s.fasttext_learning_rate = e.value("fasttext_learning_rate", s.fasttext_learning_rate);
      s.x_max = e.value("x_max", s.x_max);
      s.alpha = e.value("alpha", s.alpha);
      s.glove_epochs = e.value("glove_epochs", s.glove_epochs);
      s.glove_learning_rate = e.value("glove_learning_rate", s.glove_learning_rate);
      s.max_words = e.value("max_words", s.max_words);
      s.maxlen = e.value("maxlen", s.maxlen);
      s.projection_words = e.value("projection_words", s.projection_words);
      s.pretrained_path = resolve(e.value("pretrained_path", std::string()));
      s.sentence_vectors_path = resolve(e.value("sentence_vectors_path", std::string()));
    }

    nlohmann::json net = j.value("network", nlohmann::json::object());
    if (!net.contains("embedding_trainable")) net["embedding_trainable"] = false;
    if (!net.contains("input")) net["input"] = "dense";
    if (!net.contains("input_features")) net["input_features"] = 1;
    if (!net.contains("recurrent")) net["recurrent"] = "lstm";
    c.network = nn::NetworkConfig::from_json(net);
    c.network.seed = c.seed;

    if (j.contains("split")) c.split_fraction = j.at("split").value("fraction", c.split_fraction);
    if (j.contains("signals")) c.signal_theta = j.at("signals").value("theta", c.signal_theta);
    if (j.contains("eda")) c.top_n = j.at("eda").value("top_n", c.top_n);
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      if (g.contains("embeddings"))
        for (const auto& e : g.at("embeddings")) c.grid_embeddings.push_back(embedding_from_string(e.get<std::string>()));
      if (g.contains("models"))
        for (const auto& m : g.at("models")) c.grid_models.push_back(model_from_string(m.get<std::string>()));
      c.record_runtime = g.value("record_runtime", c.record_runtime);
      c.grid_threads = g.value("threads", c.grid_threads);
    }
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("invalid config: ") + e.what(), "");
  }
  if (c.grid_embeddings.empty()) c.grid_embeddings = {c.embedding};
  if (c.grid_models.empty()) c.grid_models = {c.model};
  c.validate();
  return c;
}

PipelineConfig load_config(const fs::path& path, const fs::path& data_dir) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open config file", path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what(), path.string());
  }
  return parse_config(j, path.parent_path().empty() ? fs::path(".") : path.parent_path(), data_dir);
}

}  // namespace newsent::pipeline
