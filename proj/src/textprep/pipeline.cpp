#include "newsent/error.hpp"
#include "newsent/textprep.hpp"

namespace newsent::textprep {

void CleanConfig::validate() const {
  if (stem && lemmatize) {
    throw Error(ErrorKind::InvalidArgument, "stem and lemmatize are mutually exclusive", "clean");
  }
}

CleanConfig CleanConfig::all_off() {
  CleanConfig c;
  c.lowercase = c.strip_special = c.normalize_slang = c.stopwords = false;
  c.stem = c.lemmatize = c.pos_tag = false;
  return c;
}

Resources Resources::load(const CleanConfig& cfg) {
  Resources r;
  if (!cfg.stopword_path.empty()) r.stopwords = load_stopwords(cfg.stopword_path);
  if (!cfg.slang_path.empty()) r.slang = load_two_column_csv(cfg.slang_path);
  if (!cfg.lemma_exceptions_path.empty()) r.lemma_exceptions = load_two_column_csv(cfg.lemma_exceptions_path);
  return r;
}

CleanConfig bundled_config(const std::filesystem::path& data_dir) {
  CleanConfig c;
  c.stopword_path = data_dir / "stopwords_en.txt";
  c.slang_path = data_dir / "slang.csv";
  c.lemma_exceptions_path = data_dir / "lemma_exceptions.csv";
  return c;
}

TokenSequence clean_pipeline(std::string_view text, const CleanConfig& cfg, const Resources& res) {
  cfg.validate();
  std::string s(text);
  if (cfg.lowercase) s = lowercase(s);
  if (cfg.strip_special) s = strip_special(s);
  if (cfg.normalize_slang) s = normalize_slang(s, res.slang);
  TokenSequence seq = tokenize(s);
  if (cfg.stopwords) seq = remove_stopwords(seq, res.stopwords);
  if (cfg.stem) {
    for (auto& t : seq.tokens) t = porter_stem(t);
  } else if (cfg.lemmatize) {
    if (cfg.pos_tag) {
      auto tagged = pos_tag(seq);
      for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
        seq.tokens[i] = lemmatize(tagged[i].first, tagged[i].second, res.lemma_exceptions);
      }
    } else {
      for (auto& t : seq.tokens) t = lemmatize(t, PosTag::Noun, res.lemma_exceptions);
    }
  }
  std::erase_if(seq.tokens, [](const std::string& t) { return t.empty(); });
  return seq;
}

}  // namespace newsent::textprep
