#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace newsent::textprep {

inline constexpr std::size_t kNoOrigin = std::numeric_limits<std::size_t>::max();

// Lowercase tokens, none empty, none containing whitespace. `origin` indexes
// the HeadlineRecord the tokens came from.
struct TokenSequence {
  std::vector<std::string> tokens;
  std::size_t origin = kNoOrigin;

  bool operator==(const TokenSequence&) const = default;
};

enum class PosTag {
  Noun,
  Verb,
  Adjective,
  Adverb,
  Pronoun,
  Determiner,
  Preposition,
  Conjunction,
  Modal,
  Number,
};

std::string_view to_string(PosTag tag);

using StopwordSet = std::unordered_set<std::string>;
using SlangTable = std::unordered_map<std::string, std::string>;
using LemmaExceptions = std::unordered_map<std::string, std::string>;

// One token per line, UTF-8. Blank lines ignored.
StopwordSet load_stopwords(const std::filesystem::path& path);
// Two-column CSV (variant,canonical) or (form,lemma); a header row whose
// first cell is not a data key is skipped when `has_header` is set.
std::unordered_map<std::string, std::string> load_two_column_csv(const std::filesystem::path& path,
                                                                 bool has_header = true);

std::string lowercase(std::string_view text);
std::string strip_special(std::string_view text);
std::string normalize_slang(std::string_view text, const SlangTable& table);
TokenSequence tokenize(std::string_view text);
TokenSequence remove_stopwords(const TokenSequence& seq, const StopwordSet& stopwords);

// Porter (1980) suffix stripping, all five steps, original rule set.
std::string porter_stem(std::string_view token);

std::string lemmatize(std::string_view token, PosTag tag, const LemmaExceptions& exceptions);

// Closed-class lexicon, then suffix heuristics, default noun. Context rules:
// the token after "to" or a modal is a verb; a sentence-initial token
// directly followed by a determiner or possessive is a verb (imperative).
std::vector<std::pair<std::string, PosTag>> pos_tag(const TokenSequence& seq);

struct CleanConfig {
  bool lowercase = true;
  bool strip_special = true;
  bool normalize_slang = true;
  bool stopwords = true;
  bool stem = false;
  bool lemmatize = true;
  bool pos_tag = true;
  std::filesystem::path stopword_path;
  std::filesystem::path slang_path;
  std::filesystem::path lemma_exceptions_path;

  // Throws InvalidArgument when stem and lemmatize are both set.
  void validate() const;

  static CleanConfig all_off();
};

struct Resources {
  StopwordSet stopwords;
  SlangTable slang;
  LemmaExceptions lemma_exceptions;

  // Loads whichever paths are set in cfg; missing paths leave the table empty.
  static Resources load(const CleanConfig& cfg);
};

// Paths of the resource files shipped under data/.
CleanConfig bundled_config(const std::filesystem::path& data_dir);

// lowercase -> strip_special -> normalize_slang -> tokenize -> stopwords ->
// stem | lemmatize (lemmatize uses pos_tag when enabled, else noun).
TokenSequence clean_pipeline(std::string_view text, const CleanConfig& cfg, const Resources& res);

std::string join(const TokenSequence& seq);

}  // namespace newsent::textprep
