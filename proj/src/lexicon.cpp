#include "newsent/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <vector>

#include "newsent/error.hpp"
#include "newsent/textprep.hpp"

namespace newsent::lexicon {

namespace {

constexpr std::string_view kAsciiPunctuation = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";

std::size_t code_point_count(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

// Strip leading/trailing ASCII punctuation unless that leaves two or fewer
// characters (emoticons such as ":)" survive intact).
std::string strip_punctuation_if_word(std::string_view token) {
  const auto b = token.find_first_not_of(kAsciiPunctuation);
  if (b == std::string_view::npos) return std::string(token);
  const auto e = token.find_last_not_of(kAsciiPunctuation);
  auto stripped = token.substr(b, e - b + 1);
  if (code_point_count(stripped) <= 2) return std::string(token);
  return std::string(stripped);
}

bool is_all_caps(std::string_view w) {
  bool has_upper = false;
  for (char c : w) {
    if (c >= 'a' && c <= 'z') return false;
    if (c >= 'A' && c <= 'Z') has_upper = true;
  }
  return has_upper;
}

struct Token {
  std::string text;
  std::string lower;
};

class Scorer {
 public:
  Scorer(std::string_view text, const SentimentLexicon& lex) : lex_(lex) {
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      if (j > i) {
        std::string w = strip_punctuation_if_word(text.substr(i, j - i));
        tokens_.push_back(Token{w, textprep::lowercase(w)});
      }
      i = j;
    }
    std::size_t caps = 0;
    for (const auto& t : tokens_) caps += is_all_caps(t.text) ? 1 : 0;
    const std::size_t diff = tokens_.size() - caps;
    cap_differential_ = diff > 0 && diff < tokens_.size();
  }

  std::vector<double> sentiments() const {
    std::vector<double> out;
    out.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      const auto& lower = tokens_[i].lower;
      if (lex_.boosters.contains(lower) ||
          (lower == "kind" && i + 1 < tokens_.size() && tokens_[i + 1].lower == "of")) {
        out.push_back(0.0);
        continue;
      }
      out.push_back(valence_at(i));
    }
    apply_but_contrast(out);
    return out;
  }

 private:
  bool in_lexicon(std::size_t i) const { return lex_.valences.contains(tokens_[i].lower); }
  const std::string& lower(std::size_t i) const { return tokens_[i].lower; }

  bool negated(std::size_t i) const {
    const auto& w = lower(i);
    return lex_.negators.contains(w) || w.find("n't") != std::string::npos;
  }

  double booster_scalar(std::size_t i, double valence) const {
    double scalar = 0.0;
    auto it = lex_.boosters.find(lower(i));
    if (it == lex_.boosters.end()) return scalar;
    scalar = it->second;
    if (valence < 0) scalar = -scalar;
    if (is_all_caps(tokens_[i].text) && cap_differential_) {
      scalar += valence > 0 ? kCapsIncrement : -kCapsIncrement;
    }
    return scalar;
  }

  double valence_at(std::size_t i) const {
    auto it = lex_.valences.find(lower(i));
    if (it == lex_.valences.end()) return 0.0;
    const double base = it->second;
    double valence = base;

    // "no" directly before another lexicon word acts as a negator only.
    if (lower(i) == "no" && i + 1 < tokens_.size() && in_lexicon(i + 1)) valence = 0.0;
    if ((i > 0 && lower(i - 1) == "no") || (i > 1 && lower(i - 2) == "no") ||
        (i > 2 && lower(i - 3) == "no" && (lower(i - 1) == "or" || lower(i - 1) == "nor"))) {
      valence = base * kNegationScalar;
    }

    if (is_all_caps(tokens_[i].text) && cap_differential_) {
      valence += valence > 0 ? kCapsIncrement : -kCapsIncrement;
    }

    for (std::size_t back = 0; back < 3; ++back) {
      if (i <= back || in_lexicon(i - back - 1)) continue;
      double s = booster_scalar(i - back - 1, valence);
      if (back == 1 && s != 0) s *= 0.95;
      if (back == 2 && s != 0) s *= 0.9;
      valence += s;
      valence = negation_check(valence, back, i);
      if (back == 2) valence = multiword_booster_check(valence, i);
    }
    return least_check(valence, i);
  }

  double negation_check(double valence, std::size_t back, std::size_t i) const {
    switch (back) {
      case 0:
        if (negated(i - 1)) valence *= kNegationScalar;
        break;
      case 1:
        if (lower(i - 2) == "never" && (lower(i - 1) == "so" || lower(i - 1) == "this")) {
          valence *= 1.25;
        } else if (lower(i - 2) == "without" && lower(i - 1) == "doubt") {
        } else if (negated(i - 2)) {
          valence *= kNegationScalar;
        }
        break;
      case 2:
        if ((lower(i - 3) == "never" && (lower(i - 2) == "so" || lower(i - 2) == "this")) ||
            (lower(i - 1) == "so" || lower(i - 1) == "this")) {
          valence *= 1.25;
        } else if (lower(i - 3) == "without" && (lower(i - 2) == "doubt" || lower(i - 1) == "doubt")) {
        } else if (negated(i - 3)) {
          valence *= kNegationScalar;
        }
        break;
    }
    return valence;
  }

  // Two- and three-word dampeners ("kind of", "sort of", "just enough")
  // ending right before the scored word. The increment is added unsigned.
  double multiword_booster_check(double valence, std::size_t i) const {
    const std::string three = lower(i - 3) + " " + lower(i - 2) + " " + lower(i - 1);
    const std::string three_two = lower(i - 3) + " " + lower(i - 2);
    const std::string two_one = lower(i - 2) + " " + lower(i - 1);
    for (const auto* gram : {&three, &three_two, &two_one}) {
      if (auto it = lex_.boosters.find(*gram); it != lex_.boosters.end()) valence += it->second;
    }
    return valence;
  }

  double least_check(double valence, std::size_t i) const {
    if (i > 1 && !in_lexicon(i - 1) && lower(i - 1) == "least") {
      if (lower(i - 2) != "at" && lower(i - 2) != "very") valence *= kNegationScalar;
    } else if (i > 0 && !in_lexicon(i - 1) && lower(i - 1) == "least") {
      valence *= kNegationScalar;
    }
    return valence;
  }

  // Sentiment before the first "but" is halved, after it is boosted by half.
  void apply_but_contrast(std::vector<double>& sentiments) const {
    auto it = std::find_if(tokens_.begin(), tokens_.end(), [](const Token& t) { return t.lower == "but"; });
    if (it == tokens_.end()) return;
    const auto bi = static_cast<std::size_t>(it - tokens_.begin());
    for (std::size_t k = 0; k < sentiments.size(); ++k) {
      if (k < bi) sentiments[k] *= 0.5;
      else if (k > bi) sentiments[k] *= 1.5;
    }
  }

  const SentimentLexicon& lex_;
  std::vector<Token> tokens_;
  bool cap_differential_ = false;
};

double punctuation_amplifier(std::string_view text) {
  const auto ep = std::min<std::ptrdiff_t>(std::count(text.begin(), text.end(), '!'), 4);
  const auto qm = std::count(text.begin(), text.end(), '?');
  double qm_amp = 0.0;
  if (qm > 1) qm_amp = qm <= 3 ? static_cast<double>(qm) * 0.18 : 0.96;
  return static_cast<double>(ep) * kExclamationIncrement + qm_amp;
}

}  // namespace

SentimentLexicon SentimentLexicon::with_default_modifiers() {
  SentimentLexicon lex;
  constexpr double inc = kBoosterIncrement;
  constexpr double dec = -kBoosterIncrement;
  for (auto w : {"absolutely", "amazingly", "awfully", "completely", "considerable", "considerably",
                 "decidedly", "deeply", "effing", "enormous", "enormously", "entirely", "especially",
                 "exceptional", "exceptionally", "extreme", "extremely", "fabulously", "flipping",
                 "flippin", "frackin", "fracking", "fricking", "frickin", "frigging", "friggin", "fully",
                 "fuckin", "fucking", "fuggin", "fugging", "greatly", "hella", "highly", "hugely",
                 "incredible", "incredibly", "intensely", "major", "majorly", "more", "most",
                 "particularly", "purely", "quite", "really", "remarkably", "so", "substantially",
                 "thoroughly", "total", "totally", "tremendous", "tremendously", "uber", "unbelievably",
                 "unusually", "utter", "utterly", "very"}) {
    lex.boosters.emplace(w, inc);
  }
  for (auto w : {"almost", "barely", "hardly", "just enough", "kind of", "kinda", "kindof", "kind-of",
                 "less", "little", "marginal", "marginally", "occasional", "occasionally", "partly",
                 "scarce", "scarcely", "slight", "slightly", "somewhat", "sort of", "sorta", "sortof",
                 "sort-of"}) {
    lex.boosters.emplace(w, dec);
  }
  for (auto w : {"aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt", "ain't",
                 "aren't", "can't", "couldn't", "daren't", "didn't", "doesn't", "dont", "hadnt", "hasnt",
                 "havent", "isnt", "mightnt", "mustnt", "neither", "don't", "hadn't", "hasn't", "haven't",
                 "isn't", "mightn't", "mustn't", "neednt", "needn't", "never", "none", "nope", "nor",
                 "not", "nothing", "nowhere", "oughtnt", "shant", "shouldnt", "uhuh", "wasnt", "werent",
                 "oughtn't", "shan't", "shouldn't", "uh-uh", "wasn't", "weren't", "without", "wont",
                 "wouldnt", "won't", "wouldn't", "rarely", "seldom", "despite"}) {
    lex.negators.emplace(w);
  }
  return lex;
}

SentimentLexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open lexicon", path.string());
  SentimentLexicon lex = SentimentLexicon::with_default_modifiers();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) throw Error(ErrorKind::Parse, "expected token<TAB>valence", where);
    const auto end = line.find('\t', tab + 1);
    std::string_view field(line.data() + tab + 1, (end == std::string::npos ? line.size() : end) - tab - 1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v)) {
      throw Error(ErrorKind::Parse, "malformed valence", where);
    }
    if (v < -kMaxValence || v > kMaxValence) throw Error(ErrorKind::Range, "valence outside [-4, 4]", where);
    lex.valences[line.substr(0, tab)] = v;
  }
  return lex;
}

double normalize(double sum, double alpha) {
  const double v = sum / std::sqrt(sum * sum + alpha);
  return std::clamp(v, -1.0, 1.0);
}

SentimentScore polarity_scores(std::string_view text, const SentimentLexicon& lex) {
  Scorer scorer(text, lex);
  const auto sentiments = scorer.sentiments();
  SentimentScore out;
  if (sentiments.empty()) return out;

  const double amp = punctuation_amplifier(text);
  double sum = 0.0;
  for (double s : sentiments) sum += s;
  if (sum > 0) sum += amp;
  else if (sum < 0) sum -= amp;
  out.compound = normalize(sum);

  double pos_sum = 0.0, neg_sum = 0.0;
  std::size_t neutral = 0;
  for (double s : sentiments) {
    if (s > 0) pos_sum += s + 1.0;
    if (s < 0) neg_sum += s - 1.0;
    if (s == 0) ++neutral;
  }
  if (pos_sum > std::fabs(neg_sum)) pos_sum += amp;
  else if (pos_sum < std::fabs(neg_sum)) neg_sum -= amp;
  const double total = pos_sum + std::fabs(neg_sum) + static_cast<double>(neutral);
  out.pos = std::fabs(pos_sum / total);
  out.neg = std::fabs(neg_sum / total);
  out.neu = std::fabs(static_cast<double>(neutral) / total);
  return out;
}

std::string_view to_string(Sentiment s) {
  switch (s) {
    case Sentiment::Negative: return "negative";
    case Sentiment::Positive: return "positive";
    case Sentiment::Neutral: return "neutral";
  }
  return "neutral";
}

Sentiment label(double compound, double threshold) {
  if (threshold < 0) throw Error(ErrorKind::InvalidArgument, "threshold must be >= 0", "threshold");
  if (compound > threshold) return Sentiment::Positive;
  if (compound < -threshold) return Sentiment::Negative;
  return Sentiment::Neutral;
}

}  // namespace newsent::lexicon
