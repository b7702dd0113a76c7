#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace newsent::lexicon {

struct SentimentLexicon {
  std::unordered_map<std::string, double> valences;  // each in [-4, +4]
  std::unordered_map<std::string, double> boosters;  // degree adverbs, signed increments
  std::unordered_set<std::string> negators;

  // Empty valence table with the standard booster and negator sets.
  static SentimentLexicon with_default_modifiers();
};

struct SentimentScore {
  double neg = 0, neu = 0, pos = 0;
  double compound = 0;  // in [-1, +1]
};

inline constexpr double kMaxValence = 4.0;
inline constexpr double kBoosterIncrement = 0.293;
inline constexpr double kNegationScalar = -0.74;
inline constexpr double kCapsIncrement = 0.733;
inline constexpr double kExclamationIncrement = 0.292;
inline constexpr double kNormalizationAlpha = 15.0;

// token<TAB>valence per line; '#' starts a comment line; extra tab-separated
// columns are ignored. Throws Parse (malformed line) or Range (|valence| > 4)
// with "path:line" context.
SentimentLexicon load_lexicon(const std::filesystem::path& path);

// s / sqrt(s^2 + alpha), clamped to [-1, 1].
double normalize(double sum, double alpha = kNormalizationAlpha);

// Rule-augmented lexicon scoring of RAW text: booster words, negation within
// three preceding tokens, ALL-CAPS emphasis, "but" contrast, "least",
// exclamation and question-mark amplification.
SentimentScore polarity_scores(std::string_view text, const SentimentLexicon& lex);

enum class Sentiment { Negative = 0, Positive = 1, Neutral = 2 };

std::string_view to_string(Sentiment s);

// compound > threshold -> Positive, compound < -threshold -> Negative,
// otherwise Neutral. Throws InvalidArgument for threshold < 0.
Sentiment label(double compound, double threshold = 0.0);

}  // namespace newsent::lexicon
