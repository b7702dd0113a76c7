#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "newsent/textprep.hpp"

namespace newsent::eda {

using textprep::TokenSequence;
using Ranked = std::vector<std::pair<std::string, std::size_t>>;

// Descending count, lexicographic tie-break, at most n entries.
Ranked top_frequencies(const std::vector<TokenSequence>& corpus, std::size_t n, bool exclude_stopwords = false,
                       const textprep::StopwordSet* stopwords = nullptr);

// Linear interpolation between order statistics: h = (n - 1) q / 100.
// `sorted` must be ascending and non-empty.
double percentile(std::span<const double> sorted, double q);

enum class SkewLabel { PositivelySkewed, ApproximatelyNormal, NegativelySkewed };
std::string_view to_string(SkewLabel label);

struct Skewness {
  double g1 = 0;
  SkewLabel label = SkewLabel::ApproximatelyNormal;
};

// Fisher-Pearson g1 = m3 / m2^(3/2) (0 when m2 = 0); positively skewed above
// 0.5, negatively skewed below -0.5. Throws EmptyDataset on no values.
Skewness skewness(std::span<const double> values);

inline constexpr double kPercentiles[] = {10, 25, 50, 75, 90};

struct DistributionSummary {
  std::size_t count = 0;
  double mean = 0, stddev = 0;  // population standard deviation
  std::vector<std::pair<double, double>> percentiles;  // (q, value) for 10, 25, 50, 75, 90
  std::vector<std::size_t> outliers_low;   // indices with value < P10
  std::vector<std::size_t> outliers_high;  // indices with value > P90
  Skewness skew;

  double at(double q) const;
  nlohmann::json to_json() const;
};

DistributionSummary summarize(std::span<const double> values);

// Lengths in tokens. Throws EmptyDataset on an empty corpus.
DistributionSummary sentence_length_summary(const std::vector<TokenSequence>& corpus);

struct SentimentCounts {
  std::size_t negative = 0, positive = 0, neutral = 0;

  std::size_t total() const { return negative + positive + neutral; }
};

// Labels 0 (negative), 1 (positive), 2 (neutral); anything else throws.
SentimentCounts sentiment_distribution(std::span<const int> labels);

struct StopwordShare {
  std::vector<std::size_t> counts;  // stopwords per document
  std::vector<double> shares;       // stopwords / tokens, 0 for an empty document
  DistributionSummary summary;      // over counts
};

StopwordShare stopword_share(const std::vector<TokenSequence>& corpus, const textprep::StopwordSet& stopwords);

void write_frequencies_csv(const std::filesystem::path& path, const Ranked& ranked);
void write_lengths_csv(const std::filesystem::path& path, const std::vector<TokenSequence>& corpus);
void write_sentiment_counts_csv(const std::filesystem::path& path, const SentimentCounts& counts);

}  // namespace newsent::eda
