#include "newsent/eda.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "newsent/csv.hpp"
#include "newsent/error.hpp"

namespace newsent::eda {

Ranked top_frequencies(const std::vector<TokenSequence>& corpus, std::size_t n, bool exclude_stopwords,
                       const textprep::StopwordSet* stopwords) {
  if (exclude_stopwords && !stopwords)
    throw Error(ErrorKind::InvalidArgument, "stopword exclusion needs a stopword list");
  std::map<std::string, std::size_t> counts;
  for (const auto& seq : corpus)
    for (const auto& t : seq.tokens)
      if (!exclude_stopwords || !stopwords->count(t)) ++counts[t];
  Ranked ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > n) ranked.resize(n);
  return ranked;
}

double percentile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorKind::EmptyDataset, "percentile of no values");
  if (!(q >= 0 && q <= 100)) throw Error(ErrorKind::InvalidArgument, "percentile must be in [0,100]");
  const double h = static_cast<double>(sorted.size() - 1) * q / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string_view to_string(SkewLabel label) {
  switch (label) {
    case SkewLabel::PositivelySkewed: return "positively_skewed";
    case SkewLabel::ApproximatelyNormal: return "approximately_normal";
    case SkewLabel::NegativelySkewed: return "negatively_skewed";
  }
  return "approximately_normal";
}

Skewness skewness(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptyDataset, "skewness of no values");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double m2 = 0, m3 = 0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  Skewness s;
  s.g1 = m2 > 0 ? m3 / std::pow(m2, 1.5) : 0.0;
  if (s.g1 > 0.5)
    s.label = SkewLabel::PositivelySkewed;
  else if (s.g1 < -0.5)
    s.label = SkewLabel::NegativelySkewed;
  return s;
}

double DistributionSummary::at(double q) const {
  for (const auto& [k, v] : percentiles)
    if (k == q) return v;
  throw Error(ErrorKind::InvalidArgument, "percentile not in summary");
}

nlohmann::json DistributionSummary::to_json() const {
  nlohmann::json p = nlohmann::json::object();
  for (const auto& [q, v] : percentiles) p["p" + std::to_string(static_cast<int>(q))] = v;
  return {{"count", count},
          {"mean", mean},
          {"stddev", stddev},
          {"percentiles", p},
          {"outliers_low", outliers_low.size()},
          {"outliers_high", outliers_high.size()},
          {"skewness", skew.g1},
          {"skew_label", to_string(skew.label)}};
}

DistributionSummary summarize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptyDataset, "summary of no values");
  DistributionSummary s;
  s.count = values.size();
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double m2 = 0;
  for (double v : values) m2 += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(m2 / n);
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  for (double q : kPercentiles) s.percentiles.emplace_back(q, percentile(sorted, q));
  const double p10 = s.at(10), p90 = s.at(90);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < p10) s.outliers_low.push_back(i);
    if (values[i] > p90) s.outliers_high.push_back(i);
  }
  s.skew = skewness(values);
  return s;
}

DistributionSummary sentence_length_summary(const std::vector<TokenSequence>& corpus) {
  if (corpus.empty()) throw Error(ErrorKind::EmptyDataset, "corpus is empty");
  std::vector<double> lengths;
  lengths.reserve(corpus.size());
  for (const auto& seq : corpus) lengths.push_back(static_cast<double>(seq.tokens.size()));
  return summarize(lengths);
}

SentimentCounts sentiment_distribution(std::span<const int> labels) {
  SentimentCounts c;
  for (int l : labels) {
    switch (l) {
      case 0: ++c.negative; break;
      case 1: ++c.positive; break;
      case 2: ++c.neutral; break;
      default: throw Error(ErrorKind::InvalidArgument, "sentiment label must be 0, 1 or 2");
    }
  }
  return c;
}

StopwordShare stopword_share(const std::vector<TokenSequence>& corpus, const textprep::StopwordSet& stopwords) {
  StopwordShare s;
  std::vector<double> counts;
  for (const auto& seq : corpus) {
    std::size_t k = 0;
    for (const auto& t : seq.tokens) k += stopwords.count(t);
    s.counts.push_back(k);
    s.shares.push_back(seq.tokens.empty() ? 0.0 : static_cast<double>(k) / static_cast<double>(seq.tokens.size()));
    counts.push_back(static_cast<double>(k));
  }
  if (!counts.empty()) s.summary = summarize(counts);
  return s;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write file", path.string());
  return out;
}

}  // namespace

void write_frequencies_csv(const std::filesystem::path& path, const Ranked& ranked) {
  auto out = open_out(path);
  out << "token,count\n";
  for (const auto& [tok, n] : ranked) out << csv::escape(tok) << ',' << n << '\n';
}

void write_lengths_csv(const std::filesystem::path& path, const std::vector<TokenSequence>& corpus) {
  auto out = open_out(path);
  out << "document,length\n";
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto id = corpus[i].origin == textprep::kNoOrigin ? i : corpus[i].origin;
    out << id << ',' << corpus[i].tokens.size() << '\n';
  }
}

void write_sentiment_counts_csv(const std::filesystem::path& path, const SentimentCounts& counts) {
  auto out = open_out(path);
  out << "label,count\n0," << counts.negative << "\n1," << counts.positive << "\n2," << counts.neutral << '\n';
}

}  // namespace newsent::eda
