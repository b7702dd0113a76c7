#include <cstdio>
#include <fstream>

#include "newsent/csv.hpp"
#include "newsent/error.hpp"
#include "newsent/pipeline.hpp"
#include "newsent/rng.hpp"

namespace newsent::pipeline {

namespace {

std::string token(const char* prefix, std::uint64_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%02llu", prefix, static_cast<unsigned long long>(i));
  return buf;
}

constexpr std::size_t kKeysPerClass = 5;
constexpr std::size_t kDistractors = 40;
constexpr std::size_t kTopicWords = 20;

}  // namespace

SyntheticSet recall_task(std::size_t n, std::size_t steps, std::uint64_t seed) {
  if (steps == 0) throw Error(ErrorKind::InvalidArgument, "steps must be positive");
  Rng rng(seed);
  SyntheticSet s;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(rng.below(2));
    textprep::TokenSequence seq;
    seq.origin = i;
    seq.tokens.push_back(token(label ? "keya" : "keyb", rng.below(kKeysPerClass)));
    for (std::size_t t = 1; t < steps; ++t) seq.tokens.push_back(token("noise", rng.below(kDistractors)));
    s.sequences.push_back(std::move(seq));
    s.labels.push_back(label);
  }
  return s;
}

SyntheticSet two_topic_corpus(std::size_t n, std::size_t length, std::uint64_t seed) {
  Rng rng(seed);
  SyntheticSet s;
  for (std::size_t i = 0; i < n; ++i) {
    const int topic = static_cast<int>(rng.below(2));
    textprep::TokenSequence seq;
    seq.origin = i;
    for (std::size_t t = 0; t < length; ++t) seq.tokens.push_back(token(topic ? "market" : "sport", rng.below(kTopicWords)));
    s.sequences.push_back(std::move(seq));
    s.labels.push_back(topic);
  }
  return s;
}

void write_synthetic_headlines(const fs::path& path, const SyntheticSet& set) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write file", path.string());
  out << "Date,Title,Label\n";
  for (std::size_t i = 0; i < set.sequences.size(); ++i) {
    char date[16];
    std::snprintf(date, sizeof date, "2020-%02zu-%02zu", 1 + (i / 28) % 12, 1 + i % 28);
    std::string title;
    for (const auto& t : set.sequences[i].tokens) title += (title.empty() ? "" : " ") + t;
    csv::write_row(out, {date, title, std::to_string(static_cast<int>(set.labels[i]))});
  }
}

}  // namespace newsent::pipeline
