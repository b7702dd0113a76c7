#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include <json.hpp>

namespace newsent::metrics {

// cells[truth][prediction] for classes 0 (negative) and 1 (positive).
struct Confusion {
  std::array<std::array<std::size_t, 2>, 2> cells{};

  std::size_t tn() const { return cells[0][0]; }
  std::size_t fp() const { return cells[0][1]; }
  std::size_t fn() const { return cells[1][0]; }
  std::size_t tp() const { return cells[1][1]; }
  std::size_t total() const { return tn() + fp() + fn() + tp(); }
  bool operator==(const Confusion&) const = default;
};

// Throws InvalidArgument on length mismatch or a label outside {0, 1}.
Confusion confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred);

// A rate with a zero denominator is reported as 0 and flagged.
struct ClassScores {
  double precision = 0, recall = 0, f1 = 0;
  std::size_t support = 0;
  bool precision_undefined = false, recall_undefined = false, f1_undefined = false;
};

struct EvalReport {
  Confusion confusion;
  ClassScores negative, positive;
  double macro_precision = 0, macro_recall = 0, macro_f1 = 0;
  double accuracy = 0;
  bool accuracy_undefined = false;

  const ClassScores& cls(int label) const { return label == 1 ? positive : negative; }
  nlohmann::json to_json() const;
  // Fixed-width table: precision, recall, f1-score, support per class,
  // then accuracy and macro average rows.
  std::string to_text() const;
};

EvalReport report(const Confusion& c);
EvalReport report(std::span<const int> y_true, std::span<const int> y_pred);

}  // namespace newsent::metrics
