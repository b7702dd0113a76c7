#include "newsent/metrics.hpp"

#include <cstdio>

#include "newsent/error.hpp"

namespace newsent::metrics {

Confusion confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size())
    throw Error(ErrorKind::InvalidArgument, "y_true and y_pred differ in length");
  Confusion c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i], p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1))
      throw Error(ErrorKind::InvalidArgument, "labels must be 0 or 1", "index " + std::to_string(i));
    ++c.cells[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
  }
  return c;
}

namespace {

double ratio(std::size_t num, std::size_t den, bool& undefined) {
  undefined = den == 0;
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

ClassScores scores(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassScores s;
  s.precision = ratio(tp, tp + fp, s.precision_undefined);
  s.recall = ratio(tp, tp + fn, s.recall_undefined);
  s.f1_undefined = s.precision + s.recall == 0.0;
  s.f1 = s.f1_undefined ? 0.0 : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  s.support = tp + fn;
  return s;
}

nlohmann::json class_json(const ClassScores& s) {
  return {{"precision", s.precision},
          {"recall", s.recall},
          {"f1", s.f1},
          {"support", s.support},
          {"precision_undefined", s.precision_undefined},
          {"recall_undefined", s.recall_undefined},
          {"f1_undefined", s.f1_undefined}};
}

}  // namespace

EvalReport report(const Confusion& c) {
  EvalReport r;
  r.confusion = c;
  r.positive = scores(c.tp(), c.fp(), c.fn());
  r.negative = scores(c.tn(), c.fn(), c.fp());
  r.macro_precision = (r.positive.precision + r.negative.precision) / 2.0;
  r.macro_recall = (r.positive.recall + r.negative.recall) / 2.0;
  r.macro_f1 = (r.positive.f1 + r.negative.f1) / 2.0;
  r.accuracy = ratio(c.tp() + c.tn(), c.total(), r.accuracy_undefined);
  return r;
}

EvalReport report(std::span<const int> y_true, std::span<const int> y_pred) {
  return report(confusion_matrix(y_true, y_pred));
}

nlohmann::json EvalReport::to_json() const {
  return {{"confusion", {{confusion.tn(), confusion.fp()}, {confusion.fn(), confusion.tp()}}},
          {"negative", class_json(negative)},
          {"positive", class_json(positive)},
          {"macro", {{"precision", macro_precision}, {"recall", macro_recall}, {"f1", macro_f1}}},
          {"accuracy", accuracy},
          {"accuracy_undefined", accuracy_undefined},
          {"support", confusion.total()}};
}

std::string EvalReport::to_text() const {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof line, "%12s %10s %10s %10s %10s\n\n", "", "precision", "recall", "f1-score", "support");
  out += line;
  auto row = [&](const char* name, const ClassScores& s) {
    std::snprintf(line, sizeof line, "%12s %10.2f %10.2f %10.2f %10zu\n", name, s.precision, s.recall, s.f1,
                  s.support);
    out += line;
  };
  row("negative", negative);
  row("positive", positive);
  out += "\n";
  std::snprintf(line, sizeof line, "%12s %10s %10s %10.2f %10zu\n", "accuracy", "", "", accuracy, confusion.total());
  out += line;
  std::snprintf(line, sizeof line, "%12s %10.2f %10.2f %10.2f %10zu\n", "macro avg", macro_precision, macro_recall,
                macro_f1, confusion.total());
  out += line;
  return out;
}

}  // namespace newsent::metrics
