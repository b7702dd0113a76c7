#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace newsent {

enum class ErrorKind {
  Io,
  Schema,
  Parse,
  Range,
  EmptyDataset,
  InvalidArgument,
  Config,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library. `context` carries the location
// (file:line, column name, parameter) when one is known.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string context = {})
      : std::runtime_error(message), kind_(kind), context_(std::move(context)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& context() const noexcept { return context_; }

 private:
  ErrorKind kind_;
  std::string context_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return "io";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Range: return "range";
    case ErrorKind::EmptyDataset: return "empty_dataset";
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

}  // namespace newsent
