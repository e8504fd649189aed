#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hdmrge {

enum class ErrorKind {
  config,     // bad configuration value (max degree, config file)
  parameter,  // algorithm parameter out of range (k, d, K)
  data,       // unusable input data
  parse,      // malformed text input, with location
  format,     // malformed binary input
  shape,      // dimension mismatch
  numerical,  // conditioning / factorization failure
  metric,     // metric undefined for the given input
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error(ErrorKind::parameter, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error(ErrorKind::shape, what) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(ErrorKind::format, what) {}
};

class MetricError : public Error {
 public:
  explicit MetricError(const std::string& what) : Error(ErrorKind::metric, what) {}
};

/// Text input error. Row and column are 1-based; 0 means "not applicable".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : Error(ErrorKind::parse, what), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// Raised when the right-hand matrix of a generalized eigenproblem cannot be
/// factorized even after the maximum diagonal jitter.
class ConditioningError : public Error {
 public:
  ConditioningError(const std::string& what, std::vector<double> attempted_jitter)
      : Error(ErrorKind::numerical, what), attempted_(std::move(attempted_jitter)) {}

  const std::vector<double>& attempted_jitter() const noexcept { return attempted_; }

 private:
  std::vector<double> attempted_;
};

/// Process exit code used by the CLI for each error category.
constexpr int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::parameter:
      return 2;
    case ErrorKind::numerical:
      return 4;
    default:
      return 3;
  }
}

}  // namespace hdmrge
