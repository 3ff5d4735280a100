#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace temprisk {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension mismatch between a signal and a shift vector / partition.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid input (partition, interval, pmf, config).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed DSL text. Line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A specification that is well-formed but unusable (e.g. violated by default).
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Enumeration guard exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Order-statistic VaR bounds requested with too few samples.
class InsufficientSamplesError : public Error {
 public:
  InsufficientSamplesError(const std::string& what, std::size_t required)
      : Error(what), required_(required) {}

  /// Smallest N for which the requested (beta, delta) becomes admissible.
  std::size_t required_samples() const { return required_; }

 private:
  std::size_t required_;
};

/// Trajectory generator could not produce a signal for the given parameters.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace temprisk
