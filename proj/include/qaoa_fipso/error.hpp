#ifndef QAOA_FIPSO_ERROR_HPP
#define QAOA_FIPSO_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qaoa_fipso {

/// Broad failure category; the C API maps each one onto a status code.
enum class ErrorKind {
  argument,
  capacity,
  dimension,
  parse,
  validation,
  numerical,
  undefined,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ArgumentError : Error {
  explicit ArgumentError(const std::string& what) : Error(ErrorKind::argument, what) {}
};

struct CapacityError : Error {
  explicit CapacityError(const std::string& what) : Error(ErrorKind::capacity, what) {}
};

struct DimensionError : Error {
  explicit DimensionError(const std::string& what) : Error(ErrorKind::dimension, what) {}
};

/// Malformed input text. `line` is 1-based, 0 when not attributable to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(ErrorKind::parse,
              line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        detail_(what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }
  /// Message without the line prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t line_;
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

/// A metric has no defined value for its inputs (e.g. improvement over a zero baseline).
struct UndefinedError : Error {
  explicit UndefinedError(const std::string& what) : Error(ErrorKind::undefined, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

}  // namespace qaoa_fipso

#endif  // QAOA_FIPSO_ERROR_HPP
