#pragma once

#include <stdexcept>
#include <string>

namespace fcmstop {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration values (cluster count, fuzzifier, flags, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Caller-supplied data violates an operation's precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A non-finite value appeared where the math requires a finite one.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A cluster lost (numerically) all of its membership weight.
class DegenerateClusterError : public Error {
 public:
  DegenerateClusterError(std::size_t cluster, double weight)
      : Error("cluster " + std::to_string(cluster) + " has total weight " + std::to_string(weight)),
        cluster_(cluster) {}

  std::size_t cluster() const noexcept { return cluster_; }

 private:
  std::size_t cluster_;
};

/// Least-squares fit with no spread in the inputs.
class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

/// Training phase could not produce a usable model.
class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// Malformed persisted document. `field()` is a JSON-pointer-like path.
class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& what)
      : Error("schema error at '" + field + "': " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Document written by an incompatible format version.
class VersionError : public Error {
 public:
  using Error::Error;
};

/// Image or CSV could not be read.
class IngestionError : public Error {
 public:
  using Error::Error;
};

/// CSV with ragged rows or non-numeric cells; carries the 1-based line.
class ParseError : public IngestionError {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : IngestionError(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Output file could not be produced.
class OutputError : public Error {
 public:
  using Error::Error;
};

}  // namespace fcmstop
