#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace poemotion {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An error tied to a line of some text input (CoNLL-U, lexicon TSV).
class LineError : public Error {
 public:
  LineError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class FormatError : public LineError {
 public:
  using LineError::LineError;
};

class TreeError : public LineError {
 public:
  using LineError::LineError;
};

class RangeError : public LineError {
 public:
  using LineError::LineError;
};

/// Numeric argument outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class EmptyPool : public Error {
 public:
  using Error::Error;
};

class RatioOutOfRange : public Error {
 public:
  using Error::Error;
};

class NeutralQuadrant : public Error {
 public:
  using Error::Error;
};

class DegeneratePath : public Error {
 public:
  using Error::Error;
};

class ZeroArea : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class EmptyQuadrant : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

// External scorer failures.
class ScorerError : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public ScorerError {
 public:
  using ScorerError::ScorerError;
};

class TimeoutError : public ScorerError {
 public:
  using ScorerError::ScorerError;
};

class LaunchError : public ScorerError {
 public:
  using ScorerError::ScorerError;
};

}  // namespace poemotion
