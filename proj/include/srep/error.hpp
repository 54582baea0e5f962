#pragma once

#include <stdexcept>
#include <string>

namespace srep {

// Base of every error thrown by the library. The CLI maps each subclass
// to a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent model inputs (e.g. assignment length != node count).
class ModelError : public Error {
 public:
  using Error::Error;
};

// Out-of-range or malformed parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Structural precondition on a graph failed (e.g. disconnected).
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Random generation could not satisfy its constraints within budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

// Sketch decoding failed after all retries.
class ReconciliationError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

// A proven bound was violated at run time. Always a bug.
class AssertionError : public Error {
 public:
  using Error::Error;
};

// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace srep
