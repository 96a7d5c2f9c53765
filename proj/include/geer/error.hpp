#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geer {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed edge list, query file, ground-truth file or meta document.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  /// 1-based line number, or 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// The graph is disconnected or bipartite, or its spectral gap is too small
/// for a finite walk length.
class SpectralDegeneracyError : public Error {
public:
  using Error::Error;
};

/// Power iteration ran out of iterations.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double last_estimate)
      : Error(what), last_estimate_(last_estimate) {}

  double last_estimate() const noexcept { return last_estimate_; }

private:
  double last_estimate_;
};

/// A method-specific precondition does not hold (non-edge for MC2, graph too
/// large for the dense oracle, isolated walk origin, ...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// A query ran past its deadline.
class TimeoutError : public Error {
public:
  using Error::Error;
};

/// An integer counter would overflow.
class OverflowError : public Error {
public:
  using Error::Error;
};

} // namespace geer
