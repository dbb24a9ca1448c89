#pragma once

#include <stdexcept>
#include <string>

namespace lsmat {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number when known.
struct ParseError : Error {
  ParseError(const std::string& msg, int line_number = 0)
      : Error(line_number > 0 ? msg + " (line " + std::to_string(line_number) + ")" : msg),
        line(line_number) {}
  int line;
};

/// All kernel weights vanished at the query point.
struct EmptySupportError : Error {
  using Error::Error;
};

/// The damped normal matrix could not be factorized.
struct SingularSystemError : Error {
  using Error::Error;
};

/// Tangency target lies in the pin's tangent plane.
struct DegenerateTangencyError : Error {
  using Error::Error;
};

struct NonConvergenceError : Error {
  using Error::Error;
};

}  // namespace lsmat
