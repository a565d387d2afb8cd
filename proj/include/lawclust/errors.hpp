// Error types thrown by the lawclust library.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lawclust {

// Base class for all library errors. CLI maps these to exit status 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyInput : Error {
  using Error::Error;
};

struct GridMismatch : Error {
  using Error::Error;
};

struct LengthMismatch : Error {
  using Error::Error;
};

struct NonFiniteValue : Error {
  using Error::Error;
};

struct InvalidCount : Error {
  using Error::Error;
};

struct DirectionCountMismatch : Error {
  using Error::Error;
};

struct TooFewSets : Error {
  using Error::Error;
};

struct InvalidDelta : Error {
  using Error::Error;
};

struct InvalidM : Error {
  using Error::Error;
};

struct HypothesisViolated : Error {
  using Error::Error;
};

struct InvalidConfig : Error {
  using Error::Error;
};

struct InvalidK : Error {
  using Error::Error;
};

struct InvalidParameter : Error {
  using Error::Error;
};

struct LabelMismatch : Error {
  using Error::Error;
};

// Parse failure in an input file; carries the 1-based line number.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t line_number)
      : Error(what + " (line " + std::to_string(line_number) + ")"), line(line_number) {}
  std::size_t line;
};

}  // namespace lawclust
