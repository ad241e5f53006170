#pragma once

#include <stdexcept>
#include <string>

namespace sres {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or matrix shapes that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Sizes or indices outside the admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Probabilities or parameters outside their mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file content.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent user configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Problem is ill-posed for the requested method (e.g. N <= V for a covariance).
class IllPosedError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed on otherwise valid input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sres
