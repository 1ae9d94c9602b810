#pragma once

#include <stdexcept>
#include <string>

namespace schur {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand kinds or sizes do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A star-power that the structure cannot form (no identity, not a ring).
class UnsupportedPower : public Error {
 public:
  using Error::Error;
};

/// Malformed request: wrong arity, missing fields, incompatible case/structure.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a function (e.g. x^t for x < 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A sample excluded by a definition's proviso (e.g. g(λ(x−z)) = 0).
class SkippedSample : public Error {
 public:
  using Error::Error;
};

}  // namespace schur
