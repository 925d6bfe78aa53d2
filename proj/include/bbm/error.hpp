#pragma once

#include <stdexcept>
#include <string>

namespace bbm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument or configuration value was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two objects that must share a frequency grid (or time lattice) do not.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A spectral product would spread content beyond the grid edge.
class SupportOverflow : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, lost symmetry, or a failed internal cross-check.
class NumericalFault : public Error {
 public:
  using Error::Error;
};

/// A configured memory/work budget would be exceeded.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace detail
}  // namespace bbm
