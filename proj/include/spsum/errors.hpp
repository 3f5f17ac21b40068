#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spsum {

/// Base class for every error thrown by the library. `index()` is the
/// 1-based position that triggered the failure, or 0 when not applicable.
class Error : public std::runtime_error {
 public:
  Error(const std::string& what, std::size_t index = 0)
      : std::runtime_error(what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class InvalidArgument : public Error {
  using Error::Error;
};

/// a(i+1) b(i) - a(i) b(i+1) vanished in a single-pair closed form.
class DegenerateDenominator : public Error {
  using Error::Error;
};

/// A pivot of the forward or backward tridiagonal elimination vanished.
class PivotBreakdown : public Error {
  using Error::Error;
};

/// Two consecutive entries of a generator or continuant sequence coincide
/// within tolerance.
class CollisionError : public Error {
  using Error::Error;
};

class ZeroContinuant : public Error {
  using Error::Error;
};

class SingularMatrix : public Error {
  using Error::Error;
};

}  // namespace spsum
