#pragma once

// Gram matrix of the ramp functions f_i(t) = max(0, k_i - t) on [0, 1], its
// tridiagonal factor, its explicit inverse, and the integer coefficients of
// the continuants as polynomials in the gaps.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "spsum/core.hpp"

namespace spsum {

/// Shifts 0 < k(1) < ... < k(n) <= 1 with k(0) = 0.
class RampSystem {
 public:
  explicit RampSystem(std::span<const double> k);

  std::size_t n() const noexcept { return k_.size() - 1; }
  double k(std::size_t i) const { return k_[i]; }
  /// x(i) = k(i) - k(i-1).
  double gap(std::size_t i) const { return k_[i] - k_[i - 1]; }
  const Sequence& k_seq() const noexcept { return k_; }

 private:
  Sequence k_;
};

/// G = scale * (A + C) with a = 3k^2, b = k, c = -k^3, x = 0, z = 1.
struct GramSum {
  SpSum sum;
  double scale;
};

GramSum gram_build(const RampSystem& r, double tol = kDefaultTol);
/// (k_min^2 k_max) / 2 - k_min^3 / 6, entry by entry.
DenseSymmetric gram_matrix(const RampSystem& r);

/// alpha(1) = 2k(1), alpha(i) = 2(k(i) - k(i-2)); beta(i) = -(k(i) - k(i-1)).
struct GramTridiagonal {
  Sequence alpha;  // alpha(1..n)
  Sequence beta;   // beta(1..n); beta(n) is not an entry of the matrix
  SymTridiagonal tridiagonal() const;
};

GramTridiagonal gram_tridiag(const RampSystem& r);

/// vdot(0) = 1, vdot(1) = 2k(1),
/// vdot(i) = 2(x(i) + x(i-1)) vdot(i-1) - x(i-1)^2 vdot(i-2).
Sequence gram_continuants(const RampSystem& r);

/// Row factor vdot(i+1)/x(i+1) + (x(i+1)+x(i))/x(i) vdot(i) + x(i+1) vdot(i-1).
double gram_row_factor(const RampSystem& r, const Sequence& vdot, std::size_t i);
/// The same factor without vdot(i+1):
/// (x(i+1)+x(i))/x(i+1) [(2 + x(i+1)/x(i)) vdot(i) + (x(i+1) - x(i)) vdot(i-1)].
double gram_row_factor_reduced(const RampSystem& r, const Sequence& vdot, std::size_t i);

/// G^{-1}. Throws ZeroContinuant naming i when |vdot(i)| < tol.
DenseSymmetric gram_inverse(const RampSystem& r, double tol = kDefaultTol);

/// Homogeneous integer polynomial in the gaps: exponent tuple -> coefficient.
/// Zero coefficients are never stored.
struct ContinuantPolynomial {
  std::size_t degree = 0;
  std::map<std::vector<std::uint8_t>, std::int64_t> terms;

  /// Evaluates at gaps x(1..degree), given 0-based.
  double evaluate(std::span<const double> gaps) const;
  /// One "p1 ... pi gamma" line per term in lexicographic tuple order.
  std::string to_text() const;
};

inline constexpr std::size_t kGammaCap = 16;

/// Coefficients of vdot(i) from the tuple recurrence. Throws InvalidArgument
/// when i == 0 or i > cap.
ContinuantPolynomial gamma_coefficients(std::size_t i, std::size_t cap = kGammaCap);
/// Tables for degrees 1..i.
std::vector<ContinuantPolynomial> gamma_tables(std::size_t i, std::size_t cap = kGammaCap);

}  // namespace spsum
