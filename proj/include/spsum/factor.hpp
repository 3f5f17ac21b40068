#pragma once

// Factorizations of A + C and of symmetric tridiagonal matrices through
// triangular factors with closed-form entries.
//
// Every sequence is a Sequence with slot 0 holding the recursion's initial
// value (b(0) = x, v(0) = z, beta(0) = 0, u(0) = 0). Triangular factors are
// materialized from their entry formulas, never by generic inversion.

#include <cstddef>

#include "spsum/core.hpp"
#include "spsum/dense.hpp"

namespace spsum {

/// Lower-triangular matrix with entries b(i) - b(j-1) for j <= i.
Matrix ldl_factor(const Sequence& b);
/// Inverse of `ldl_factor(b)`: lower triband with diagonal 1/(b(i)-b(i-1)).
Matrix ldl_factor_inverse(const Sequence& b);
/// (u_min(i,j) v_max(i,j)) without generator validation.
Matrix single_pair_dense(const Sequence& u, const Sequence& v);

/// A + C = (LDL) T (LDL)^T.
struct TriFactorizationT1 {
  Sequence b;     // b(0) = x
  Sequence beta;  // beta(1..n); beta(n) is not an entry of t
  SymTridiagonal t;

  std::size_t n() const noexcept { return t.n(); }
  /// Diagonal entry i of D, b(i) - b(i-1).
  double d(std::size_t i) const { return b[i] - b[i - 1]; }
  Matrix ldl() const { return ldl_factor(b); }
  Matrix ldl_inverse() const { return ldl_factor_inverse(b); }
  Matrix reconstruct() const;
};

/// Throws InvalidArgument for an invalid SpSum (including x = b(1)) and
/// CollisionError naming i when |b(i) - b(i-1)| < tol.
TriFactorizationT1 factor_theorem1(const SpSum& s);

/// Continuant recursion theta_i = alpha_i theta_{i-1} - beta_{i-1}^2 theta_{i-2}.
double tridiag_determinant(const SymTridiagonal& t);
/// prod (b(i) - b(i-1))^2 * det T.
double det_via_factorization(const TriFactorizationT1& f);

/// T = (LDL)^{-1} SP(a, b) (LDL)^{-T}.
struct SpFactorizationT2 {
  Sequence a;  // a(0) = 0
  Sequence b;  // b(0) = x
  double x = 0.0;
  double y = 0.0;

  std::size_t n() const noexcept { return a.size() - 1; }
  Matrix ldl() const { return ldl_factor(b); }
  Matrix ldl_inverse() const { return ldl_factor_inverse(b); }
  /// (LDL)^{-1} SP(a, b) (LDL)^{-T}.
  Matrix reconstruct() const;
};

/// The coupled recursion alone, with no validation of inputs or outputs;
/// coincident b values pass through.
SpFactorizationT2 theorem2_recursion(const SymTridiagonal& t, double x, double y);

/// Checked recursion: throws InvalidArgument when |x|, |y| < tol or T is
/// reducible, CollisionError naming i when |b(i) - b(i-1)| < tol.
SpFactorizationT2 tridiag_to_sp_theorem2(const SymTridiagonal& t, double x = 1.0, double y = 1.0,
                                         double tol = kDefaultTol);

/// T^{-1} = (LDL)^T SP(a, b)^{-1} (LDL) with SP(a, b)^{-1} tridiagonal
/// (lambda on the diagonal, -mu off it).
struct TridiagInverse {
  Sequence lambda;             // lambda(1..n)
  Sequence mu;                 // mu(0..n), mu(n) = 0
  Sequence mu_generator_form;  // 1 / (a(i+1) b(i) - a(i) b(i+1)), 1 <= i <= n-1
  SpFactorizationT2 factors;

  SymTridiagonal inner() const;
  DenseSymmetric assemble() const;
};

/// Throws ZeroContinuant naming i when |b(i)| < tol, plus the errors of
/// tridiag_to_sp_theorem2.
TridiagInverse tridiag_inverse_corollary(const SymTridiagonal& t, double x = 1.0, double y = 1.0,
                                         double tol = kDefaultTol);

/// T = (L^{-1} Ddot^{-1} B) SP(adot, bdot) (L^{-1} Ddot^{-1} B)^T with
/// Ddot = diag(bdot(i) - beta(i) bdot(i-1)) and B unit lower bidiagonal with
/// -beta(i) below the diagonal.
struct DottedFactorization {
  Sequence adot;  // adot(0) = 0
  Sequence bdot;  // bdot(0) = x
  Sequence beta;  // beta(1..n), beta(n) = y

  std::size_t n() const noexcept { return adot.size() - 1; }
  /// L^{-1} Ddot^{-1} B.
  Matrix left_factor() const;
  Matrix reconstruct() const;
};

DottedFactorization tridiag_factor_dotted(const SymTridiagonal& t, double x = 1.0, double y = 1.0,
                                          double tol = kDefaultTol);

/// A + C = (L Delta L^{-1}) SP(u, v) (L Delta L^{-1})^T with
/// delta(i) = (b(i) - b(i-1)) / (v(i) - v(i-1)).
struct SumFactorizationT3 {
  Sequence b;  // b(0) = x
  Sequence u;  // u(0) = 0
  Sequence v;  // v(0) = z
  Sequence delta;

  std::size_t n() const noexcept { return u.size() - 1; }
  /// Entries delta(j) - delta(j+1) below the diagonal, delta(i) on it.
  Matrix left_factor() const;
  /// Entries 1/delta(j) - 1/delta(j+1) below the diagonal, 1/delta(i) on it.
  Matrix left_factor_inverse() const;
  Matrix reconstruct() const;
};

/// Throws InvalidArgument when |a(1) x + c(1)| < tol, DegenerateDenominator
/// naming i when beta(i) (times (b(i) - b(i-1))^2) vanishes, CollisionError
/// naming i on |b(i) - b(i-1)| < tol or |v(i) - v(i-1)| < tol.
SumFactorizationT3 sum_factor_theorem3(const SpSum& s);

/// A + C = (L Deltadot B) SP(udot, vdot) (L Deltadot B)^T with
/// deltadot(i) = (b(i) - b(i-1)) / (vdot(i) - beta(i) vdot(i-1)).
struct SumFactorizationT4 {
  Sequence b;  // b(0) = x
  Sequence udot;
  Sequence vdot;  // vdot(0) = z
  Sequence beta;  // beta(1..n)
  Sequence delta;

  std::size_t n() const noexcept { return udot.size() - 1; }
  /// Entries delta(j) - beta(j+1) delta(j+1) below the diagonal.
  Matrix left_factor() const;
  /// B^{-1} Deltadot^{-1} L^{-1}.
  Matrix left_factor_inverse() const;
  Matrix reconstruct() const;
};

/// Throws CollisionError naming i on |b(i) - b(i-1)| < tol or
/// |vdot(i) - beta(i) vdot(i-1)| < tol.
SumFactorizationT4 sum_factor_theorem4(const SpSum& s);

enum class Variant { t3, t4 };

/// (A + C)^{-1} = F^T M^{-1} F with M^{-1} tridiagonal (lambda, -mu) and F
/// the inverse left factor of the chosen factorization.
struct SumInverse {
  Variant variant;
  Sequence lambda;  // lambda(1..n)
  Sequence mu;      // mu(0..n), mu(n) = 0
  Matrix factor;    // F

  SymTridiagonal inner() const;
  DenseSymmetric assemble() const;
};

/// Throws ZeroContinuant naming i when |v(i)| (or |vdot(i)|) < tol, plus the
/// errors of the underlying factorization.
SumInverse sum_inverse_corollaries(const SpSum& s, Variant variant);

}  // namespace spsum
