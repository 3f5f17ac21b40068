#pragma once

// Matrix representations for single-pair matrices, sums of two single-pair
// matrices and symmetric tridiagonal matrices, plus the classical closed
// forms relating them.
//
// Indexing convention: every generator sequence is stored with an explicit
// slot 0 (a(0) = c(0) = 0, b(0) = x) so that element i of a sequence is
// element i of the underlying formula, 1 <= i <= n. Dense matrices use
// 0-based (row, col) access.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "spsum/dense.hpp"

namespace spsum {

/// Length n + 1 buffer; slot 0 holds the sentinel of the sequence.
using Sequence = std::vector<double>;

inline constexpr double kDefaultTol = 1e-12;

/// Generators of SP(a, b) = (a_min(i,j) b_max(i,j)), optionally conjugated by
/// diag(d): entries become d_i d_j a_min b_max.
class SinglePairGenerators {
 public:
  SinglePairGenerators(std::span<const double> a, std::span<const double> b);
  SinglePairGenerators(std::span<const double> a, std::span<const double> b,
                       std::span<const double> d);

  std::size_t n() const noexcept { return n_; }
  double a(std::size_t i) const { return a_[i]; }
  double b(std::size_t i) const { return b_[i]; }
  double d(std::size_t i) const { return d_ ? (*d_)[i] : 1.0; }
  bool has_d() const noexcept { return d_.has_value(); }

  /// Folds d into the pair: SP(d a, d b) materializes identically.
  SinglePairGenerators folded() const;

 private:
  std::size_t n_;
  Sequence a_;
  Sequence b_;
  std::optional<Sequence> d_;
};

/// A + C with A = (a_min b_max), C = (c_min), and the free parameters
/// x = b(0), z = v(0) of the factorizations. Construction only checks shapes;
/// value-level requirements are checked by `validate()` or reported by the
/// inversion routines as status codes.
class SpSum {
 public:
  SpSum(std::span<const double> a, std::span<const double> b, std::span<const double> c,
        double x = 0.0, double z = 1.0, double tol = kDefaultTol);

  std::size_t n() const noexcept { return n_; }
  double a(std::size_t i) const { return a_[i]; }
  double b(std::size_t i) const { return b_[i]; }
  double c(std::size_t i) const { return c_[i]; }
  double x() const noexcept { return b_[0]; }
  double z() const noexcept { return z_; }
  double tol() const noexcept { return tol_; }

  const Sequence& a_seq() const noexcept { return a_; }
  const Sequence& b_seq() const noexcept { return b_; }
  const Sequence& c_seq() const noexcept { return c_; }

  /// Throws InvalidArgument unless n >= 2, every value is finite, tol > 0,
  /// |b(1) - x| >= tol and |z| >= tol.
  void validate() const;

  SpSum with_free_parameters(double x, double z) const;

 private:
  std::size_t n_;
  Sequence a_;
  Sequence b_;
  Sequence c_;
  double z_;
  double tol_;
};

/// Reduction of A + (c_min d_max) to the d = 1 case:
/// A + C = diag(d) * (A' + C') * diag(d) with A' = SP(a/d, b/d), C' = (c_min/d_min).
struct NormalizedSum {
  SpSum sum;
  std::vector<double> d;  // 0-based, length n
};
NormalizedSum normalize_general_sum(std::span<const double> a, std::span<const double> b,
                                    std::span<const double> c, std::span<const double> d,
                                    double x = 0.0, double z = 1.0, double tol = kDefaultTol);

/// Symmetric tridiagonal matrix with diagonal alpha(1..n) and off-diagonal
/// entries -beta(1..n-1).
class SymTridiagonal {
 public:
  SymTridiagonal(std::span<const double> alpha, std::span<const double> beta);

  std::size_t n() const noexcept { return n_; }
  double alpha(std::size_t i) const { return alpha_[i]; }
  /// beta(0) = 0 by convention.
  double beta(std::size_t i) const { return beta_[i]; }

  bool irreducible(double tol = 0.0) const;
  /// Throws InvalidArgument naming the first |beta(i)| <= tol.
  void require_irreducible(double tol = 0.0) const;

  Matrix dense() const;

 private:
  std::size_t n_;
  Sequence alpha_;
  Sequence beta_;
};

/// Exactly symmetric dense matrix.
class DenseSymmetric {
 public:
  explicit DenseSymmetric(std::size_t n = 0) : m_(n, n) {}

  /// Mirrors the upper triangle of `m`.
  static DenseSymmetric from_upper(const Matrix& m);
  /// (m + m^T) / 2.
  static DenseSymmetric symmetrized(const Matrix& m);

  std::size_t n() const noexcept { return m_.rows(); }
  double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  void set(std::size_t r, std::size_t c, double v) {
    m_(r, c) = v;
    m_(c, r) = v;
  }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

DenseSymmetric sp_materialize(const SinglePairGenerators& gen);
DenseSymmetric spsum_materialize(const SpSum& s);

/// Tridiagonal inverse of SP(a, b) from the classical closed form. Throws
/// DegenerateDenominator naming i when |a(i+1) b(i) - a(i) b(i+1)| < tol.
SymTridiagonal sp_inverse_closed_form(const SinglePairGenerators& gen,
                                      double tol = kDefaultTol);

/// (lambda_i a_i), (lambda_i b_i): materializes to Lambda SP(a, b) Lambda.
SinglePairGenerators sp_scale(const SinglePairGenerators& gen, std::span<const double> lambda);

/// Triple products of a lower-triangular, a tridiagonal and an
/// upper-triangular matrix using only the banded structure of `t`.
Matrix ltu_product(const Matrix& l, const Matrix& t, const Matrix& u);
Matrix utl_product(const Matrix& u, const Matrix& t, const Matrix& l);

/// Generators of T^{-1} from the forward and backward pivot recursions.
/// Throws PivotBreakdown naming the pivot index when |pivot| < tol, and
/// InvalidArgument when T is reducible.
SinglePairGenerators tridiag_inverse_meurant(const SymTridiagonal& t, double tol = kDefaultTol);

/// (A + C)^{-1} = C^{-1} (C^{-1} + A^{-1})^{-1} A^{-1} with both single-pair
/// inverses in closed form. When the given split has a singular C or A the
/// split is shifted, A' = SP(a, b - s), C' = (c_min + s a_min), which leaves
/// A + C unchanged; the first admissible shift from a fixed list is used.
DenseSymmetric invert_sum_baseline(const SpSum& s);

}  // namespace spsum
