#include "spsum/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "spsum/errors.hpp"

namespace spsum {

namespace {

Sequence with_sentinel(std::span<const double> values, double sentinel) {
  Sequence s(values.size() + 1);
  s[0] = sentinel;
  std::copy(values.begin(), values.end(), s.begin() + 1);
  return s;
}

void require_nonzero_finite(const Sequence& s, const char* name) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!std::isfinite(s[i]) || s[i] == 0.0)
      throw InvalidArgument(std::string("generator ") + name + "(" + std::to_string(i) +
                                ") must be finite and nonzero",
                            i);
  }
}

}  // namespace

SinglePairGenerators::SinglePairGenerators(std::span<const double> a, std::span<const double> b)
    : n_(a.size()), a_(with_sentinel(a, 0.0)), b_(with_sentinel(b, 0.0)) {
  if (b.size() != n_) throw InvalidArgument("generators a and b differ in length");
  if (n_ < 2) throw InvalidArgument("single-pair matrices need n >= 2");
  require_nonzero_finite(a_, "a");
  require_nonzero_finite(b_, "b");
}

SinglePairGenerators::SinglePairGenerators(std::span<const double> a, std::span<const double> b,
                                           std::span<const double> d)
    : SinglePairGenerators(a, b) {
  if (d.size() != n_) throw InvalidArgument("generator d differs in length");
  d_ = with_sentinel(d, 1.0);
  require_nonzero_finite(*d_, "d");
}

SinglePairGenerators SinglePairGenerators::folded() const {
  std::vector<double> a(n_), b(n_);
  for (std::size_t i = 1; i <= n_; ++i) {
    a[i - 1] = d(i) * a_[i];
    b[i - 1] = d(i) * b_[i];
  }
  return SinglePairGenerators(a, b);
}

SpSum::SpSum(std::span<const double> a, std::span<const double> b, std::span<const double> c,
             double x, double z, double tol)
    : n_(a.size()),
      a_(with_sentinel(a, 0.0)),
      b_(with_sentinel(b, x)),
      c_(with_sentinel(c, 0.0)),
      z_(z),
      tol_(tol) {
  if (b.size() != n_ || c.size() != n_)
    throw InvalidArgument("generators a, b and c differ in length");
}

void SpSum::validate() const {
  if (n_ < 2) throw InvalidArgument("n = " + std::to_string(n_) + " but n >= 2 is required");
  if (!(std::isfinite(tol_) && tol_ > 0.0)) throw InvalidArgument("tolerance must be positive");
  for (std::size_t i = 0; i <= n_; ++i) {
    if (!std::isfinite(a_[i]) || !std::isfinite(b_[i]) || !std::isfinite(c_[i]))
      throw InvalidArgument("non-finite generator at index " + std::to_string(i), i);
  }
  if (!std::isfinite(z_) || std::abs(z_) < tol_)
    throw InvalidArgument("free parameter z must satisfy |z| >= tol");
  if (std::abs(b_[1] - b_[0]) < tol_)
    throw InvalidArgument("free parameter x must satisfy |b(1) - x| >= tol", 1);
}

SpSum SpSum::with_free_parameters(double x, double z) const {
  return SpSum(std::span(a_).subspan(1), std::span(b_).subspan(1), std::span(c_).subspan(1), x, z,
               tol_);
}

NormalizedSum normalize_general_sum(std::span<const double> a, std::span<const double> b,
                                    std::span<const double> c, std::span<const double> d,
                                    double x, double z, double tol) {
  const std::size_t n = a.size();
  if (b.size() != n || c.size() != n || d.size() != n)
    throw InvalidArgument("generators a, b, c and d differ in length");
  std::vector<double> an(n), bn(n), cn(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] == 0.0 || !std::isfinite(d[i]))
      throw InvalidArgument("generator d must be finite and nonzero", i + 1);
    an[i] = a[i] / d[i];
    bn[i] = b[i] / d[i];
    cn[i] = c[i] / d[i];
  }
  return {SpSum(an, bn, cn, x, z, tol), std::vector<double>(d.begin(), d.end())};
}

SymTridiagonal::SymTridiagonal(std::span<const double> alpha, std::span<const double> beta)
    : n_(alpha.size()), alpha_(with_sentinel(alpha, 0.0)), beta_(n_ + 1, 0.0) {
  if (n_ < 1) throw InvalidArgument("tridiagonal matrix needs n >= 1");
  if (beta.size() + 1 != n_) throw InvalidArgument("off-diagonal must have n - 1 entries");
  std::copy(beta.begin(), beta.end(), beta_.begin() + 1);
}

bool SymTridiagonal::irreducible(double tol) const {
  for (std::size_t i = 1; i < n_; ++i)
    if (std::abs(beta_[i]) <= tol) return false;
  return true;
}

void SymTridiagonal::require_irreducible(double tol) const {
  for (std::size_t i = 1; i < n_; ++i)
    if (std::abs(beta_[i]) <= tol)
      throw InvalidArgument("tridiagonal matrix is reducible at beta(" + std::to_string(i) + ")",
                            i);
}

Matrix SymTridiagonal::dense() const {
  Matrix m(n_, n_);
  for (std::size_t i = 1; i <= n_; ++i) {
    m(i - 1, i - 1) = alpha_[i];
    if (i < n_) {
      m(i - 1, i) = -beta_[i];
      m(i, i - 1) = -beta_[i];
    }
  }
  return m;
}

DenseSymmetric DenseSymmetric::from_upper(const Matrix& m) {
  if (!m.square()) throw InvalidArgument("symmetric matrix must be square");
  DenseSymmetric s(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) s.set(i, j, m(i, j));
  return s;
}

DenseSymmetric DenseSymmetric::symmetrized(const Matrix& m) {
  if (!m.square()) throw InvalidArgument("symmetric matrix must be square");
  DenseSymmetric s(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  return s;
}

DenseSymmetric sp_materialize(const SinglePairGenerators& gen) {
  const std::size_t n = gen.n();
  DenseSymmetric out(n);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i; j <= n; ++j)
      out.set(i - 1, j - 1, gen.d(i) * gen.d(j) * (gen.a(i) * gen.b(j)));
  return out;
}

DenseSymmetric spsum_materialize(const SpSum& s) {
  const std::size_t n = s.n();
  DenseSymmetric out(n);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i; j <= n; ++j) out.set(i - 1, j - 1, s.a(i) * s.b(j) + s.c(i));
  return out;
}

SymTridiagonal sp_inverse_closed_form(const SinglePairGenerators& generators, double tol) {
  const SinglePairGenerators gen = generators.has_d() ? generators.folded() : generators;
  const std::size_t n = gen.n();
  // den[i] = a(i+1) b(i) - a(i) b(i+1), 1 <= i <= n-1
  std::vector<double> den(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    den[i] = gen.a(i + 1) * gen.b(i) - gen.a(i) * gen.b(i + 1);
    if (!(std::abs(den[i]) >= tol))
      throw DegenerateDenominator(
          "single-pair denominator a(i+1)b(i) - a(i)b(i+1) vanishes at i = " + std::to_string(i),
          i);
  }
  std::vector<double> alpha(n), beta(n - 1);
  alpha[0] = (gen.a(2) / gen.a(1)) / den[1];
  alpha[n - 1] = (gen.b(n - 1) / gen.b(n)) / den[n - 1];
  for (std::size_t i = 2; i < n; ++i)
    alpha[i - 1] = (gen.a(i + 1) * gen.b(i - 1) - gen.a(i - 1) * gen.b(i + 1)) /
                   (den[i - 1] * den[i]);
  for (std::size_t i = 1; i < n; ++i) beta[i - 1] = 1.0 / den[i];
  return SymTridiagonal(alpha, beta);
}

SinglePairGenerators sp_scale(const SinglePairGenerators& gen, std::span<const double> lambda) {
  const std::size_t n = gen.n();
  if (lambda.size() != n) throw InvalidArgument("scaling vector differs in length");
  std::vector<double> a(n), b(n), d(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double l = lambda[i - 1];
    if (l == 0.0 || !std::isfinite(l))
      throw InvalidArgument("scaling factor " + std::to_string(i) + " must be finite and nonzero",
                            i);
    a[i - 1] = l * gen.a(i);
    b[i - 1] = l * gen.b(i);
    d[i - 1] = gen.d(i);
  }
  return gen.has_d() ? SinglePairGenerators(a, b, d) : SinglePairGenerators(a, b);
}

namespace {

void require_square_conformable(const Matrix& a, const Matrix& b, const Matrix& c) {
  if (!a.square() || !b.square() || !c.square() || a.rows() != b.rows() || b.rows() != c.rows())
    throw InvalidArgument("triple product needs conformable square factors");
}

}  // namespace

Matrix ltu_product(const Matrix& l, const Matrix& t, const Matrix& u) {
  require_square_conformable(l, t, u);
  const std::size_t n = l.rows();
  // 1-based accessors
  auto L = [&](std::size_t i, std::size_t j) { return l(i - 1, j - 1); };
  auto T = [&](std::size_t i, std::size_t j) { return t(i - 1, j - 1); };
  auto U = [&](std::size_t i, std::size_t j) { return u(i - 1, j - 1); };
  Matrix out(n, n);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) {
      double s = 0.0;
      for (std::size_t k = 1; k <= std::min(i, j); ++k) s += L(i, k) * T(k, k) * U(k, j);
      for (std::size_t k = 1; k <= std::min(i - 1, j); ++k)
        s += L(i, k + 1) * T(k + 1, k) * U(k, j);
      for (std::size_t k = 1; k <= std::min(i, j - 1); ++k)
        s += L(i, k) * T(k, k + 1) * U(k + 1, j);
      out(i - 1, j - 1) = s;
    }
  return out;
}

Matrix utl_product(const Matrix& u, const Matrix& t, const Matrix& l) {
  require_square_conformable(u, t, l);
  const std::size_t n = u.rows();
  auto L = [&](std::size_t i, std::size_t j) { return l(i - 1, j - 1); };
  auto T = [&](std::size_t i, std::size_t j) { return t(i - 1, j - 1); };
  auto U = [&](std::size_t i, std::size_t j) { return u(i - 1, j - 1); };
  Matrix out(n, n);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) {
      double s = 0.0;
      for (std::size_t k = std::max(i, j); k <= n; ++k) s += U(i, k) * T(k, k) * L(k, j);
      for (std::size_t k = std::max(i + 1, j); k <= n; ++k)
        s += U(i, k - 1) * T(k - 1, k) * L(k, j);
      for (std::size_t k = std::max(i, j + 1); k <= n; ++k)
        s += U(i, k) * T(k, k - 1) * L(k - 1, j);
      out(i - 1, j - 1) = s;
    }
  return out;
}

SinglePairGenerators tridiag_inverse_meurant(const SymTridiagonal& t, double tol) {
  const std::size_t n = t.n();
  if (n < 2) throw InvalidArgument("tridiagonal inversion needs n >= 2");
  t.require_irreducible();

  auto check = [tol](double pivot, const char* name, std::size_t i) {
    if (!(std::abs(pivot) >= tol))
      throw PivotBreakdown(std::string(name) + "(" + std::to_string(i) + ") pivot breakdown", i);
  };

  Sequence back(n + 1), fwd(n + 1);  // d_i backward, delta_i forward
  back[n] = t.alpha(n);
  check(back[n], "d", n);
  for (std::size_t i = n; i >= 2; --i) {
    back[i - 1] = t.alpha(i - 1) - t.beta(i - 1) * t.beta(i - 1) / back[i];
    check(back[i - 1], "d", i - 1);
  }
  fwd[1] = t.alpha(1);
  check(fwd[1], "delta", 1);
  for (std::size_t i = 1; i < n; ++i) {
    fwd[i + 1] = t.alpha(i + 1) - t.beta(i) * t.beta(i) / fwd[i];
    check(fwd[i + 1], "delta", i + 1);
  }

  std::vector<double> a(n), b(n);
  b[0] = 1.0 / back[1];
  for (std::size_t i = 2; i <= n; ++i) b[i - 1] = b[i - 2] * t.beta(i - 1) / back[i];
  a[n - 1] = 1.0 / (fwd[n] * b[n - 1]);
  for (std::size_t i = n - 1; i >= 1; --i) a[i - 1] = a[i] * t.beta(i) / fwd[i];
  return SinglePairGenerators(a, b);
}

DenseSymmetric invert_sum_baseline(const SpSum& s) {
  s.validate();
  const std::size_t n = s.n();
  const double tol = s.tol();
  double scale = 0.0;
  for (std::size_t i = 1; i <= n; ++i) scale = std::max(scale, std::abs(s.b(i)));

  constexpr std::array<double, 9> kShifts{0.0, 0.5, -0.5, 1.0, -1.0, 0.25, -0.25, 2.0, -2.0};
  for (double t : kShifts) {
    const double shift = t * scale;
    std::vector<double> a(n), b(n), c(n), ones(n, 1.0);
    bool admissible = true;
    for (std::size_t i = 1; i <= n; ++i) {
      a[i - 1] = s.a(i);
      b[i - 1] = s.b(i) - shift;
      c[i - 1] = s.c(i) + shift * s.a(i);
      admissible = admissible && std::abs(a[i - 1]) >= tol && std::abs(b[i - 1]) >= tol &&
                   std::abs(c[i - 1]) >= tol;
    }
    if (!admissible) continue;
    std::optional<SymTridiagonal> a_inv, c_inv;
    try {
      a_inv = sp_inverse_closed_form(SinglePairGenerators(a, b), tol);
      c_inv = sp_inverse_closed_form(SinglePairGenerators(c, ones), tol);
    } catch (const DegenerateDenominator&) {
      continue;
    }
    const Matrix ainv = a_inv->dense();
    const Matrix cinv = c_inv->dense();
    const Matrix middle = lu_inverse(cinv + ainv);
    return DenseSymmetric::symmetrized(cinv * middle * ainv);
  }
  throw DegenerateDenominator("no admissible split of A + C into invertible single-pair terms");
}

}  // namespace spsum
