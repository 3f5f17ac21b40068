#include "spsum/factor.hpp"

#include <cmath>
#include <string>

#include "spsum/errors.hpp"

namespace spsum {

namespace {

std::string at(std::size_t i) { return " at index " + std::to_string(i); }

// beta(i) and the slopes r(i) = (a(i) - a(i-1)) / (b(i) - b(i-1)), r(0) = 0,
// shared by every factorization of A + C.
struct SumCoefficients {
  Sequence beta;
  Sequence r;
  Sequence numer;  // a(i) b(i-1) - a(i-1) b(i) + c(i) - c(i-1)
};

SumCoefficients sum_coefficients(const SpSum& s) {
  s.validate();
  const std::size_t n = s.n();
  const double tol = s.tol();
  SumCoefficients k{Sequence(n + 1, 0.0), Sequence(n + 1, 0.0), Sequence(n + 1, 0.0)};
  for (std::size_t i = 1; i <= n; ++i) {
    const double db = s.b(i) - s.b(i - 1);
    if (!(std::abs(db) >= tol))
      throw CollisionError("consecutive b values too close" + at(i), i);
    k.numer[i] = s.a(i) * s.b(i - 1) - s.a(i - 1) * s.b(i) + (s.c(i) - s.c(i - 1));
    k.beta[i] = k.numer[i] / (db * db);
    k.r[i] = (s.a(i) - s.a(i - 1)) / db;
  }
  return k;
}

}  // namespace

Matrix ldl_factor(const Sequence& b) {
  const std::size_t n = b.size() - 1;
  Matrix m(n, n);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= i; ++j) m(i - 1, j - 1) = b[i] - b[j - 1];
  return m;
}

Matrix ldl_factor_inverse(const Sequence& b) {
  const std::size_t n = b.size() - 1;
  Matrix m(n, n);
  for (std::size_t i = 1; i <= n; ++i) {
    m(i - 1, i - 1) = 1.0 / (b[i] - b[i - 1]);
    if (i >= 2)
      m(i - 1, i - 2) = -(b[i] - b[i - 2]) / ((b[i - 1] - b[i - 2]) * (b[i] - b[i - 1]));
    if (i >= 3) m(i - 1, i - 3) = 1.0 / (b[i - 1] - b[i - 2]);
  }
  return m;
}

Matrix single_pair_dense(const Sequence& u, const Sequence& v) {
  const std::size_t n = u.size() - 1;
  Matrix m(n, n);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i; j <= n; ++j) {
      m(i - 1, j - 1) = u[i] * v[j];
      m(j - 1, i - 1) = u[i] * v[j];
    }
  return m;
}

Matrix TriFactorizationT1::reconstruct() const {
  const Matrix l = ldl();
  return ltu_product(l, t.dense(), l.transposed());
}

TriFactorizationT1 factor_theorem1(const SpSum& s) {
  const SumCoefficients k = sum_coefficients(s);
  const std::size_t n = s.n();
  std::vector<double> alpha(n), beta(n - 1);
  const double d1 = s.b(1) - s.x();
  alpha[0] = (s.a(1) * s.b(1) + s.c(1)) / (d1 * d1);
  for (std::size_t i = 2; i <= n; ++i)
    alpha[i - 1] = k.beta[i] + k.beta[i - 1] + k.r[i] - k.r[i - 1];
  for (std::size_t i = 1; i < n; ++i) beta[i - 1] = k.beta[i];
  return TriFactorizationT1{s.b_seq(), k.beta, SymTridiagonal(alpha, beta)};
}

double tridiag_determinant(const SymTridiagonal& t) {
  double prev = 1.0;
  double cur = t.alpha(1);
  for (std::size_t i = 2; i <= t.n(); ++i) {
    const double next = t.alpha(i) * cur - t.beta(i - 1) * t.beta(i - 1) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double det_via_factorization(const TriFactorizationT1& f) {
  double scale = 1.0;
  for (std::size_t i = 1; i <= f.n(); ++i) scale *= f.d(i) * f.d(i);
  return scale * tridiag_determinant(f.t);
}

Matrix SpFactorizationT2::reconstruct() const {
  const Matrix li = ldl_inverse();
  return li * single_pair_dense(a, b) * li.transposed();
}

SpFactorizationT2 theorem2_recursion(const SymTridiagonal& t, double x, double y) {
  const std::size_t n = t.n();
  auto beta = [&](std::size_t i) { return i == n ? y : t.beta(i); };
  SpFactorizationT2 f{Sequence(n + 1, 0.0), Sequence(n + 1, 0.0), x, y};
  f.b[0] = x;
  f.a[1] = x * (t.alpha(1) - beta(1)) * (t.alpha(1) - beta(1)) / beta(1);
  f.b[1] = x * t.alpha(1) / beta(1);
  double partial = t.alpha(1) - beta(1);
  for (std::size_t i = 2; i <= n; ++i) {
    partial += t.alpha(i) - beta(i) - beta(i - 1);
    f.a[i] = f.a[i - 1] - f.a[i - 1] * partial / beta(i) + f.b[i - 1] * partial * partial / beta(i);
    f.b[i] = t.alpha(i) / beta(i) * f.b[i - 1] - beta(i - 1) / beta(i) * f.b[i - 2];
  }
  return f;
}

SpFactorizationT2 tridiag_to_sp_theorem2(const SymTridiagonal& t, double x, double y,
                                         double tol) {
  if (t.n() < 2) throw InvalidArgument("tridiagonal factorization needs n >= 2");
  if (!std::isfinite(x) || std::abs(x) < tol) throw InvalidArgument("free parameter x must be nonzero");
  if (!std::isfinite(y) || std::abs(y) < tol) throw InvalidArgument("free parameter y must be nonzero");
  t.require_irreducible(tol);
  SpFactorizationT2 f = theorem2_recursion(t, x, y);
  for (std::size_t i = 1; i <= t.n(); ++i) {
    if (!std::isfinite(f.a[i]) || !std::isfinite(f.b[i]))
      throw InvalidArgument("non-finite generator" + at(i), i);
    if (!(std::abs(f.b[i] - f.b[i - 1]) >= tol))
      throw CollisionError("b(i) coincides with b(i-1)" + at(i), i);
  }
  return f;
}

SymTridiagonal TridiagInverse::inner() const {
  const std::size_t n = lambda.size() - 1;
  return SymTridiagonal(std::span(lambda).subspan(1), std::span(mu).subspan(1, n - 1));
}

DenseSymmetric TridiagInverse::assemble() const {
  const Matrix l = factors.ldl();
  return DenseSymmetric::symmetrized(utl_product(l.transposed(), inner().dense(), l));
}

TridiagInverse tridiag_inverse_corollary(const SymTridiagonal& t, double x, double y, double tol) {
  SpFactorizationT2 f = tridiag_to_sp_theorem2(t, x, y, tol);
  const std::size_t n = t.n();
  for (std::size_t i = 1; i <= n; ++i)
    if (!(std::abs(f.b[i]) >= tol)) throw ZeroContinuant("b vanishes" + at(i), i);
  auto beta = [&](std::size_t i) { return i == n ? y : t.beta(i); };

  TridiagInverse inv{Sequence(n + 1, 0.0), Sequence(n + 1, 0.0), Sequence(n, 0.0), std::move(f)};
  const Sequence& a = inv.factors.a;
  const Sequence& b = inv.factors.b;
  const double lead = t.alpha(1) - t.beta(1);
  inv.mu[0] = t.beta(1) / (x * x * lead * lead);
  for (std::size_t i = 1; i < n; ++i) {
    const double db = b[i + 1] - b[i];
    inv.mu[i] = 1.0 / (db * db * beta(i + 1));
    inv.mu_generator_form[i] = 1.0 / (a[i + 1] * b[i] - a[i] * b[i + 1]);
  }
  for (std::size_t i = 1; i <= n; ++i) {
    const double next = i < n ? b[i + 1] / b[i] * inv.mu[i] : 0.0;
    inv.lambda[i] = next + b[i - 1] / b[i] * inv.mu[i - 1];
  }
  return inv;
}

Matrix DottedFactorization::left_factor() const {
  const std::size_t m = n();
  Sequence ddot(m + 1, 0.0);
  for (std::size_t i = 1; i <= m; ++i) ddot[i] = bdot[i] - beta[i] * bdot[i - 1];
  Matrix f(m, m);
  for (std::size_t i = 1; i <= m; ++i) {
    f(i - 1, i - 1) = 1.0 / ddot[i];
    if (i >= 2) f(i - 1, i - 2) = -beta[i] / ddot[i] - 1.0 / ddot[i - 1];
    if (i >= 3) f(i - 1, i - 3) = beta[i - 1] / ddot[i - 1];
  }
  return f;
}

Matrix DottedFactorization::reconstruct() const {
  const Matrix f = left_factor();
  return f * single_pair_dense(adot, bdot) * f.transposed();
}

DottedFactorization tridiag_factor_dotted(const SymTridiagonal& t, double x, double y,
                                          double tol) {
  // Same preconditions as the undotted recursion.
  (void)tridiag_to_sp_theorem2(t, x, y, tol);
  const std::size_t n = t.n();
  DottedFactorization f{Sequence(n + 1, 0.0), Sequence(n + 1, 0.0), Sequence(n + 1, 0.0)};
  for (std::size_t i = 1; i < n; ++i) f.beta[i] = t.beta(i);
  f.beta[n] = y;
  f.bdot[0] = x;
  f.adot[1] = x * (t.alpha(1) - f.beta[1]) * (t.alpha(1) - f.beta[1]);
  f.bdot[1] = x * t.alpha(1);
  double partial = t.alpha(1) - f.beta[1];
  for (std::size_t i = 2; i <= n; ++i) {
    partial += t.alpha(i) - f.beta[i] - f.beta[i - 1];
    f.adot[i] = f.beta[i] * f.adot[i - 1] - f.adot[i - 1] * partial +
                f.bdot[i - 1] * partial * partial;
    f.bdot[i] = t.alpha(i) * f.bdot[i - 1] - f.beta[i - 1] * f.beta[i - 1] * f.bdot[i - 2];
  }
  return f;
}

Matrix SumFactorizationT3::left_factor() const {
  const std::size_t m = n();
  Matrix f(m, m);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j < i; ++j) f(i - 1, j - 1) = delta[j] - delta[j + 1];
    f(i - 1, i - 1) = delta[i];
  }
  return f;
}

Matrix SumFactorizationT3::left_factor_inverse() const {
  const std::size_t m = n();
  Matrix f(m, m);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j < i; ++j) f(i - 1, j - 1) = 1.0 / delta[j] - 1.0 / delta[j + 1];
    f(i - 1, i - 1) = 1.0 / delta[i];
  }
  return f;
}

Matrix SumFactorizationT3::reconstruct() const {
  const Matrix f = left_factor();
  return f * single_pair_dense(u, v) * f.transposed();
}

SumFactorizationT3 sum_factor_theorem3(const SpSum& s) {
  const SumCoefficients k = sum_coefficients(s);
  const std::size_t n = s.n();
  const double tol = s.tol();
  const double lead = s.a(1) * s.x() + s.c(1);
  if (!(std::abs(lead) >= tol))
    throw InvalidArgument("free parameter x must satisfy |a(1) x + c(1)| >= tol", 1);

  SumFactorizationT3 f{s.b_seq(), Sequence(n + 1, 0.0), Sequence(n + 1, 0.0),
                       Sequence(n + 1, 0.0)};
  const double z = s.z();
  f.v[0] = z;
  f.u[1] = z * s.a(1) * s.a(1) / lead;
  f.v[1] = z * (s.a(1) * s.b(1) + s.c(1)) / lead;
  for (std::size_t i = 2; i <= n; ++i) {
    if (!(std::abs(k.numer[i]) >= tol))
      throw DegenerateDenominator("a(i) b(i-1) - a(i-1) b(i) + c(i) - c(i-1) vanishes" + at(i), i);
    const double db = s.b(i) - s.b(i - 1);
    const double rho = db * db / k.numer[i];
    f.u[i] = f.u[i - 1] - rho * (f.u[i - 1] * k.r[i] - f.v[i - 1] * k.r[i] * k.r[i]);
    f.v[i] = f.v[i - 1] + rho * (f.v[i - 1] * (k.r[i] - k.r[i - 1]) +
                                 (f.v[i - 1] - f.v[i - 2]) * k.beta[i - 1]);
  }
  for (std::size_t i = 1; i <= n; ++i) {
    const double dv = f.v[i] - f.v[i - 1];
    if (!std::isfinite(f.u[i]) || !std::isfinite(f.v[i]))
      throw InvalidArgument("non-finite continuant" + at(i), i);
    if (!(std::abs(dv) >= tol)) throw CollisionError("v(i) coincides with v(i-1)" + at(i), i);
    f.delta[i] = (s.b(i) - s.b(i - 1)) / dv;
  }
  return f;
}

Matrix SumFactorizationT4::left_factor() const {
  const std::size_t m = n();
  Matrix f(m, m);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j < i; ++j) f(i - 1, j - 1) = delta[j] - beta[j + 1] * delta[j + 1];
    f(i - 1, i - 1) = delta[i];
  }
  return f;
}

Matrix SumFactorizationT4::left_factor_inverse() const {
  const std::size_t m = n();
  Matrix f(m, m);
  for (std::size_t i = 1; i <= m; ++i) {
    f(i - 1, i - 1) = 1.0 / delta[i];
    // prod(j) = beta(j+1) ... beta(i), prod(i) = 1
    double prod_next = 1.0;
    for (std::size_t j = i - 1; j >= 1; --j) {
      const double prod = beta[j + 1] * prod_next;
      f(i - 1, j - 1) = prod / delta[j] - prod_next / delta[j + 1];
      prod_next = prod;
    }
  }
  return f;
}

Matrix SumFactorizationT4::reconstruct() const {
  const Matrix f = left_factor();
  return f * single_pair_dense(udot, vdot) * f.transposed();
}

SumFactorizationT4 sum_factor_theorem4(const SpSum& s) {
  const SumCoefficients k = sum_coefficients(s);
  const std::size_t n = s.n();
  const double tol = s.tol();
  SumFactorizationT4 f{s.b_seq(), Sequence(n + 1, 0.0), Sequence(n + 1, 0.0), k.beta,
                       Sequence(n + 1, 0.0)};
  const double z = s.z();
  const double d1 = s.b(1) - s.x();
  f.vdot[0] = z;
  f.udot[1] = z * s.a(1) * s.a(1) / (d1 * d1);
  f.vdot[1] = z * (s.a(1) * s.b(1) + s.c(1)) / (d1 * d1);
  for (std::size_t i = 2; i <= n; ++i) {
    const double alpha = k.beta[i] + k.beta[i - 1] + k.r[i] - k.r[i - 1];
    f.udot[i] = k.beta[i] * f.udot[i - 1] - f.udot[i - 1] * k.r[i] +
                f.vdot[i - 1] * k.r[i] * k.r[i];
    f.vdot[i] = alpha * f.vdot[i - 1] - k.beta[i - 1] * k.beta[i - 1] * f.vdot[i - 2];
  }
  for (std::size_t i = 1; i <= n; ++i) {
    const double gap = f.vdot[i] - k.beta[i] * f.vdot[i - 1];
    if (!std::isfinite(f.udot[i]) || !std::isfinite(f.vdot[i]))
      throw InvalidArgument("non-finite continuant" + at(i), i);
    if (!(std::abs(gap) >= tol))
      throw CollisionError("vdot(i) coincides with beta(i) vdot(i-1)" + at(i), i);
    f.delta[i] = (s.b(i) - s.b(i - 1)) / gap;
  }
  return f;
}

SymTridiagonal SumInverse::inner() const {
  const std::size_t n = lambda.size() - 1;
  return SymTridiagonal(std::span(lambda).subspan(1), std::span(mu).subspan(1, n - 1));
}

DenseSymmetric SumInverse::assemble() const {
  return DenseSymmetric::symmetrized(utl_product(factor.transposed(), inner().dense(), factor));
}

namespace {

void fill_lambda(SumInverse& inv, const Sequence& v) {
  const std::size_t n = inv.lambda.size() - 1;
  for (std::size_t i = 1; i <= n; ++i) {
    const double next = i < n ? v[i + 1] / v[i] * inv.mu[i] : 0.0;
    inv.lambda[i] = next + v[i - 1] / v[i] * inv.mu[i - 1];
  }
}

void require_nonzero_continuants(const Sequence& v, double tol) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(std::abs(v[i]) >= tol)) throw ZeroContinuant("continuant vanishes" + at(i), i);
}

}  // namespace

SumInverse sum_inverse_corollaries(const SpSum& s, Variant variant) {
  const std::size_t n = s.n();
  const double tol = s.tol();
  if (variant == Variant::t3) {
    const SumFactorizationT3 f = sum_factor_theorem3(s);
    require_nonzero_continuants(f.v, tol);
    SumInverse inv{variant, Sequence(n + 1, 0.0), Sequence(n + 1, 0.0), f.left_factor_inverse()};
    const double z = s.z();
    inv.mu[0] = (s.a(1) * s.x() + s.c(1)) / (s.a(1) * s.a(1) * z * z);
    for (std::size_t i = 1; i < n; ++i) {
      const double ratio = (s.b(i + 1) - s.b(i)) / (f.v[i + 1] - f.v[i]);
      const double den = s.a(i + 1) * s.b(i) - s.a(i) * s.b(i + 1) + s.c(i + 1) - s.c(i);
      inv.mu[i] = ratio * ratio / den;
    }
    fill_lambda(inv, f.v);
    return inv;
  }
  const SumFactorizationT4 f = sum_factor_theorem4(s);
  require_nonzero_continuants(f.vdot, tol);
  SumInverse inv{variant, Sequence(n + 1, 0.0), Sequence(n + 1, 0.0), f.left_factor_inverse()};
  const double lead = (s.b(1) - s.x()) / (s.a(1) * s.z());
  inv.mu[0] = lead * lead;
  for (std::size_t i = 1; i < n; ++i) {
    const double gap = f.vdot[i + 1] - f.beta[i + 1] * f.vdot[i];
    inv.mu[i] = 1.0 / (gap * gap);
  }
  fill_lambda(inv, f.vdot);
  return inv;
}

}  // namespace spsum
