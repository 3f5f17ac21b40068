#include "spsum/gram.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "spsum/errors.hpp"

namespace spsum {

RampSystem::RampSystem(std::span<const double> k) : k_(k.size() + 1, 0.0) {
  if (k.size() < 2) throw InvalidArgument("ramp system needs n >= 2");
  for (std::size_t i = 1; i <= k.size(); ++i) {
    const double v = k[i - 1];
    if (!std::isfinite(v) || !(v > k_[i - 1]))
      throw InvalidArgument("shifts must satisfy 0 < k(1) < ... < k(n); violated at index " +
                                std::to_string(i),
                            i);
    k_[i] = v;
  }
  if (k_.back() > 1.0) throw InvalidArgument("shifts must satisfy k(n) <= 1", k.size());
}

GramSum gram_build(const RampSystem& r, double tol) {
  const std::size_t n = r.n();
  std::vector<double> a(n), b(n), c(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double k = r.k(i);
    a[i - 1] = 3.0 * k * k;
    b[i - 1] = k;
    c[i - 1] = -k * k * k;
  }
  return {SpSum(a, b, c, 0.0, 1.0, tol), 1.0 / 6.0};
}

DenseSymmetric gram_matrix(const RampSystem& r) {
  const std::size_t n = r.n();
  DenseSymmetric g(n);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i; j <= n; ++j) {
      const double lo = r.k(i);
      g.set(i - 1, j - 1, 0.5 * lo * lo * r.k(j) - lo * lo * lo / 6.0);
    }
  return g;
}

SymTridiagonal GramTridiagonal::tridiagonal() const {
  const std::size_t n = alpha.size() - 1;
  return SymTridiagonal(std::span(alpha).subspan(1), std::span(beta).subspan(1, n - 1));
}

GramTridiagonal gram_tridiag(const RampSystem& r) {
  const std::size_t n = r.n();
  GramTridiagonal t{Sequence(n + 1, 0.0), Sequence(n + 1, 0.0)};
  t.alpha[1] = 2.0 * r.k(1);
  t.beta[1] = -r.k(1);
  for (std::size_t i = 2; i <= n; ++i) {
    t.alpha[i] = 2.0 * (r.k(i) - r.k(i - 2));
    t.beta[i] = -(r.k(i) - r.k(i - 1));
  }
  return t;
}

Sequence gram_continuants(const RampSystem& r) {
  const std::size_t n = r.n();
  Sequence v(n + 1, 0.0);
  v[0] = 1.0;
  v[1] = 2.0 * r.k(1);
  for (std::size_t i = 2; i <= n; ++i) {
    const double xi = r.gap(i);
    const double xp = r.gap(i - 1);
    v[i] = 2.0 * (xi + xp) * v[i - 1] - xp * xp * v[i - 2];
  }
  return v;
}

double gram_row_factor(const RampSystem& r, const Sequence& vdot, std::size_t i) {
  const double xi = r.gap(i);
  const double xn = r.gap(i + 1);
  return vdot[i + 1] / xn + (xn + xi) / xi * vdot[i] + xn * vdot[i - 1];
}

double gram_row_factor_reduced(const RampSystem& r, const Sequence& vdot, std::size_t i) {
  const double xi = r.gap(i);
  const double xn = r.gap(i + 1);
  return (xn + xi) / xn * ((2.0 + xn / xi) * vdot[i] + (xn - xi) * vdot[i - 1]);
}

DenseSymmetric gram_inverse(const RampSystem& r, double tol) {
  const std::size_t n = r.n();
  const Sequence v = gram_continuants(r);
  for (std::size_t i = 1; i <= n; ++i)
    if (!(std::abs(v[i]) >= tol))
      throw ZeroContinuant("low continuant: |vdot(" + std::to_string(i) + ")| < tol", i);
  auto x = [&](std::size_t i) { return r.gap(i); };
  auto sign = [](std::size_t e) { return e % 2 == 0 ? 1.0 : -1.0; };

  Sequence p(n + 1, 0.0), rr(n + 1, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    p[i] = gram_row_factor(r, v, i);
    rr[i] = (1.0 / x(i + 1) + 1.0 / x(i)) * v[i] + v[i - 1];
  }

  DenseSymmetric inv(n);
  for (std::size_t j = 1; j <= n; ++j) {
    // tail = sum_{k=j+2}^{n} (x(j+2) ... x(k-1))^2 / (vdot(k) vdot(k-1));
    // the cross sums of row i < j equal x(i+2) ... x(j+1) times tail.
    double tail = 0.0;
    if (j + 1 < n) {
      double g = 1.0;
      for (std::size_t k = j + 2; k <= n; ++k) {
        if (k - 1 >= j + 2) g *= x(k - 1);
        tail += g * g / (v[k] * v[k - 1]);
      }
    }
    double d = 0.0;
    if (j + 1 < n) d = p[j] * p[j] * tail;
    d += v[j - 1] / (x(j) * x(j) * v[j]);
    if (j < n) d += rr[j] * rr[j] / (v[j + 1] * v[j]);
    inv.set(j - 1, j - 1, 6.0 * d);

    // Running products x(i+2) ... x(hi) for hi = j-1, j, j+1.
    double upto_prev = 1.0, upto_j = 1.0, upto_next = 1.0;
    for (std::size_t i = j - 1; i >= 1; --i) {
      const std::size_t lo = i + 2;
      if (lo <= j - 1) upto_prev *= x(lo);
      if (lo <= j) upto_j *= x(lo);
      if (lo <= j + 1 && j + 1 <= n) upto_next *= x(lo);

      const double sg = sign(j - i);
      double e = 0.0;
      if (j + 1 < n) e = sg * p[i] * p[j] * (upto_next * tail);
      if (i + 1 < j) e += sg / x(j) * p[i] * upto_prev / v[j];
      if (j < n) e += sg * p[i] * rr[j] * upto_j / (v[j + 1] * v[j]);
      if (i + 1 == j)
        e -= ((1.0 / x(j) + 1.0 / x(j - 1)) * v[j - 1] + v[j - 2]) / (x(j) * v[j]);
      inv.set(i - 1, j - 1, 6.0 * e);
    }
  }
  return inv;
}

double ContinuantPolynomial::evaluate(std::span<const double> gaps) const {
  if (gaps.size() < degree) throw InvalidArgument("too few gaps for polynomial degree");
  double total = 0.0;
  for (const auto& [key, gamma] : terms) {
    double mono = static_cast<double>(gamma);
    for (std::size_t m = 0; m < key.size(); ++m)
      for (std::uint8_t e = 0; e < key[m]; ++e) mono *= gaps[m];
    total += mono;
  }
  return total;
}

std::string ContinuantPolynomial::to_text() const {
  std::ostringstream out;
  for (const auto& [key, gamma] : terms) {
    for (std::uint8_t e : key) out << static_cast<int>(e) << ' ';
    out << gamma << '\n';
  }
  return out.str();
}

std::vector<ContinuantPolynomial> gamma_tables(std::size_t i, std::size_t cap) {
  if (i == 0) throw InvalidArgument("polynomial degree must be >= 1");
  if (i > cap)
    throw InvalidArgument("degree " + std::to_string(i) + " exceeds cap " + std::to_string(cap));
  std::vector<ContinuantPolynomial> tables;
  tables.reserve(i);
  ContinuantPolynomial first;
  first.degree = 1;
  first.terms[{1}] = 2;
  tables.push_back(std::move(first));

  // Degree-0 table {(): 1} for the carry term of degree 2.
  ContinuantPolynomial unit;
  unit.terms[{}] = 1;

  for (std::size_t d = 1; d < i; ++d) {
    const ContinuantPolynomial& cur = tables[d - 1];
    const ContinuantPolynomial& prev = d >= 2 ? tables[d - 2] : unit;
    ContinuantPolynomial next;
    next.degree = d + 1;
    for (const auto& [key, gamma] : cur.terms) {
      std::vector<std::uint8_t> up = key;
      up.push_back(1);
      next.terms[up] = 2 * gamma;

      std::vector<std::uint8_t> carry = key;
      carry.back() += 1;
      carry.push_back(0);
      const std::vector<std::uint8_t> head(key.begin(), key.end() - 1);
      const auto hit = prev.terms.find(head);
      const std::int64_t value = 2 * gamma - (hit == prev.terms.end() ? 0 : hit->second);
      if (value != 0) next.terms[carry] = value;
    }
    tables.push_back(std::move(next));
  }
  return tables;
}

ContinuantPolynomial gamma_coefficients(std::size_t i, std::size_t cap) {
  return gamma_tables(i, cap).back();
}

}  // namespace spsum
