#pragma once

// Independent oracles and random instance generators shared by the tests.
// Nothing here calls into the library's inversion or factorization code.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "spsum/core.hpp"
#include "spsum/dense.hpp"

namespace oracle {

using spsum::Matrix;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

inline Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline Matrix from_eigen(const Eigen::MatrixXd& e) {
  Matrix m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

inline Matrix inverse(const Matrix& m) { return from_eigen(to_eigen(m).fullPivLu().inverse()); }
inline double determinant(const Matrix& m) { return to_eigen(m).fullPivLu().determinant(); }

inline double row_sum_norm(const Matrix& m) {
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += std::abs(m(i, j));
    r = std::max(r, s);
  }
  return r;
}

/// Infinity-norm condition number.
inline double condition(const Matrix& m) { return row_sum_norm(m) * row_sum_norm(inverse(m)); }

inline Matrix product(const Matrix& a, const Matrix& b) {
  return from_eigen(to_eigen(a) * to_eigen(b));
}

/// max |l - r| / max |r|.
inline double rel_diff(const Matrix& l, const Matrix& r) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < l.rows(); ++i)
    for (std::size_t j = 0; j < l.cols(); ++j) {
      num = std::max(num, std::abs(l(i, j) - r(i, j)));
      den = std::max(den, std::abs(r(i, j)));
    }
  return den > 0 ? num / den : num;
}

inline double identity_residual(const Matrix& m, const Matrix& inv) {
  Matrix p = product(m, inv);
  for (std::size_t i = 0; i < p.rows(); ++i) p(i, i) -= 1.0;
  return row_sum_norm(p);
}

/// Entry (i, j) = a_min b_max + c_min by double loop over 1-based generators.
inline Matrix brute_sum(const std::vector<double>& a, const std::vector<double>& b,
                        const std::vector<double>& c) {
  const std::size_t n = a.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t lo = std::min(i, j), hi = std::max(i, j);
      m(i, j) = a[lo] * b[hi] + c[lo];
    }
  return m;
}

inline Matrix dense_tridiagonal(const std::vector<double>& alpha, const std::vector<double>& beta) {
  const std::size_t n = alpha.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = alpha[i];
    if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = -beta[i];
  }
  return m;
}

/// Cyclic Jacobi eigenvalues of a symmetric matrix, ascending.
inline std::vector<double> jacobi_eigenvalues(Matrix a) {
  const std::size_t n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Adaptive Simpson quadrature.
inline double integrate(const std::function<double(double)>& f, double lo, double hi,
                        double tol = 1e-13) {
  std::function<double(double, double, double, double, double, double, int)> step =
      [&](double a, double b, double fa, double fm, double fb, double whole, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - a) / 6 * (fa + 4 * flm + fm);
        const double right = (b - m) / 6 * (fm + 4 * frm + fb);
        if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol)
          return left + right + (left + right - whole) / 15;
        return step(a, m, fa, flm, fm, left, depth - 1) + step(m, b, fm, frm, fb, right, depth - 1);
      };
  const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
  return step(lo, hi, fa, fm, fb, (hi - lo) / 6 * (fa + 4 * fm + fb), 50);
}

/// Polynomials in gaps x1..xi with integer coefficients, expanded literally.
using Poly = std::map<std::vector<int>, std::int64_t>;

inline Poly poly_scale_var(const Poly& p, std::size_t var, int power, std::int64_t coef,
                           std::size_t width) {
  Poly out;
  for (const auto& [k, g] : p) {
    std::vector<int> key = k;
    key.resize(width, 0);
    key[var] += power;
    out[key] += coef * g;
  }
  return out;
}

inline void poly_add(Poly& into, const Poly& p) {
  for (const auto& [k, g] : p) into[k] += g;
}

/// vdot(i) = 2(x_i + x_{i-1}) vdot(i-1) - x_{i-1}^2 vdot(i-2), vdot(0) = 1,
/// vdot(1) = 2 x_1, expanded as polynomials; zero terms dropped.
inline std::vector<Poly> continuant_polynomials(std::size_t max_degree) {
  std::vector<Poly> v(max_degree + 1);
  v[0][{}] = 1;
  v[1][{1}] = 2;
  for (std::size_t i = 2; i <= max_degree; ++i) {
    Poly next = poly_scale_var(v[i - 1], i - 1, 1, 2, i);
    poly_add(next, poly_scale_var(v[i - 1], i - 2, 1, 2, i));
    poly_add(next, poly_scale_var(v[i - 2], i - 2, 2, -1, i));
    for (auto it = next.begin(); it != next.end();) it = it->second == 0 ? next.erase(it) : ++it;
    v[i] = std::move(next);
  }
  return v;
}

/// A random sum A + C with increasing b, gaps in [min_gap, 1], x below b1,
/// |a| in [0.5, 2], c in [-1, 1]. Rejects draws with a condition number above
/// `max_cond` or with near-vanishing factor denominators.
struct RandomSum {
  std::vector<double> a, b, c;
  double x = 0.0, z = 1.0;
  spsum::SpSum sum() const { return spsum::SpSum(a, b, c, x, z); }
  Matrix dense() const { return brute_sum(a, b, c); }
};

inline RandomSum random_sum(std::mt19937_64& rng, std::size_t n, double min_gap = 0.1,
                            double max_cond = 1e6) {
  std::uniform_real_distribution<double> gap(min_gap, 1.0), mag(0.5, 2.0), unit(-1.0, 1.0),
      zd(0.5, 2.0);
  std::bernoulli_distribution coin(0.5);
  for (;;) {
    RandomSum r;
    r.a.resize(n);
    r.b.resize(n);
    r.c.resize(n);
    double pos = unit(rng);
    r.x = pos - gap(rng);
    for (std::size_t i = 0; i < n; ++i) {
      r.b[i] = pos;
      pos += gap(rng);
      r.a[i] = (coin(rng) ? 1 : -1) * mag(rng);
      r.c[i] = unit(rng);
    }
    r.z = zd(rng);
    // Factor denominators a(i) b(i-1) - a(i-1) b(i) + c(i) - c(i-1) away from 0.
    bool ok = std::abs(r.a[0] * r.x + r.c[0]) > 0.05;
    for (std::size_t i = 1; i < n && ok; ++i)
      ok = std::abs(r.a[i] * r.b[i - 1] - r.a[i - 1] * r.b[i] + r.c[i] - r.c[i - 1]) > 0.05;
    if (!ok) continue;
    if (condition(r.dense()) > max_cond) continue;
    return r;
  }
}

/// Random irreducible, strictly diagonally dominant tridiagonal matrix.
struct RandomTridiagonal {
  std::vector<double> alpha, beta;
  spsum::SymTridiagonal t() const { return spsum::SymTridiagonal(alpha, beta); }
  Matrix dense() const { return dense_tridiagonal(alpha, beta); }
};

inline RandomTridiagonal random_tridiagonal(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> off(0.2, 1.0), extra(0.5, 2.0);
  std::bernoulli_distribution coin(0.5);
  RandomTridiagonal r;
  r.beta.resize(n - 1);
  for (auto& b : r.beta) b = (coin(rng) ? 1 : -1) * off(rng);
  r.alpha.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    if (i > 0) s += std::abs(r.beta[i - 1]);
    if (i + 1 < n) s += std::abs(r.beta[i]);
    r.alpha[i] = (coin(rng) ? 1 : -1) * (s + extra(rng));
  }
  return r;
}

}  // namespace oracle
