#include "spsum/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "spsum/errors.hpp"
#include "spsum/inverse.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spsum {

Matrix qr_invert(const Matrix& m, double rel_tol) {
  if (!m.square()) throw InvalidArgument("QR inversion needs a square matrix");
  const std::size_t n = m.rows();
  Matrix r = m;
  Matrix qt = Matrix::identity(n);
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < n; ++i) norm = std::hypot(norm, r(i, k));
    if (norm == 0.0) continue;
    const double alpha = r(k, k) > 0.0 ? -norm : norm;
    double vv = 0.0;
    for (std::size_t i = k; i < n; ++i) {
      v[i] = r(i, k) - (i == k ? alpha : 0.0);
      vv += v[i] * v[i];
    }
    if (vv == 0.0) continue;
    auto reflect = [&](Matrix& a, std::size_t first_col) {
      for (std::size_t j = first_col; j < a.cols(); ++j) {
        double dot = 0.0;
        for (std::size_t i = k; i < n; ++i) dot += v[i] * a(i, j);
        const double f = 2.0 * dot / vv;
        for (std::size_t i = k; i < n; ++i) a(i, j) -= f * v[i];
      }
    };
    reflect(r, k);
    reflect(qt, 0);
    for (std::size_t i = k + 1; i < n; ++i) r(i, k) = 0.0;
  }

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(r(i, i)));
  for (std::size_t i = 0; i < n; ++i)
    if (!(std::abs(r(i, i)) > rel_tol * scale))
      throw SingularMatrix("QR: negligible R diagonal", i + 1);

  Matrix inv(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t ii = n; ii-- > 0;) {
      double s = qt(ii, c);
      for (std::size_t j = ii + 1; j < n; ++j) s -= r(ii, j) * inv(j, c);
      inv(ii, c) = s / r(ii, ii);
    }
  return inv;
}

Matrix cramer3_invert(const Matrix& m, double tol) {
  if (m.rows() != 3 || m.cols() != 3) throw InvalidArgument("Cramer inversion needs a 3x3 matrix");
  auto cof = [&](std::size_t r, std::size_t c) {
    const std::size_t r0 = r == 0 ? 1 : 0, r1 = r == 2 ? 1 : 2;
    const std::size_t c0 = c == 0 ? 1 : 0, c1 = c == 2 ? 1 : 2;
    const double minor = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
    return (r + c) % 2 == 0 ? minor : -minor;
  };
  const double det = m(0, 0) * cof(0, 0) + m(0, 1) * cof(0, 1) + m(0, 2) * cof(0, 2);
  if (!(std::abs(det) > tol)) throw SingularMatrix("Cramer: vanishing determinant");
  Matrix inv(3, 3);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) inv(r, c) = cof(c, r) / det;
  return inv;
}

double mae(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
    throw InvalidArgument("MAE needs equal shapes");
  const auto l = lhs.data();
  const auto r = rhs.data();
  if (l.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < l.size(); ++i) total += std::abs(l[i] - r[i]);
  return total / static_cast<double>(l.size());
}

SpSum det_family_sum(double eps, double x) {
  const std::vector<double> a{1.0, 1.0, 1.0};
  const std::vector<double> b{1.0, 5.0 / 3.0, 3.0};
  const std::vector<double> c{0.0, 1.0, eps - 3.0};
  return SpSum(a, b, c, x, 1.0);
}

Matrix det_family_closed_form(double eps) {
  return Matrix::from_rows({{144.0 / eps - 24.0, 15.0 - 108.0 / eps, 12.0 / eps},
                            {15.0 - 108.0 / eps, 81.0 / eps - 9.0, -9.0 / eps},
                            {12.0 / eps, -9.0 / eps, 1.0 / eps}});
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi > 0.0)) throw InvalidArgument("log spacing needs positive bounds");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double l0 = std::log10(lo), l1 = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

DetFamilyResult det_family_experiment(const std::vector<double>& eps) {
  DetFamilyResult out;
  for (double e : eps) {
    const SpSum s = det_family_sum(e);
    const Matrix exact = det_family_closed_form(e);
    const InversionReport rep = sp_sum_inverse(s, 1);
    if (rep.has_result())
      out.records.push_back({e, "algo", mae(rep.result->unpack().matrix(), exact)});
    else
      out.failures.push_back({e, "algo", rep.message});
    try {
      out.records.push_back({e, "qr", mae(qr_invert(spsum_materialize(s).matrix()), exact)});
    } catch (const Error& err) {
      out.failures.push_back({e, "qr", err.what()});
    }
  }
  return out;
}

SpSum spectrum_sum(double a1, double a2, double a3, double c1, double c2, double c3) {
  const std::vector<double> a{a1, a2, a3};
  const std::vector<double> b{1.0, -1.0, 1.0};
  const std::vector<double> c{c1, c2, c3};
  return SpSum(a, b, c, 0.0, 1.0);
}

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 spectrum_matrix(double a1, double a2, double a3, double c1, double c2, double c3) {
  Mat3 m{};
  m[0][0] = a1 + c1;
  m[0][1] = m[1][0] = -a1 + c1;
  m[0][2] = m[2][0] = a1 + c1;
  m[1][1] = -a2 + c2;
  m[1][2] = m[2][1] = a2 + c2;
  m[2][2] = a3 + c3;
  return m;
}

Mat3 cofactors(const Mat3& m) {
  Mat3 c{};
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t k = 0; k < 3; ++k) {
      const std::size_t r0 = (r + 1) % 3, r1 = (r + 2) % 3;
      const std::size_t k0 = (k + 1) % 3, k1 = (k + 2) % 3;
      c[r][k] = m[r0][k0] * m[r1][k1] - m[r0][k1] * m[r1][k0];
    }
  return c;
}

struct SpectrumSystem {
  double a1, a3, c2, eps;

  double c3(double a2, double c1) const { return eps - a1 - c1 - c2 + a2 - a3; }

  // F1 = sum M_ij^2 - (2 + eps^2), F2 = det M + eps, and their Jacobian in
  // (a2, c1).
  void eval(double a2, double c1, double f[2], double jac[2][2]) const {
    const Mat3 m = spectrum_matrix(a1, a2, a3, c1, c2, c3(a2, c1));
    const Mat3 cof = cofactors(m);
    double sq = 0.0;
    for (const auto& row : m)
      for (double e : row) sq += e * e;
    const double det = m[0][0] * cof[0][0] + m[0][1] * cof[0][1] + m[0][2] * cof[0][2];
    f[0] = sq - (2.0 + eps * eps);
    f[1] = det + eps;
    // dM/da2: -1 at (2,2), +1 at (2,3) and (3,2), +1 at (3,3).
    jac[0][0] = 2.0 * (-m[1][1] + 2.0 * m[1][2] + m[2][2]);
    jac[1][0] = -cof[1][1] + 2.0 * cof[1][2] + cof[2][2];
    // dM/dc1: +1 at (1,1), (1,2), (2,1), (1,3), (3,1), -1 at (3,3).
    jac[0][1] = 2.0 * (m[0][0] + 2.0 * m[0][1] + 2.0 * m[0][2] - m[2][2]);
    jac[1][1] = cof[0][0] + 2.0 * cof[0][1] + 2.0 * cof[0][2] - cof[2][2];
  }
};

constexpr int kNewtonIterations = 60;
constexpr int kStartsPerAxis = 16;
constexpr double kStartBox = 4.0;
constexpr double kResidualTol = 1e-9;
constexpr double kDedupTol = 1e-7;
constexpr std::size_t kMaxSolutions = 6;

}  // namespace

std::vector<SpectrumSolution> spectrum_solve(double a1, double a3, double c2, double eps) {
  const SpectrumSystem sys{a1, a3, c2, eps};
  std::vector<SpectrumSolution> found;
  const double cell = 2.0 * kStartBox / kStartsPerAxis;
  for (int si = 0; si < kStartsPerAxis; ++si)
    for (int sj = 0; sj < kStartsPerAxis; ++sj) {
      double a2 = -kStartBox + (si + 0.5) * cell;
      double c1 = -kStartBox + (sj + 0.5) * cell;
      double f[2], jac[2][2];
      bool diverged = false;
      for (int it = 0; it < kNewtonIterations; ++it) {
        sys.eval(a2, c1, f, jac);
        const double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if (det == 0.0 || !std::isfinite(det)) {
          diverged = true;
          break;
        }
        const double da = (f[0] * jac[1][1] - f[1] * jac[0][1]) / det;
        const double dc = (jac[0][0] * f[1] - jac[1][0] * f[0]) / det;
        a2 -= da;
        c1 -= dc;
        if (!std::isfinite(a2) || !std::isfinite(c1) || std::abs(a2) > 1e8 || std::abs(c1) > 1e8) {
          diverged = true;
          break;
        }
        if (std::abs(da) + std::abs(dc) <= 1e-15 * (1.0 + std::abs(a2) + std::abs(c1))) break;
      }
      if (diverged) continue;
      sys.eval(a2, c1, f, jac);
      if (!(std::abs(f[0]) <= kResidualTol && std::abs(f[1]) <= kResidualTol)) continue;
      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const auto& s) {
        return std::abs(s.a2 - a2) <= kDedupTol && std::abs(s.c1 - c1) <= kDedupTol;
      });
      if (!duplicate) found.push_back({a2, c1, sys.c3(a2, c1)});
    }
  std::sort(found.begin(), found.end(), [](const auto& l, const auto& r) {
    return l.a2 != r.a2 ? l.a2 < r.a2 : l.c1 < r.c1;
  });
  if (found.size() > kMaxSolutions) found.resize(kMaxSolutions);
  return found;
}

SummaryStats summarize(std::vector<double> sample) {
  SummaryStats s;
  s.count = sample.size();
  if (sample.empty()) return s;
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double sum = 0.0;
  for (double v : sample) sum += v;
  s.average = sum / n;
  double ss = 0.0;
  for (double v : sample) ss += (v - s.average) * (v - s.average);
  s.stddev = sample.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  auto rank = [&](double p) {
    const auto k = static_cast<std::size_t>(std::ceil(p * n));
    return sample[std::clamp<std::size_t>(k, 1, sample.size()) - 1];
  };
  s.min = sample.front();
  s.median = rank(0.5);
  s.p99 = rank(0.99);
  s.max = sample.back();
  return s;
}

namespace {

struct CellOutcome {
  std::vector<double> algo;
  std::vector<double> qr;
  std::size_t failures = 0;
};

CellOutcome run_cell(double a1, double a3, double c2, double eps) {
  CellOutcome out;
  for (const SpectrumSolution& sol : spectrum_solve(a1, a3, c2, eps)) {
    const SpSum s = spectrum_sum(a1, sol.a2, a3, sol.c1, c2, sol.c3);
    const Matrix m = spsum_materialize(s).matrix();
    try {
      const Matrix exact = cramer3_invert(m);
      const InversionReport rep = sp_sum_inverse(s, 1);
      if (!rep.has_result()) {
        ++out.failures;
        continue;
      }
      const Matrix qr = qr_invert(m);
      out.algo.push_back(mae(rep.result->unpack().matrix(), exact));
      out.qr.push_back(mae(qr, exact));
    } catch (const Error&) {
      ++out.failures;
    }
  }
  return out;
}

}  // namespace

SpectrumResult spectrum_experiment(double eps, double grid_step, int threads) {
  if (!(grid_step > 0.0) || grid_step > 2.0) throw InvalidArgument("grid step must be in (0, 2]");
  const double steps = 2.0 / grid_step;
  const auto m = static_cast<long long>(std::llround(steps));
  if (std::abs(steps - static_cast<double>(m)) > 1e-9 * steps)
    throw InvalidArgument("grid step must divide [-1, 1]");
  const long long side = m + 1;
  const long long cells = side * side * side;
  auto coord = [&](long long i) { return -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(m); };

  std::vector<CellOutcome> outcomes(static_cast<std::size_t>(cells));
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(nt)
#else
  (void)threads;
#endif
  for (long long cell = 0; cell < cells; ++cell) {
    const long long i1 = cell / (side * side);
    const long long i3 = (cell / side) % side;
    const long long i2 = cell % side;
    outcomes[static_cast<std::size_t>(cell)] = run_cell(coord(i1), coord(i3), coord(i2), eps);
  }

  SpectrumResult r;
  r.epsilon = eps;
  for (const CellOutcome& o : outcomes) {
    r.algo_mae.insert(r.algo_mae.end(), o.algo.begin(), o.algo.end());
    r.qr_mae.insert(r.qr_mae.end(), o.qr.begin(), o.qr.end());
    r.failures += o.failures;
  }
  r.matrices = r.algo_mae.size() + r.failures;
  r.algo = summarize(r.algo_mae);
  r.qr = summarize(r.qr_mae);
  return r;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_det_family_csv(std::ostream& out, const DetFamilyResult& result) {
  out << "epsilon,method,mae\n";
  for (const MaeRecord& r : result.records)
    out << format_double(r.epsilon) << ',' << r.method << ',' << format_double(r.mae) << '\n';
}

void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumResult>& results) {
  out << "epsilon,method,count,avg,std,min,median,p99,max\n";
  for (const SpectrumResult& r : results) {
    const std::pair<const char*, const SummaryStats*> rows[] = {{"algo", &r.algo}, {"qr", &r.qr}};
    for (const auto& [name, s] : rows)
      out << format_double(r.epsilon) << ',' << name << ',' << s->count << ','
          << format_double(s->average) << ',' << format_double(s->stddev) << ','
          << format_double(s->min) << ',' << format_double(s->median) << ','
          << format_double(s->p99) << ',' << format_double(s->max) << '\n';
  }
}

}  // namespace spsum
