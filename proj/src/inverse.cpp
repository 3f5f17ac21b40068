#include "spsum/inverse.hpp"

#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spsum {

const char* status_name(Status s) noexcept {
  switch (s) {
    case Status::ok: return "ok";
    case Status::invalid_argument: return "invalid_argument";
    case Status::invalid_x: return "invalid_x";
    case Status::degenerate_v1: return "degenerate_v1";
    case Status::b_spacing: return "b_spacing";
    case Status::low_continuant: return "low_continuant";
    case Status::overflow: return "overflow";
    case Status::warning_unreliable: return "warning_unreliable";
  }
  return "unknown";
}

PackedSymmetric PackedSymmetric::pack(const DenseSymmetric& m) {
  PackedSymmetric p(m.n());
  for (std::size_t i = 1; i <= m.n(); ++i)
    for (std::size_t j = i; j <= m.n(); ++j) p(i, j) = m(i - 1, j - 1);
  return p;
}

DenseSymmetric PackedSymmetric::unpack() const {
  DenseSymmetric m(n_);
  for (std::size_t i = 1; i <= n_; ++i)
    for (std::size_t j = i; j <= n_; ++j) m.set(i - 1, j - 1, (*this)(i, j));
  return m;
}

DenseSymmetric unpack(const PackedSymmetric& p) { return p.unpack(); }

namespace {

double square(double h) { return h * h; }

ContinuantBuild fail(Status status, std::string message, std::size_t index = 0) {
  ContinuantBuild r;
  r.status = status;
  r.message = std::move(message);
  r.index = index;
  return r;
}

}  // namespace

ContinuantBuild build_continuants(const SpSum& s) {
  const std::size_t n = s.n();
  const double tol = s.tol();
  const double z = s.z();
  if (n < 2 || !(std::isfinite(tol) && std::isfinite(s.x()) && std::isfinite(z)) || tol <= 0.0 ||
      std::abs(z) < tol)
    return fail(Status::invalid_argument,
                "invalid n = " + std::to_string(n) + ", tol, x or z");
  for (std::size_t i = 1; i <= n; ++i)
    if (!std::isfinite(s.a(i)) || !std::isfinite(s.b(i)) || !std::isfinite(s.c(i)))
      return fail(Status::invalid_argument, "non-finite generator at index " + std::to_string(i),
                  i);
  if (std::abs(s.b(1) - s.b(0)) < tol)
    return fail(Status::invalid_x, "invalid x = b(0): |b(1) - x| < tol", 1);

  const Sequence& a = s.a_seq();
  const Sequence& b = s.b_seq();
  const Sequence& c = s.c_seq();
  ContinuantState st{n, Sequence(n + 1, 0.0), Sequence(n + 1, 0.0),
                     std::vector<double>(n * (n + 1) / 2 - 1, 0.0)};
  Sequence& v = st.v;
  Sequence& beta = st.beta;
  ContinuantBuild out;

  v[0] = z;
  v[1] = (v[0] * (a[1] * b[1] + c[1])) / square(b[1] - b[0]);
  if (std::abs(v[1]) < tol)
    return fail(Status::degenerate_v1, "invalid x, z, a(1), b(1) or c(1): |vdot(1)| < tol", 1);
  beta[1] = (a[1] * b[0] + c[1]) / square(b[1] - b[0]);

  for (std::size_t i = 2; i <= n; ++i) {
    if (std::abs(b[i] - b[i - 1]) < tol || std::abs(b[i - 1] - b[i - 2]) < tol)
      return fail(Status::b_spacing,
                  "consecutive b values too close around index " + std::to_string(i), i);
    v[i] = ((a[i] * b[i] - 2 * a[i - 1] * b[i] + a[i - 1] * b[i - 1] + c[i] - c[i - 1]) /
                square(b[i] - b[i - 1]) -
            (a[i - 1] * b[i - 1] - 2 * a[i - 1] * b[i - 2] + a[i - 2] * b[i - 2] -
             (c[i - 1] - c[i - 2])) /
                square(b[i - 1] - b[i - 2])) *
               v[i - 1] -
           square((a[i - 1] * b[i - 2] - a[i - 2] * b[i - 1] + c[i - 1] - c[i - 2]) /
                  square(b[i - 1] - b[i - 2])) *
               v[i - 2];
    if (std::abs(v[i]) < tol)
      return fail(Status::low_continuant, "low continuant: |vdot(" + std::to_string(i) + ")| < tol",
                  i);
    beta[i] = (a[i] * b[i - 1] - a[i - 1] * b[i] - c[i - 1] + c[i]) / square(b[i] - b[i - 1]);
    if (std::abs(v[i] - beta[i] * v[i - 1]) < tol) {
      if (out.warnings.empty()) {
        out.index = i;
        out.message = "continuant vdot(" + std::to_string(i) + ") close to beta(" +
                      std::to_string(i) + ") vdot(" + std::to_string(i - 1) +
                      "): unreliable results";
      }
      out.warnings.push_back(i);
      out.status = Status::warning_unreliable;
    }
    st.pi[ContinuantState::pi_offset(n, i, i)] = beta[i];
    st.pi[ContinuantState::pi_offset(n, i, i - 1)] = 1.0;
  }
  for (std::size_t i = 2; i <= n; ++i)
    for (std::size_t k = i + 1; k <= n; ++k)
      st.pi[ContinuantState::pi_offset(n, i, k)] =
          st.pi[ContinuantState::pi_offset(n, i, k - 1)] * beta[k];

  for (std::size_t i = 0; i <= n; ++i)
    if (!std::isfinite(v[i]) || !std::isfinite(beta[i]))
      return fail(Status::overflow, "non-finite continuant at index " + std::to_string(i), i);
  for (double p : st.pi)
    if (!std::isfinite(p)) return fail(Status::overflow, "beta products overflow");

  out.state = std::move(st);
  return out;
}

namespace {

InversionReport start_report(ContinuantBuild&& build) {
  InversionReport r;
  r.status = build.status;
  r.message = std::move(build.message);
  r.index = build.index;
  r.warnings = std::move(build.warnings);
  r.continuants = std::move(build.state);
  return r;
}

}  // namespace

InversionReport sp_sum_inverse(const SpSum& s, int threads) {
  InversionReport report = start_report(build_continuants(s));
  if (!report.continuants) return report;

  const ContinuantState& st = *report.continuants;
  const std::size_t n = st.n;
  const Sequence& v = st.v;
  const Sequence& beta = st.beta;
  const Sequence& b = s.b_seq();
  auto pi = [&](std::size_t i, std::size_t k) { return st.pi_at(i, k); };

  // p(i): factor shared by row i of the sum terms, 1 <= i <= n-1.
  // r(j): boundary factor of column j, 1 <= j <= n-1.
  Sequence p(n + 1, 0.0), r(n + 1, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    p[i] = (v[i + 1] - beta[i + 1] * v[i]) / (b[i + 1] - b[i]) -
           (beta[i + 1] * (v[i] - beta[i] * v[i - 1])) / (b[i] - b[i - 1]);
    r[i] = (v[i] - beta[i] * v[i - 1]) / (b[i] - b[i - 1]) + v[i] / (b[i + 1] - b[i]);
  }

  // tail(j) = sum_{k=j+2}^{n} pi(j+2, k-1)^2 / (v(k) v(k-1)); pi(i+2, k-1)
  // splits as pi(i+2, j+1) pi(j+2, k-1), so one tail serves column j.
  Sequence tail(n + 1, 0.0);
  PackedSymmetric q(n);
  const long long rows = static_cast<long long>(n);
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#else
  (void)threads;
#endif
#pragma omp parallel num_threads(nt)
  {
#pragma omp for schedule(dynamic, 8)
    for (long long jj = 1; jj <= rows; ++jj) {
      const std::size_t j = static_cast<std::size_t>(jj);
      double t = 0.0;
      if (j + 1 < n)
        for (std::size_t k = j + 2; k <= n; ++k) t += square(pi(j + 2, k - 1)) / (v[k] * v[k - 1]);
      tail[j] = t;
    }
    // Row-wise sweep: pi(i+2, .) and q(i, .) are both contiguous in j.
#pragma omp for schedule(dynamic, 8)
    for (long long ii = 1; ii <= rows; ++ii) {
      const std::size_t i = static_cast<std::size_t>(ii);
      double d = 0.0;
      if (i + 1 < n) d = tail[i] * square(p[i]);
      d += v[i - 1] / (square(b[i] - b[i - 1]) * v[i]);
      if (i < n) d += square(r[i]) / (v[i + 1] * v[i]);
      q(i, i) = d;

      for (std::size_t j = i + 1; j <= n; ++j) {
        double e = 0.0;
        if (j + 1 < n) e = pi(i + 2, j + 1) * tail[j] * (p[i] * p[j]);
        if (j < n) e -= (p[i] * r[j] * pi(i + 2, j)) / (v[j + 1] * v[j]);
        if (i + 1 < j)
          e += (p[i] * pi(i + 2, j - 1)) / ((b[j] - b[j - 1]) * v[j]);
        else
          e -= r[j - 1] / ((b[j] - b[j - 1]) * v[j]);
        q(i, j) = e;
      }
    }
  }
  report.result = std::move(q);
  return report;
}

InversionReport sp_sum_inverse_reference(const SpSum& s) {
  InversionReport report = start_report(build_continuants(s));
  if (!report.continuants) return report;

  const ContinuantState& st = *report.continuants;
  const std::size_t n = st.n;
  const Sequence& v = st.v;
  const Sequence& beta = st.beta;
  const Sequence& b = s.b_seq();
  auto pi = [&](std::size_t i, std::size_t k) { return st.pi_at(i, k); };
  PackedSymmetric Q(n);
  auto q = [&](std::size_t i, std::size_t j) -> double& { return Q(i, j); };

  for (std::size_t j = 1; j <= n; j++) {
    q(j, j) = 0.;
    if (j + 1 < n) {
      for (std::size_t k = j + 2; k <= n; k++) q(j, j) += square(pi(j + 2, k - 1)) / (v[k] * v[k - 1]);
      q(j, j) *= square((v[j + 1] - beta[j + 1] * v[j]) / (b[j + 1] - b[j]) -
                        (beta[j + 1] * (v[j] - beta[j] * v[j - 1])) / (b[j] - b[j - 1]));
    }
    q(j, j) += v[j - 1] / (square(b[j] - b[j - 1]) * v[j]);
    if (j < n)
      q(j, j) += square((v[j] - beta[j] * v[j - 1]) / (b[j] - b[j - 1]) + v[j] / (b[j + 1] - b[j])) /
                 (v[j + 1] * v[j]);
    for (std::size_t i = 1; i + 1 <= j; i++) {
      q(i, j) = 0.;
      if (j + 1 < n) {
        for (std::size_t k = j + 2; k <= n; k++)
          q(i, j) += (pi(i + 2, k - 1) * pi(j + 2, k - 1)) / (v[k] * v[k - 1]);
        q(i, j) *= ((v[i + 1] - beta[i + 1] * v[i]) / (b[i + 1] - b[i]) -
                    (beta[i + 1] * (v[i] - beta[i] * v[i - 1])) / (b[i] - b[i - 1])) *
                   ((v[j + 1] - beta[j + 1] * v[j]) / (b[j + 1] - b[j]) -
                    (beta[j + 1] * (v[j] - beta[j] * v[j - 1])) / (b[j] - b[j - 1]));
      }
      if (j < n)
        q(i, j) -= (((v[i + 1] - beta[i + 1] * v[i]) / (b[i + 1] - b[i]) -
                     (beta[i + 1] * (v[i] - beta[i] * v[i - 1])) / (b[i] - b[i - 1])) *
                    ((v[j] - beta[j] * v[j - 1]) / (b[j] - b[j - 1]) + v[j] / (b[j + 1] - b[j])) *
                    pi(i + 2, j)) /
                   (v[j + 1] * v[j]);
      if (i + 1 < j)
        q(i, j) += (((v[i + 1] - beta[i + 1] * v[i]) / (b[i + 1] - b[i]) -
                     (beta[i + 1] * (v[i] - beta[i] * v[i - 1])) / (b[i] - b[i - 1])) *
                    pi(i + 2, j - 1)) /
                   ((b[j] - b[j - 1]) * v[j]);
      else
        q(i, j) -= ((v[j - 1] - beta[j - 1] * v[j - 2]) / (b[j - 1] - b[j - 2]) +
                    v[j - 1] / (b[j] - b[j - 1])) /
                   ((b[j] - b[j - 1]) * v[j]);
    }
  }
  report.result = std::move(Q);
  return report;
}

}  // namespace spsum
