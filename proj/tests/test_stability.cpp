#include <sstream>

#include "doctest.h"
#include "spsum/errors.hpp"
#include "spsum/factor.hpp"
#include "spsum/stability.hpp"
#include "support.hpp"

using spsum::Matrix;

namespace {

const Matrix kGolden = Matrix::from_rows({{120, -93, 12}, {-93, 72, -9}, {12, -9, 1}});

double fit_slope(const std::vector<double>& x, const std::vector<double>& y, double* intercept) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  *intercept = (sy - slope * sx) / n;
  return slope;
}

Matrix random_square(std::mt19937_64& rng, std::size_t n, double max_cond) {
  std::uniform_real_distribution<double> u(-1, 1);
  for (;;) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = u(rng);
    if (oracle::condition(m) <= max_cond) return m;
  }
}

}  // namespace

TEST_CASE("qr_invert") {
  CHECK(spsum::max_abs(spsum::qr_invert(Matrix::identity(4)) - Matrix::identity(4)) < 1e-15);
  const Matrix d = Matrix::from_rows({{2, 0}, {0, 4}});
  CHECK(spsum::max_abs(spsum::qr_invert(d) - Matrix::from_rows({{0.5, 0}, {0, 0.25}})) < 1e-16);
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix m = random_square(rng, 8, 1e4);
    CHECK(oracle::rel_diff(spsum::qr_invert(m), oracle::inverse(m)) < 1e-10);
  }
  CHECK_THROWS_AS(spsum::qr_invert(Matrix::from_rows({{1, 2}, {2, 4}})), spsum::SingularMatrix);
  CHECK_THROWS_AS(spsum::qr_invert(Matrix(2, 3)), spsum::InvalidArgument);
}

TEST_CASE("cramer3_invert") {
  CHECK(spsum::max_abs(spsum::cramer3_invert(Matrix::identity(3)) - Matrix::identity(3)) == 0.0);
  const Matrix m = spsum::spsum_materialize(spsum::det_family_sum(1.0)).matrix();
  CHECK(spsum::max_abs(spsum::cramer3_invert(m) - kGolden) < 1e-10);
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix r = random_square(rng, 3, 1e6);
    CHECK(oracle::identity_residual(r, spsum::cramer3_invert(r)) < 1e-12 * oracle::condition(r));
  }
  CHECK_THROWS_AS(spsum::cramer3_invert(Matrix(3, 3)), spsum::SingularMatrix);
  CHECK_THROWS_AS(spsum::cramer3_invert(Matrix::identity(2)), spsum::InvalidArgument);
}

TEST_CASE("mae") {
  const Matrix a = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  CHECK(spsum::mae(a, a) == 0.0);
  Matrix b = a;
  b(1, 2) += 0.9;
  CHECK(spsum::mae(b, a) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK_THROWS_AS(spsum::mae(a, Matrix::identity(2)), spsum::InvalidArgument);
}

TEST_CASE("determinant family") {
  SUBCASE("closed form at eps = 1") {
    CHECK(spsum::max_abs(spsum::det_family_closed_form(1.0) - kGolden) < 1e-13);
  }
  SUBCASE("closed form inverts the family") {
    for (double eps : {1.0, 0.5, 0.25}) {
      const Matrix m = spsum::spsum_materialize(spsum::det_family_sum(eps)).matrix();
      CHECK(oracle::identity_residual(m, spsum::det_family_closed_form(eps)) < 1e-12);
    }
  }
  SUBCASE("determinant of the built matrix at eps = 1e-3") {
    const Matrix m = spsum::spsum_materialize(spsum::det_family_sum(1e-3)).matrix();
    CHECK(oracle::determinant(m) == doctest::Approx(-1e-3 / 9).epsilon(1e-12));
  }
  SUBCASE("determinant of the built matrix against its exact value") {
    // Frozen from exact rational arithmetic on the fl(5/3) input.
    const double want = -0.00011111111111000107;
    const Matrix m = spsum::spsum_materialize(spsum::det_family_sum(1e-3)).matrix();
    CHECK(std::abs(oracle::determinant(m) - want) <=
          10 * oracle::condition(m) * oracle::kEps * std::abs(want));
  }
  SUBCASE("QR residual for eps >= 1e-6") {
    for (double eps : spsum::log_spaced(1e-6, 1.0, 13)) {
      const Matrix m = spsum::spsum_materialize(spsum::det_family_sum(eps)).matrix();
      CHECK(oracle::identity_residual(m, spsum::qr_invert(m)) <=
            1e2 * oracle::condition(m) * oracle::kEps);
    }
  }
}

TEST_CASE("log_spaced") {
  const auto v = spsum::log_spaced(1e-6, 0.1, 30);
  REQUIRE(v.size() == 30);
  CHECK(v.front() == doctest::Approx(1e-6).epsilon(1e-14));
  CHECK(v.back() == doctest::Approx(0.1).epsilon(1e-14));
  for (std::size_t i = 1; i < v.size(); ++i)
    CHECK(v[i] / v[i - 1] == doctest::Approx(v[1] / v[0]).epsilon(1e-12));
  CHECK_THROWS_AS(spsum::log_spaced(0.0, 1.0, 3), spsum::InvalidArgument);
}

TEST_CASE("det_family_experiment") {
  const auto eps = spsum::log_spaced(1e-6, 0.1, 30);
  const auto result = spsum::det_family_experiment(eps);
  CHECK(result.failures.empty());
  REQUIRE(result.records.size() == 60);
  for (const std::string method : {"algo", "qr"}) {
    std::vector<double> x, y;
    for (const auto& r : result.records) {
      if (r.method != method) continue;
      CHECK(r.mae >= 0.0);
      CHECK(std::isfinite(r.mae));
      x.push_back(std::log(r.epsilon));
      y.push_back(std::log(std::max(r.mae, 1e-300)));
    }
    REQUIRE(x.size() == 30);
    double intercept = 0.0;
    const double slope = fit_slope(x, y, &intercept);
    MESSAGE(method << " log-log slope " << slope);
    // Nondecreasing in 1/eps, every point within a factor 100 of the fit.
    CHECK(slope <= 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
      CHECK(std::abs(y[i] - (intercept + slope * x[i])) <= std::log(100.0));
  }
}

TEST_CASE("spectrum_solve") {
  const double eps = 1e-4;
  std::size_t total = 0;
  for (double a1 : {-0.8, 0.3, 1.0})
    for (double a3 : {-0.5, 0.6})
      for (double c2 : {-1.0, 0.2}) {
        const auto sols = spsum::spectrum_solve(a1, a3, c2, eps);
        CHECK(sols.size() <= 6);
        total += sols.size();
        for (const auto& s : sols) {
          const Matrix m =
              spsum::spsum_materialize(spsum::spectrum_sum(a1, s.a2, a3, s.c1, c2, s.c3)).matrix();
          const double tr = m(0, 0) + m(1, 1) + m(2, 2);
          const double e2 = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                            m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
          const double det = oracle::determinant(m);
          // Characteristic polynomial (1, -tr, e2, -det) against (1, -eps, -1, eps).
          CHECK(std::abs(-tr + eps) <= 1e-9);
          CHECK(std::abs(e2 + 1.0) <= 1e-8);
          CHECK(std::abs(det + eps) <= 1e-8);
          const auto ev = oracle::jacobi_eigenvalues(m);
          CHECK(std::abs(ev[0] + 1.0) <= 1e-7);
          CHECK(std::abs(ev[1] - eps) <= 1e-7);
          CHECK(std::abs(ev[2] - 1.0) <= 1e-7);
        }
        for (std::size_t i = 1; i < sols.size(); ++i)
          CHECK(std::make_pair(sols[i - 1].a2, sols[i - 1].c1) <
                std::make_pair(sols[i].a2, sols[i].c1));
      }
  CHECK(total > 0);
}

TEST_CASE("summarize") {
  SUBCASE("known sample") {
    const auto s = spsum::summarize({4, 1, 3, 2, 5});
    CHECK(s.count == 5);
    CHECK(s.average == 3.0);
    CHECK(s.stddev == doctest::Approx(std::sqrt(2.5)));
    CHECK(s.min == 1.0);
    CHECK(s.median == 3.0);
    CHECK(s.p99 == 5.0);
    CHECK(s.max == 5.0);
  }
  SUBCASE("nearest rank") {
    std::vector<double> v(200);
    for (std::size_t i = 0; i < 200; ++i) v[i] = static_cast<double>(200 - i);
    const auto s = spsum::summarize(v);
    CHECK(s.median == 100.0);
    CHECK(s.p99 == 198.0);
  }
  SUBCASE("ordering on random samples") {
    std::mt19937_64 rng(63);
    std::lognormal_distribution<double> ln(-20, 3);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> v(1 + trial * 37);
      for (auto& x : v) x = ln(rng);
      const auto s = spsum::summarize(v);
      CHECK(s.min <= s.median);
      CHECK(s.median <= s.p99);
      CHECK(s.p99 <= s.max);
    }
  }
  SUBCASE("a method compared with itself") {
    std::vector<double> zeros;
    for (double a1 : {-0.8, 0.3, 1.0})
      for (double a3 : {-0.5, 0.6})
        for (double c2 : {-1.0, 0.2})
          for (const auto& sol : spsum::spectrum_solve(a1, a3, c2, 1e-4)) {
            const Matrix m =
                spsum::spsum_materialize(spsum::spectrum_sum(a1, sol.a2, a3, sol.c1, c2, sol.c3))
                    .matrix();
            const Matrix c = spsum::cramer3_invert(m);
            zeros.push_back(spsum::mae(c, c));
          }
    REQUIRE_FALSE(zeros.empty());
    const auto s = spsum::summarize(zeros);
    CHECK(s.average == 0.0);
    CHECK(s.stddev == 0.0);
    CHECK(s.max == 0.0);
  }
}

TEST_CASE("spectrum_experiment") {
  const auto one = spsum::spectrum_experiment(1e-4, 0.5, 1);
  const auto many = spsum::spectrum_experiment(1e-4, 0.5, 4);
  CHECK(one.matrices > 0);
  CHECK(one.algo.count + one.failures == one.matrices);
  CHECK(one.algo_mae.size() == one.algo.count);
  CHECK(one.algo.min <= one.algo.median);
  CHECK(one.algo.median <= one.algo.p99);
  CHECK(one.algo.p99 <= one.algo.max);
  CHECK(one.qr.min <= one.qr.median);
  CHECK(one.qr.p99 <= one.qr.max);
  std::ostringstream a, b;
  spsum::write_spectrum_csv(a, {one});
  spsum::write_spectrum_csv(b, {many});
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("epsilon,method,count,avg,std,min,median,p99,max\n", 0) == 0);
  CHECK_THROWS_AS(spsum::spectrum_experiment(1e-4, 0.3), spsum::InvalidArgument);
}

TEST_CASE("CSV formatting") {
  CHECK(spsum::format_double(0.1) == "0.10000000000000001");
  CHECK(spsum::format_double(-93) == "-93");
  spsum::DetFamilyResult r;
  r.records.push_back({0.5, "algo", 0.25});
  std::ostringstream out;
  spsum::write_det_family_csv(out, r);
  CHECK(out.str() == "epsilon,method,mae\n0.5,algo,0.25\n");
}
