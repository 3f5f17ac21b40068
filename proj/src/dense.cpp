#include "spsum/dense.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "spsum/errors.hpp"

namespace spsum {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  Matrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw InvalidArgument("ragged matrix literal");
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw InvalidArgument("matrix product shape mismatch");
  Matrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i)
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const double l = lhs(i, k);
      if (l == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += l * rhs(k, j);
    }
  return out;
}

namespace {

template <typename Op>
Matrix elementwise(const Matrix& lhs, const Matrix& rhs, Op op) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
    throw InvalidArgument("matrix shape mismatch");
  Matrix out(lhs.rows(), lhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i)
    for (std::size_t j = 0; j < lhs.cols(); ++j) out(i, j) = op(lhs(i, j), rhs(i, j));
  return out;
}

}  // namespace

Matrix operator+(const Matrix& lhs, const Matrix& rhs) {
  return elementwise(lhs, rhs, std::plus<>{});
}

Matrix operator-(const Matrix& lhs, const Matrix& rhs) {
  return elementwise(lhs, rhs, std::minus<>{});
}

Matrix operator*(double s, const Matrix& m) {
  Matrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) *= s;
  return out;
}

double max_abs(const Matrix& m) {
  double r = 0.0;
  for (double v : m.data()) r = std::max(r, std::abs(v));
  return r;
}

double norm_inf(const Matrix& m) {
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += std::abs(m(i, j));
    r = std::max(r, s);
  }
  return r;
}

double relative_difference(const Matrix& lhs, const Matrix& rhs) {
  const double scale = max_abs(rhs);
  const double diff = max_abs(lhs - rhs);
  return scale > 0.0 ? diff / scale : diff;
}

namespace {

struct LuDecomposition {
  Matrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
};

LuDecomposition decompose(const Matrix& m) {
  if (!m.square()) throw InvalidArgument("LU requires a square matrix");
  const std::size_t n = m.rows();
  LuDecomposition d{m, std::vector<std::size_t>(n), 1};
  std::iota(d.perm.begin(), d.perm.end(), std::size_t{0});
  Matrix& a = d.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (a(p, k) == 0.0) throw SingularMatrix("zero pivot in LU", k + 1);
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
      std::swap(d.perm[p], d.perm[k]);
      d.sign = -d.sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      a(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return d;
}

std::vector<double> substitute(const LuDecomposition& d, std::span<const double> rhs) {
  const Matrix& a = d.lu;
  const std::size_t n = a.rows();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = rhs[d.perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= a(i, j) * y[j];
    y[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * y[j];
    y[ii] = s / a(ii, ii);
  }
  return y;
}

}  // namespace

Matrix lu_inverse(const Matrix& m) {
  const LuDecomposition d = decompose(m);
  const std::size_t n = m.rows();
  Matrix inv(n, n);
  std::vector<double> e(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    std::fill(e.begin(), e.end(), 0.0);
    e[c] = 1.0;
    const auto col = substitute(d, e);
    for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
  }
  return inv;
}

double lu_determinant(const Matrix& m) {
  LuDecomposition d;
  try {
    d = decompose(m);
  } catch (const SingularMatrix&) {
    return 0.0;
  }
  double det = d.sign;
  for (std::size_t i = 0; i < m.rows(); ++i) det *= d.lu(i, i);
  return det;
}

std::vector<double> lu_solve(const Matrix& m, std::span<const double> rhs) {
  if (rhs.size() != m.rows()) throw InvalidArgument("right-hand side size mismatch");
  return substitute(decompose(m), rhs);
}

}  // namespace spsum
