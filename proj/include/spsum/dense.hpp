#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace spsum {

/// Row-major dense matrix with 0-based (row, col) access.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> data() const noexcept { return data_; }

  Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Matrix operator+(const Matrix& lhs, const Matrix& rhs);
Matrix operator-(const Matrix& lhs, const Matrix& rhs);
Matrix operator*(double s, const Matrix& m);

/// Largest absolute entry.
double max_abs(const Matrix& m);
/// Infinity norm (maximum absolute row sum).
double norm_inf(const Matrix& m);
/// max|lhs - rhs| / max|rhs|; plain max|lhs - rhs| when rhs is zero.
double relative_difference(const Matrix& lhs, const Matrix& rhs);

/// Gaussian elimination with partial pivoting. Throws SingularMatrix when a
/// pivot is exactly zero.
Matrix lu_inverse(const Matrix& m);
double lu_determinant(const Matrix& m);
std::vector<double> lu_solve(const Matrix& m, std::span<const double> rhs);

}  // namespace spsum
