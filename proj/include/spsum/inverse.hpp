#pragma once

// Explicit inverse coefficients of A + C from the continuant sequence vdot,
// with status-code semantics: negative fatal, zero success, positive warning.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spsum/core.hpp"

namespace spsum {

enum class Status : int {
  ok = 0,
  invalid_argument = -2,
  invalid_x = -3,
  degenerate_v1 = -4,
  b_spacing = -16,
  low_continuant = -17,
  overflow = -32,
  warning_unreliable = 18,
};

inline int status_code(Status s) noexcept { return static_cast<int>(s); }
const char* status_name(Status s) noexcept;
inline bool is_fatal(Status s) noexcept { return status_code(s) < 0; }

/// Upper triangle of a symmetric matrix; q(i, j), 1 <= i <= j <= n, lives at
/// offset (2n - i)(i - 1)/2 + j - 1.
class PackedSymmetric {
 public:
  explicit PackedSymmetric(std::size_t n = 0) : n_(n), q_(n * (n + 1) / 2, 0.0) {}

  static constexpr std::size_t offset(std::size_t n, std::size_t i, std::size_t j) noexcept {
    return (2 * n - i) * (i - 1) / 2 + j - 1;
  }

  std::size_t n() const noexcept { return n_; }
  /// 1-based, i <= j.
  double& operator()(std::size_t i, std::size_t j) { return q_[offset(n_, i, j)]; }
  double operator()(std::size_t i, std::size_t j) const { return q_[offset(n_, i, j)]; }
  /// 1-based, either triangle.
  double at(std::size_t i, std::size_t j) const { return i <= j ? (*this)(i, j) : (*this)(j, i); }

  std::span<const double> data() const noexcept { return q_; }
  std::span<double> data() noexcept { return q_; }

  static PackedSymmetric pack(const DenseSymmetric& m);
  DenseSymmetric unpack() const;

 private:
  std::size_t n_;
  std::vector<double> q_;
};

DenseSymmetric unpack(const PackedSymmetric& p);

/// vdot(0..n) with vdot(0) = z, beta(0..n) with beta(0) = 0, and the table
/// pi(i, k) = beta(i) ... beta(k) for 2 <= i <= n, i - 1 <= k <= n, stored at
/// offset (2n + 1 - i)(i - 2)/2 + k - 1.
struct ContinuantState {
  std::size_t n = 0;
  Sequence v;
  Sequence beta;
  std::vector<double> pi;

  static constexpr std::size_t pi_offset(std::size_t n, std::size_t i, std::size_t k) noexcept {
    return (2 * n + 1 - i) * (i - 2) / 2 + k - 1;
  }
  double pi_at(std::size_t i, std::size_t k) const { return pi[pi_offset(n, i, k)]; }
};

struct ContinuantBuild {
  Status status = Status::ok;
  std::string message;
  std::size_t index = 0;
  /// Indices i at which |vdot(i) - beta(i) vdot(i-1)| < tol.
  std::vector<std::size_t> warnings;
  std::optional<ContinuantState> state;
};

/// Runs the gates and recursions in reference order. The state is present
/// iff the status is not fatal.
ContinuantBuild build_continuants(const SpSum& s);

struct InversionReport {
  Status status = Status::ok;
  std::string message;
  std::size_t index = 0;
  std::vector<std::size_t> warnings;
  std::optional<PackedSymmetric> result;
  std::optional<ContinuantState> continuants;

  bool has_result() const noexcept { return result.has_value(); }
};

/// O(n^2) fill, parallel over output columns when OpenMP is available.
/// `threads` <= 0 uses the runtime default.
InversionReport sp_sum_inverse(const SpSum& s, int threads = 0);

/// Literal serial transcription of the reference loops, O(n^3).
InversionReport sp_sum_inverse_reference(const SpSum& s);

}  // namespace spsum
