#pragma once

// Accuracy experiments on ill-conditioned 3x3 sums against Householder QR and
// Cramer's rule, with summary statistics and CSV output.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "spsum/core.hpp"
#include "spsum/dense.hpp"

namespace spsum {

/// Householder QR without pivoting, then back substitution per column.
/// Throws SingularMatrix when |R(i,i)| <= rel_tol * max_k |R(k,k)|.
Matrix qr_invert(const Matrix& m, double rel_tol = std::numeric_limits<double>::epsilon());

/// Adjugate over determinant. Throws SingularMatrix when |det| <= tol.
Matrix cramer3_invert(const Matrix& m, double tol = 0.0);

/// Mean absolute entrywise difference.
double mae(const Matrix& lhs, const Matrix& rhs);

/// a = (1, 1, 1), b = (1, 5/3, 3), c = (0, 1, eps - 3), x = 0, z = 1; the
/// materialized matrix has determinant -eps/9.
SpSum det_family_sum(double eps, double x = 0.0);
Matrix det_family_closed_form(double eps);

std::vector<double> log_spaced(double lo, double hi, std::size_t count);

struct MaeRecord {
  double epsilon;
  std::string method;  // "algo" or "qr"
  double mae;
};

struct ExperimentFailure {
  double epsilon;
  std::string method;
  std::string message;
};

struct DetFamilyResult {
  std::vector<MaeRecord> records;
  std::vector<ExperimentFailure> failures;
};

/// MAE of the explicit inverse and of QR against the closed form, per eps.
DetFamilyResult det_family_experiment(const std::vector<double>& eps);

/// M = A + C with b = (1, -1, 1); x = 0, z = 1.
SpSum spectrum_sum(double a1, double a2, double a3, double c1, double c2, double c3);

struct SpectrumSolution {
  double a2;
  double c1;
  double c3;
};

/// Real solutions with spectrum {-1, eps, 1}: c3 eliminated through the
/// trace, (a2, c1) by multi-start Newton on 16 x 16 cell centres of [-4, 4]^2.
/// At most 6, deduplicated at 1e-7, sorted by (a2, c1).
std::vector<SpectrumSolution> spectrum_solve(double a1, double a3, double c2, double eps);

struct SummaryStats {
  std::size_t count = 0;
  double average = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double median = 0.0;
  double p99 = 0.0;
  double max = 0.0;
};

/// Sample statistics; median and p99 by nearest rank on the sorted sample.
SummaryStats summarize(std::vector<double> sample);

struct SpectrumResult {
  double epsilon = 0.0;
  std::size_t matrices = 0;
  std::size_t failures = 0;
  std::vector<double> algo_mae;  // in grid order
  std::vector<double> qr_mae;
  SummaryStats algo;
  SummaryStats qr;
};

/// Sweeps a1, a3, c2 over [-1, 1] with the given step. Cells are processed in
/// parallel and concatenated in grid order, so output is independent of the
/// thread count. `threads` <= 0 uses the runtime default.
SpectrumResult spectrum_experiment(double eps, double grid_step, int threads = 0);

/// `epsilon,method,mae`
void write_det_family_csv(std::ostream& out, const DetFamilyResult& result);
/// `epsilon,method,count,avg,std,min,median,p99,max`
void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumResult>& results);

/// 17 significant digits.
std::string format_double(double v);

}  // namespace spsum
