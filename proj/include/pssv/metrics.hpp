#pragma once

#include "pssv/dense_matrix.hpp"

namespace pssv {

// A recovery counts as successful when NRMSE < 0.01. Experiments may
// override this explicitly; nothing changes it silently.
inline constexpr double kSuccessNrmseThreshold = 0.01;

struct TrialOutcome {
  double nrmse = 0.0;
  bool success = false;
  double deficiency_ratio = 0.0;  // sigma_N / sigma_1 of the recovered matrix
  int iterations = 0;
  double wall_time_s = 0.0;  // recorded, never asserted
};

/// ||reference - estimate||_F / ||reference||_F. Throws on zero reference.
double nrmse(const Matrix& reference, const Matrix& estimate);

/// sigma_N(A) / sigma_1(A); values below 0.01 flag a matrix whose numerical
/// rank fell below the target. Throws on zero A or N out of [1, min(m,n)].
double rank_deficiency_ratio(const Matrix& A, Index target_rank);

/// 10 * log10(peak^2 / MSE) in dB. Identical inputs give +infinity.
double psnr(const Matrix& reference, const Matrix& recovered, double peak);

}  // namespace pssv
