#include "pssv/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pssv/svd.hpp"

namespace pssv {

double nrmse(const Matrix& reference, const Matrix& estimate) {
  require_same_shape(reference, estimate, "nrmse");
  require_finite(reference, "nrmse reference");
  require_finite(estimate, "nrmse estimate");
  const double ref_norm = reference.norm();
  if (ref_norm == 0.0) {
    throw std::invalid_argument("nrmse: reference matrix is zero");
  }
  return (reference - estimate).norm() / ref_norm;
}

double rank_deficiency_ratio(const Matrix& A, Index target_rank) {
  require_finite(A, "rank_deficiency_ratio");
  if (target_rank < 1 || target_rank > std::min(A.rows(), A.cols())) {
    throw std::invalid_argument("rank_deficiency_ratio: target rank out of range");
  }
  if (A.norm() == 0.0) {
    throw std::invalid_argument("rank_deficiency_ratio: zero matrix");
  }
  const Vector sigma = singular_values(A);
  return sigma(target_rank - 1) / sigma(0);
}

double psnr(const Matrix& reference, const Matrix& recovered, double peak) {
  require_same_shape(reference, recovered, "psnr");
  if (!(peak > 0.0)) {
    throw std::invalid_argument("psnr: peak must be > 0");
  }
  const double mse =
      (reference - recovered).squaredNorm() / static_cast<double>(reference.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

}  // namespace pssv
