#pragma once

#include "pssv/dense_matrix.hpp"
#include "pssv/svd.hpp"

namespace pssv {

struct MatrixNorms {
  double nuclear;  // sum of singular values
  double l1;       // sum of |x_ij|
  double fro;      // Frobenius norm
  double linf;     // max |x_ij|
};

MatrixNorms norms(const Matrix& X);

/// Partial sum of singular values beyond rank p:
/// sum_{i=p+1}^{min(m,n)} sigma_i(X). p = 0 gives the nuclear norm,
/// p = min(m,n) gives 0.
double pssv_norm(const Matrix& X, Index p);

/// Element-wise shrinkage sign(x) * max(|x| - tau, 0). Minimizes
/// 0.5 * ||X - Y||_F^2 + tau * ||X||_1 entry by entry.
Matrix soft_threshold(const Matrix& X, double tau);

struct PsvtResult {
  Matrix X;      // the thresholded matrix
  Vector sigma;  // its singular values (non-increasing, length min(m,n))
};

/// Partial singular value thresholding: keeps the top `target_rank` singular
/// values of Y exactly and soft-thresholds the rest by tau, reusing Y's
/// singular vectors. Minimizes 0.5 * ||X - Y||_F^2 + tau * ||X||_{p=N}.
/// target_rank = 0 reduces to classical singular value thresholding.
Matrix psvt(const Matrix& Y, Index target_rank, double tau);

/// Same as psvt() but also returns the spectrum of the result, which the
/// thresholding rule yields for free. Solvers use this to track objective
/// values without an extra SVD.
PsvtResult psvt_with_spectrum(const Matrix& Y, Index target_rank, double tau);

/// psvt applied to precomputed factors. Exposed so the sign-ambiguity
/// invariance of the operator can be exercised directly.
PsvtResult psvt_from_factors(const SvdFactors& factors, Index target_rank,
                             double tau);

/// Best rank-r approximation U_{1:r} diag(sigma_{1:r}) V_{1:r}^T (m x n).
Matrix project_rank(const Matrix& X, Index r);

/// Augmented Lagrangian of the sparse + low-rank decomposition:
/// ||A||_{p=N} + lambda ||E||_1 + <Z, O-A-E> + (mu/2) ||O-A-E||_F^2.
double lagrangian_value(const Matrix& A, const Matrix& E, const Matrix& Z,
                        const Matrix& O, Index target_rank, double lambda,
                        double mu);

}  // namespace pssv
