#include "pssv/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pssv {

namespace {

void require_rank_in_range(Index r, Index lo, Index hi, const char* what) {
  if (r < lo || r > hi) {
    throw std::invalid_argument(std::string(what) + ": rank " + std::to_string(r) +
                                " outside [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
  }
}

}  // namespace

MatrixNorms norms(const Matrix& X) {
  require_finite(X, "norms");
  MatrixNorms out;
  out.nuclear = singular_values(X).sum();
  out.l1 = X.cwiseAbs().sum();
  out.fro = X.norm();
  out.linf = X.size() > 0 ? X.cwiseAbs().maxCoeff() : 0.0;
  return out;
}

double pssv_norm(const Matrix& X, Index p) {
  require_finite(X, "pssv_norm");
  const Index l = std::min(X.rows(), X.cols());
  require_rank_in_range(p, 0, l, "pssv_norm");
  if (p == l) return 0.0;
  const Vector sigma = singular_values(X);
  return sigma.tail(l - p).sum();
}

Matrix soft_threshold(const Matrix& X, double tau) {
  require_finite(X, "soft_threshold");
  if (!(tau >= 0.0)) {
    throw std::invalid_argument("soft_threshold: tau must be >= 0");
  }
  return X.unaryExpr([tau](double x) {
    const double shrunk = std::abs(x) - tau;
    return shrunk > 0.0 ? (x > 0.0 ? shrunk : -shrunk) : 0.0;
  });
}

PsvtResult psvt_from_factors(const SvdFactors& factors, Index target_rank,
                             double tau) {
  const Index l = factors.sigma.size();
  require_rank_in_range(target_rank, 0, l, "psvt");
  if (!(tau >= 0.0)) {
    throw std::invalid_argument("psvt: tau must be >= 0");
  }

  // Top target_rank values pass through; the rest are shrunk toward zero.
  Vector shrunk = factors.sigma;
  for (Index i = target_rank; i < l; ++i) {
    shrunk(i) = std::max(factors.sigma(i) - tau, 0.0);
  }

  // The spectrum stays non-increasing, so zeros form a suffix that can be
  // dropped from the reconstruction.
  Index nnz = l;
  while (nnz > 0 && shrunk(nnz - 1) == 0.0) --nnz;

  PsvtResult out;
  out.sigma = shrunk;
  if (nnz == 0) {
    out.X = Matrix::Zero(factors.U.rows(), factors.V.rows());
  } else {
    out.X = factors.U.leftCols(nnz) * shrunk.head(nnz).asDiagonal() *
            factors.V.leftCols(nnz).transpose();
  }
  return out;
}

PsvtResult psvt_with_spectrum(const Matrix& Y, Index target_rank, double tau) {
  require_finite(Y, "psvt");
  require_rank_in_range(target_rank, 0, std::min(Y.rows(), Y.cols()), "psvt");
  return psvt_from_factors(svd(Y), target_rank, tau);
}

Matrix psvt(const Matrix& Y, Index target_rank, double tau) {
  return psvt_with_spectrum(Y, target_rank, tau).X;
}

Matrix project_rank(const Matrix& X, Index r) {
  require_finite(X, "project_rank");
  require_rank_in_range(r, 1, std::min(X.rows(), X.cols()), "project_rank");
  const SvdFactors f = svd(X);
  return f.U.leftCols(r) * f.sigma.head(r).asDiagonal() *
         f.V.leftCols(r).transpose();
}

double lagrangian_value(const Matrix& A, const Matrix& E, const Matrix& Z,
                        const Matrix& O, Index target_rank, double lambda,
                        double mu) {
  require_same_shape(A, O, "lagrangian_value");
  require_same_shape(E, O, "lagrangian_value");
  require_same_shape(Z, O, "lagrangian_value");
  if (!(mu > 0.0)) {
    throw std::invalid_argument("lagrangian_value: mu must be > 0");
  }
  const Matrix residual = O - A - E;
  return pssv_norm(A, target_rank) + lambda * E.cwiseAbs().sum() +
         (Z.array() * residual.array()).sum() +
         0.5 * mu * residual.squaredNorm();
}

}  // namespace pssv
