// Shared helpers for the test binaries. The reference solver here is a
// deliberately separate implementation used to cross-check the library; it
// must not call into pssv::solve_rpca or pssv::psvt.
#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "pssv/dense_matrix.hpp"
#include "pssv/synth.hpp"

namespace test_support {

inline pssv::Matrix random_matrix(pssv::Index m, pssv::Index n,
                                  pssv::PrngStream& stream) {
  pssv::Matrix X(m, n);
  for (pssv::Index j = 0; j < n; ++j) {
    for (pssv::Index i = 0; i < m; ++i) X(i, j) = stream.uniform_signed();
  }
  return X;
}

// Classical nuclear-norm robust PCA via inexact ALM with plain singular
// value thresholding, written directly from the update equations on top of
// JacobiSVD. Mirrors the default initialization (zero primal variables,
// dual-scaled multiplier, mu_0 = 1.25 / sigma_1).
inline pssv::Matrix svt_reference_rpca(const pssv::Matrix& O, double rho = 1.5,
                                       double tol = 1e-7, int max_iter = 1000) {
  using pssv::Index;
  using pssv::Matrix;
  const Index m = O.rows();
  const Index n = O.cols();
  const double lambda = 1.0 / std::sqrt(static_cast<double>(std::max(m, n)));
  const double norm_O = O.norm();

  Eigen::JacobiSVD<Matrix> top(O);
  const double sigma1 = top.singularValues()(0);
  double mu = 1.25 / sigma1;
  Matrix Z = O / std::max(sigma1, O.cwiseAbs().maxCoeff() / lambda);
  Matrix A = Matrix::Zero(m, n);
  Matrix E = Matrix::Zero(m, n);

  for (int k = 0; k < max_iter; ++k) {
    Eigen::JacobiSVD<Matrix> svd(O - E + Z / mu,
                                 Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd s = svd.singularValues();
    for (Index i = 0; i < s.size(); ++i) s(i) = std::max(s(i) - 1.0 / mu, 0.0);
    A = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();

    const Matrix T = O - A + Z / mu;
    const double threshold = lambda / mu;
    E = T.unaryExpr([threshold](double x) {
      const double shrunk = std::abs(x) - threshold;
      return shrunk > 0.0 ? (x > 0.0 ? shrunk : -shrunk) : 0.0;
    });

    const Matrix residual = O - A - E;
    Z += mu * residual;
    if (residual.norm() / norm_O < tol) break;
    mu *= rho;
  }
  return A;
}

// Smooth synthetic grayscale scene in [0, 255]: a superposition of separable
// intensity profiles with slowly decaying coefficients, so the spectrum is
// dominated by the leading ~20 singular values the way natural images are.
inline pssv::Matrix synth_image(pssv::Index rows, pssv::Index cols) {
  using pssv::Index;
  pssv::Matrix img = pssv::Matrix::Zero(rows, cols);
  constexpr int kTerms = 60;
  for (int t = 1; t <= kTerms; ++t) {
    Eigen::VectorXd u(rows), v(cols);
    for (Index i = 0; i < rows; ++i) {
      u(i) = std::sin(0.35 * t * 3.14159265358979 * (i + 1.0) / rows + 1.7 * t) +
             0.4 * std::cos(0.11 * t * t * (i + 3.0) / rows);
    }
    for (Index j = 0; j < cols; ++j) {
      v(j) = std::cos(0.27 * t * 3.14159265358979 * (j + 1.0) / cols + 0.9 * t) +
             0.4 * std::sin(0.07 * t * t * (j + 5.0) / cols);
    }
    img += std::pow(static_cast<double>(t), -1.0) * u * v.transpose();
  }
  const double lo = img.minCoeff();
  const double hi = img.maxCoeff();
  img = 255.0 * (img.array() - lo) / (hi - lo);
  return img.array().round();
}

}  // namespace test_support
