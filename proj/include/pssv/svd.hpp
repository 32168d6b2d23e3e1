#pragma once

#include "pssv/dense_matrix.hpp"

namespace pssv {

// Thin SVD of an m x n matrix: X = U * sigma.asDiagonal() * V^T with
// l = min(m, n) singular triplets. sigma is non-increasing and non-negative,
// U and V have orthonormal columns. The sign of each (u_i, v_i) pair is not
// pinned down; everything built on top must be invariant to simultaneous
// sign flips.
struct SvdFactors {
  Matrix U;      // m x l
  Vector sigma;  // length l
  Matrix V;      // n x l

  Matrix reconstruct() const { return U * sigma.asDiagonal() * V.transpose(); }
};

/// Thin SVD. Throws std::domain_error on non-finite input and
/// std::runtime_error if the decomposition fails to converge.
SvdFactors svd(const Matrix& X);

/// Singular values only (non-increasing).
Vector singular_values(const Matrix& X);

}  // namespace pssv
