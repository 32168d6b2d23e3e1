#pragma once

#include <Eigen/Core>

namespace pssv {

// Dense real matrices are the universal carrier for observations, low-rank
// estimates, sparse errors and multipliers. Entries are expected to be finite;
// operations validate this at their boundary and throw std::domain_error on
// NaN/Inf input.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Throws std::domain_error if X contains NaN or Inf. `what` names the
/// offending argument in the message.
void require_finite(const Matrix& X, const char* what);

/// Throws std::invalid_argument if A and B differ in shape.
void require_same_shape(const Matrix& A, const Matrix& B, const char* what);

}  // namespace pssv
