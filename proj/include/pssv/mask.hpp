#pragma once

#include <utility>
#include <vector>

#include "pssv/dense_matrix.hpp"

namespace pssv {

// Index set Omega of observed entries for matrix completion. Indices are
// 0-based (row, col) pairs, unique and in bounds.
struct ObservationMask {
  Index rows = 0;
  Index cols = 0;
  std::vector<std::pair<Index, Index>> observed;

  bool empty() const { return observed.empty(); }

  /// P_Omega(X): observed entries of X, zeros elsewhere.
  Matrix apply(const Matrix& X) const;

  /// Copies the observed entries of `source` into `target` in place.
  void overwrite_observed(Matrix& target, const Matrix& source) const;

  /// 0/1 matrix with ones at observed positions.
  Matrix indicator() const;

  /// Builds a mask from a 0/1 indicator; entries > 0.5 count as observed.
  static ObservationMask from_indicator(const Matrix& indicator);

  /// Throws std::invalid_argument on out-of-bounds or duplicate indices.
  void validate() const;
};

}  // namespace pssv
