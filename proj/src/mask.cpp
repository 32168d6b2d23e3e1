#include "pssv/mask.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace pssv {

Matrix ObservationMask::apply(const Matrix& X) const {
  if (X.rows() != rows || X.cols() != cols) {
    throw std::invalid_argument("ObservationMask::apply: shape mismatch");
  }
  Matrix out = Matrix::Zero(rows, cols);
  for (const auto& [i, j] : observed) out(i, j) = X(i, j);
  return out;
}

void ObservationMask::overwrite_observed(Matrix& target, const Matrix& source) const {
  for (const auto& [i, j] : observed) target(i, j) = source(i, j);
}

Matrix ObservationMask::indicator() const {
  Matrix out = Matrix::Zero(rows, cols);
  for (const auto& [i, j] : observed) out(i, j) = 1.0;
  return out;
}

ObservationMask ObservationMask::from_indicator(const Matrix& indicator) {
  ObservationMask mask;
  mask.rows = indicator.rows();
  mask.cols = indicator.cols();
  for (Index i = 0; i < indicator.rows(); ++i) {
    for (Index j = 0; j < indicator.cols(); ++j) {
      if (indicator(i, j) > 0.5) mask.observed.emplace_back(i, j);
    }
  }
  return mask;
}

void ObservationMask::validate() const {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("ObservationMask: empty dimensions");
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(observed.size());
  for (const auto& [i, j] : observed) {
    if (i < 0 || i >= rows || j < 0 || j >= cols) {
      throw std::invalid_argument("ObservationMask: index (" + std::to_string(i) +
                                  ", " + std::to_string(j) + ") out of bounds");
    }
    const auto key = static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cols) +
                     static_cast<std::uint64_t>(j);
    if (!seen.insert(key).second) {
      throw std::invalid_argument("ObservationMask: duplicate index (" +
                                  std::to_string(i) + ", " + std::to_string(j) + ")");
    }
  }
}

}  // namespace pssv
