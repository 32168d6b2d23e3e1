#include "pssv/dense_matrix.hpp"

#include <stdexcept>
#include <string>

namespace pssv {

void require_finite(const Matrix& X, const char* what) {
  if (!X.allFinite()) {
    throw std::domain_error(std::string(what) + ": matrix has NaN or Inf entries");
  }
}

void require_same_shape(const Matrix& A, const Matrix& B, const char* what) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    throw std::invalid_argument(
        std::string(what) + ": shape mismatch (" + std::to_string(A.rows()) + "x" +
        std::to_string(A.cols()) + " vs " + std::to_string(B.rows()) + "x" +
        std::to_string(B.cols()) + ")");
  }
}

}  // namespace pssv
