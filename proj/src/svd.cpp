#include "pssv/svd.hpp"

#include <Eigen/SVD>
#include <stdexcept>

namespace pssv {

SvdFactors svd(const Matrix& X) {
  require_finite(X, "svd");
  Eigen::BDCSVD<Matrix> dec(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) {
    throw std::runtime_error("svd: decomposition did not converge");
  }
  return SvdFactors{dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

Vector singular_values(const Matrix& X) {
  require_finite(X, "singular_values");
  Eigen::BDCSVD<Matrix> dec(X);
  if (dec.info() != Eigen::Success) {
    throw std::runtime_error("singular_values: decomposition did not converge");
  }
  return dec.singularValues();
}

}  // namespace pssv
