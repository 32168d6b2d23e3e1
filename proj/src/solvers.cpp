#include "pssv/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pssv/operators.hpp"
#include "pssv/svd.hpp"

namespace pssv {

namespace {

void validate_rpca_config(const RpcaConfig& cfg, Index m, Index n) {
  if (cfg.target_rank < 0 || cfg.target_rank > std::min(m, n)) {
    throw std::invalid_argument("solve_rpca: target_rank outside [0, min(m, n)]");
  }
  if (cfg.lambda && !(*cfg.lambda > 0.0)) {
    throw std::invalid_argument("solve_rpca: lambda must be > 0");
  }
  if (!(cfg.rho > 1.0)) throw std::invalid_argument("solve_rpca: rho must be > 1");
  if (cfg.mu0 && !(*cfg.mu0 > 0.0)) {
    throw std::invalid_argument("solve_rpca: mu0 must be > 0");
  }
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("solve_rpca: tol must be > 0");
  if (cfg.max_iter < 1) throw std::invalid_argument("solve_rpca: max_iter must be >= 1");
  if (cfg.inner_iters < 1) {
    throw std::invalid_argument("solve_rpca: inner_iters must be >= 1");
  }
}

}  // namespace

RpcaSolution solve_rpca(const Matrix& O, const RpcaConfig& cfg,
                        const RpcaObserver& observer,
                        const std::optional<RpcaInit>& init) {
  require_finite(O, "solve_rpca");
  const Index m = O.rows();
  const Index n = O.cols();
  validate_rpca_config(cfg, m, n);

  const double norm_O = O.norm();
  if (norm_O == 0.0) {
    throw std::invalid_argument("solve_rpca: O is all zeros");
  }

  const double lambda =
      cfg.lambda.value_or(1.0 / std::sqrt(static_cast<double>(std::max(m, n))));
  const double sigma1 = singular_values(O)(0);
  double mu = cfg.mu0.value_or(1.25 / sigma1);

  Matrix A = Matrix::Zero(m, n);
  Matrix E = Matrix::Zero(m, n);
  // Multiplier start scaled by the dual norm of O, as in the inexact ALM
  // scheme this algorithm builds on.
  Matrix Z = O / std::max(sigma1, O.cwiseAbs().maxCoeff() / lambda);
  if (init) {
    require_same_shape(init->A0, O, "solve_rpca init A0");
    require_same_shape(init->E0, O, "solve_rpca init E0");
    require_same_shape(init->Z0, O, "solve_rpca init Z0");
    A = init->A0;
    E = init->E0;
    Z = init->Z0;
  }

  RpcaSolution sol;
  sol.lambda = lambda;
  sol.trace.reserve(static_cast<std::size_t>(std::min(cfg.max_iter, 256)));

  Matrix A_prev, E_prev, Z_prev;
  for (int k = 0; k < cfg.max_iter; ++k) {
    if (observer) {
      A_prev = A;
      E_prev = E;
      Z_prev = Z;
    }

    Vector sigma_A;
    for (int pass = 0; pass < cfg.inner_iters; ++pass) {
      PsvtResult low_rank =
          psvt_with_spectrum(O - E + Z / mu, cfg.target_rank, 1.0 / mu);
      A = std::move(low_rank.X);
      sigma_A = std::move(low_rank.sigma);
      E = soft_threshold(O - A + Z / mu, lambda / mu);
    }

    const Matrix residual = O - A - E;
    const double feasibility = residual.norm() / norm_O;
    const double l1_E = E.cwiseAbs().sum();
    const Index l = sigma_A.size();
    const double pssv_A =
        cfg.target_rank == l ? 0.0 : sigma_A.tail(l - cfg.target_rank).sum();
    IterationRecord rec;
    rec.feasibility = feasibility;
    rec.objective = pssv_A + lambda * l1_E;
    rec.lagrangian = pssv_A + lambda * l1_E +
                     (Z.array() * residual.array()).sum() +
                     0.5 * mu * residual.squaredNorm();
    rec.mu = mu;
    sol.trace.push_back(rec);

    Z += mu * residual;

    if (observer) {
      observer(RpcaIterationView{k, A_prev, E_prev, Z_prev, mu, A, E});
    }

    sol.iterations = k + 1;
    sol.final_residual = feasibility;
    if (feasibility < cfg.tol) {
      sol.converged = true;
      break;
    }
    mu *= cfg.rho;
  }

  sol.A = std::move(A);
  sol.E = std::move(E);
  sol.Z = std::move(Z);
  return sol;
}

CompletionSolution solve_completion(const Matrix& O, const ObservationMask& mask,
                                    const CompletionConfig& cfg) {
  if (mask.empty()) {
    throw std::invalid_argument("solve_completion: mask has no observed entries");
  }
  mask.validate();
  if (O.rows() != mask.rows || O.cols() != mask.cols) {
    throw std::invalid_argument("solve_completion: mask shape mismatch");
  }
  const Index l = std::min(O.rows(), O.cols());
  if (cfg.target_rank < 0 || cfg.target_rank > l) {
    throw std::invalid_argument("solve_completion: target_rank outside [0, min(m, n)]");
  }
  if (!(cfg.rho > 1.0) || !(cfg.mu0 > 0.0) || !(cfg.tol > 0.0) || cfg.max_iter < 1) {
    throw std::invalid_argument("solve_completion: invalid configuration");
  }

  const Matrix observed = mask.apply(O);
  require_finite(observed, "solve_completion observed entries");
  const double norm_observed = observed.norm();
  if (norm_observed == 0.0) {
    throw std::invalid_argument("solve_completion: observed entries are all zero");
  }

  Matrix A = Matrix::Zero(O.rows(), O.cols());
  Matrix B = observed;  // feasible start: observed entries, zeros elsewhere
  Matrix Z = Matrix::Zero(O.rows(), O.cols());
  double mu = cfg.mu0;

  CompletionSolution sol;
  for (int k = 0; k < cfg.max_iter; ++k) {
    PsvtResult low_rank = psvt_with_spectrum(B - Z / mu, cfg.target_rank, 1.0 / mu);
    A = std::move(low_rank.X);

    B = A + Z / mu;
    mask.overwrite_observed(B, observed);

    const Matrix gap = A - B;
    const double residual = gap.norm() / norm_observed;
    const Vector& sigma_A = low_rank.sigma;
    const double pssv_A = cfg.target_rank == l
                              ? 0.0
                              : sigma_A.tail(l - cfg.target_rank).sum();
    IterationRecord rec;
    rec.feasibility = residual;
    rec.objective = pssv_A;
    rec.lagrangian = pssv_A + (Z.array() * gap.array()).sum() +
                     0.5 * mu * gap.squaredNorm();
    rec.mu = mu;
    sol.trace.push_back(rec);

    Z += mu * gap;

    sol.iterations = k + 1;
    sol.final_residual = residual;
    if (residual < cfg.tol) {
      sol.converged = true;
      break;
    }
    mu *= cfg.rho;
  }

  sol.A = std::move(A);
  return sol;
}

KktResiduals kkt_residuals(const Matrix& O, const Matrix& A, const Matrix& E,
                           const Matrix& Z, double lambda) {
  require_same_shape(A, O, "kkt_residuals");
  require_same_shape(E, O, "kkt_residuals");
  require_same_shape(Z, O, "kkt_residuals");

  KktResiduals out;
  out.feasibility = (O - A - E).norm() / O.norm();

  double worst = 0.0;
  for (Index j = 0; j < E.cols(); ++j) {
    for (Index i = 0; i < E.rows(); ++i) {
      const double e = E(i, j);
      const double z = Z(i, j);
      const double violation = e == 0.0
                                   ? std::max(std::abs(z) - lambda, 0.0)
                                   : std::abs(z - lambda * (e > 0.0 ? 1.0 : -1.0));
      worst = std::max(worst, violation);
    }
  }
  out.e_stationarity = worst;
  return out;
}

}  // namespace pssv
