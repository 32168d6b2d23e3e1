#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pssv/dense_matrix.hpp"
#include "pssv/mask.hpp"

namespace pssv {

// ADMM solver for min ||A||_{p=N} + lambda ||E||_1  s.t.  O = A + E.
// target_rank = 0 selects the nuclear-norm baseline (classical robust PCA).
struct RpcaConfig {
  Index target_rank = 0;
  std::optional<double> lambda;  // default 1 / sqrt(max(m, n))
  double rho = 1.5;
  std::optional<double> mu0;     // default 1.25 / sigma_1(O)
  double tol = 1e-7;             // on ||O - A - E||_F / ||O||_F
  int max_iter = 1000;
  int inner_iters = 1;           // 1 = inexact ALM; more re-solves the primal block
};

struct IterationRecord {
  double feasibility;  // ||O - A - E||_F / ||O||_F after the updates
  double objective;    // ||A||_{p=N} + lambda ||E||_1 (lambda term absent for completion)
  double lagrangian;   // augmented Lagrangian at (A_{k+1}, E_{k+1}, Z_k, mu_k)
  double mu;           // mu_k used by this iteration
};

using IterationTrace = std::vector<IterationRecord>;

struct RpcaSolution {
  Matrix A;
  Matrix E;
  Matrix Z;  // final multiplier estimate, for KKT diagnostics
  int iterations = 0;
  bool converged = false;
  double final_residual = 0.0;
  double lambda = 0.0;  // the weight actually used
  IterationTrace trace;
};

// Per-outer-iteration view for instrumentation (convergence traces, descent
// checks). Populated only when an observer is installed.
struct RpcaIterationView {
  int iteration;  // 0-based outer iteration index k
  const Matrix& A_prev;
  const Matrix& E_prev;
  const Matrix& Z_prev;
  double mu;  // mu_k
  const Matrix& A_next;
  const Matrix& E_next;
};

using RpcaObserver = std::function<void(const RpcaIterationView&)>;

// Optional custom starting point; the default is A = E = 0 with the
// multiplier scaled as Z = O / max(sigma_1(O), max|O_ij| / lambda).
struct RpcaInit {
  Matrix A0;
  Matrix E0;
  Matrix Z0;
};

/// Alternating-direction solve of the partial-sum objective:
///   A_{k+1} = PSVT_{N, 1/mu_k}(O - E_k + Z_k / mu_k)
///   E_{k+1} = S_{lambda/mu_k}(O - A_{k+1} + Z_k / mu_k)
///   Z_{k+1} = Z_k + mu_k (O - A_{k+1} - E_{k+1}),  mu_{k+1} = rho mu_k
/// Terminates when ||O - A - E||_F / ||O||_F < tol. Hitting max_iter returns
/// converged = false rather than throwing, so sweeps can record failures.
RpcaSolution solve_rpca(const Matrix& O, const RpcaConfig& cfg,
                        const RpcaObserver& observer = {},
                        const std::optional<RpcaInit>& init = std::nullopt);

// ADMM solver for min ||A||_{p}  s.t.  A = B, P_Omega(B) = P_Omega(O).
struct CompletionConfig {
  Index target_rank = 0;
  double rho = 1.05;
  double mu0 = 1e-3;
  double tol = 1e-7;  // on ||A - B||_F / ||P_Omega(O)||_F
  int max_iter = 2000;
};

struct CompletionSolution {
  Matrix A;
  int iterations = 0;
  bool converged = false;
  double final_residual = 0.0;
  IterationTrace trace;
};

/// Matrix completion by partial singular value thresholding:
///   A_{k+1} = PSVT_{N, 1/mu_k}(B_k - Z_k / mu_k)
///   B_{k+1} = A_{k+1} + Z_k / mu_k, observed entries overwritten by O
///   Z_{k+1} = Z_k + mu_k (A_{k+1} - B_{k+1}),  mu_{k+1} = rho mu_k
/// Values of O off the mask are ignored.
CompletionSolution solve_completion(const Matrix& O, const ObservationMask& mask,
                                    const CompletionConfig& cfg);

struct KktResiduals {
  double feasibility;      // ||O - A - E||_F / ||O||_F
  double e_stationarity;   // violation of Z in the subdifferential of lambda||E||_1
};

/// First-order optimality diagnostics of a candidate (A, E, Z):
/// feasibility of the equality constraint, and the largest entry-wise
/// violation of Z against the subdifferential of lambda ||E||_1
/// (|Z_ij| <= lambda where E_ij = 0, Z_ij = lambda sign(E_ij) elsewhere).
KktResiduals kkt_residuals(const Matrix& O, const Matrix& A, const Matrix& E,
                           const Matrix& Z, double lambda);

}  // namespace pssv
