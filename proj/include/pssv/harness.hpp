#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pssv/dense_matrix.hpp"
#include "pssv/solvers.hpp"
#include "pssv/synth.hpp"

namespace pssv {

enum class Method { kPssv, kNuclear };

const char* method_name(Method m);

// Grid experiment over a swept dimension and a corruption-ratio axis.
// Desk-scale defaults (m = 1000, 20 trials) keep runs in the minutes range;
// larger grids and trial counts can be requested explicitly.
struct PhaseDiagramSpec {
  enum class Axis { kColumns, kRows };
  Axis swept_axis = Axis::kColumns;
  Index fixed_dim = 1000;
  std::vector<Index> sweep_values;
  std::vector<double> corruption_grid;  // each within [0, 0.4]
  Index true_rank = 3;
  std::vector<Method> methods = {Method::kPssv, Method::kNuclear};
  int trials = 20;
  std::uint64_t master_seed = 0;
  int threads = 1;
  RpcaConfig base_config;  // target_rank is overridden per method

  void validate() const;
};

struct MethodCellStats {
  Method method = Method::kPssv;
  double success_ratio = 0.0;
  double mean_nrmse = 0.0;
  double mean_deficiency_ratio = 0.0;
  double deficient_fraction = 0.0;  // trials with sigma_N/sigma_1 < 0.01
  double mean_iterations = 0.0;
};

struct ExperimentCell {
  Index param = 0;       // the swept dimension value
  double corruption = 0.0;
  std::vector<MethodCellStats> per_method;

  const MethodCellStats& stats(Method m) const;
};

struct ExperimentResult {
  PhaseDiagramSpec spec;
  std::vector<ExperimentCell> cells;

  const ExperimentCell& cell(Index param, double corruption) const;
};

/// For each (param, r, trial): build the instance on stream index = trial,
/// solve with each method (pssv: N = true_rank, nuclear: N = 0), aggregate
/// success ratio / mean NRMSE / deficiency stats per cell. Failed solves
/// count as non-success, never as errors.
ExperimentResult run_phase_diagram(const PhaseDiagramSpec& spec);

/// Same sweep with the rank-deficiency fraction as the quantity of interest
/// (sigma_{true_rank} / sigma_1 < 0.01 counted per cell, for every method).
ExperimentResult run_rank_deficiency_map(const PhaseDiagramSpec& spec);

// Toy comparison of the nuclear norm and the partial sum (p = 1) on the
// 2 x 2 families [1 1; 3 x] and [1 1; 1 x], x swept over [0, x_max].
struct ToyFig2Result {
  struct Row {
    double x;
    double nuclear;
    double pssv;
  };
  std::vector<Row> family_a;  // [1 1; 3 x]
  std::vector<Row> family_b;  // [1 1; 1 x]
  double argmin_nuclear_a = 0.0;
  double argmin_pssv_a = 0.0;
  double argmin_nuclear_b = 0.0;
  double argmin_pssv_b = 0.0;
  Vector sigma_at_nuclear_argmin_a;
  Vector sigma_at_pssv_argmin_a;
};

ToyFig2Result run_toy_fig2(double x_max = 4.0, double step = 0.01);

// One planted instance reused across experiment drivers.
struct InstanceSpec {
  Index m = 1000;
  Index n = 50;
  Index rank = 3;
  double corruption = 0.05;
  std::uint64_t master_seed = 0;
};

struct InitSensitivityResult {
  std::vector<double> nrmse;       // one per initialization
  double fraction_below_threshold = 0.0;
};

/// Solves one fixed instance from n_inits starting points and reports the
/// NRMSE distribution. init_scale = 0 uses the solver's own zero
/// initialization (A = E = 0, default multiplier) for every run; otherwise
/// each run perturbs that starting point with U[-1,1) entries scaled by
/// init_scale * max|O_ij|.
InitSensitivityResult run_init_sensitivity(const InstanceSpec& inst, int n_inits,
                                           double init_scale = 1.0,
                                           int threads = 1,
                                           const RpcaConfig& base = {});

struct LambdaSweepResult {
  struct Row {
    double L;
    double lambda;
    double mean_nrmse_pssv;
    double mean_nrmse_nuclear;
  };
  std::vector<Row> rows;
};

/// Mean NRMSE of both methods over `trials` instances, for each
/// lambda = L / sqrt(max(m, n)).
LambdaSweepResult run_lambda_sweep(const InstanceSpec& inst,
                                   const std::vector<double>& L_values,
                                   int trials, int threads = 1,
                                   const RpcaConfig& base = {});

struct ConvergenceTraceResult {
  struct Series {
    Method method;
    Index rank;
    // per-iteration means over trials; shorter runs are padded with their
    // final value so every iteration averages the same trial count
    std::vector<double> combined_error;  // nrmse(A) + nrmse(E)
    std::vector<double> feasibility;
    double mean_iterations = 0.0;
    double final_feasibility_max = 0.0;  // worst final residual across trials
  };
  std::vector<Series> series;
};

/// Per-iteration evolution of the combined relative error and the
/// feasibility residual for both methods, for each requested rank.
ConvergenceTraceResult run_convergence_trace(Index m, Index n,
                                             const std::vector<Index>& ranks,
                                             double corruption, int trials,
                                             std::uint64_t master_seed,
                                             int threads = 1,
                                             const RpcaConfig& base = {});

}  // namespace pssv
