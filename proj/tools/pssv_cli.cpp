// Command-line front end: sparse + low-rank decomposition, matrix completion,
// and the synthetic experiment drivers. Exit codes: 0 success/converged,
// 2 solver hit the iteration cap, 1 usage or I/O error.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pssv/harness.hpp"
#include "pssv/io.hpp"
#include "pssv/mask.hpp"
#include "pssv/metrics.hpp"
#include "pssv/solvers.hpp"
#include "pssv/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

struct SolveOptions {
  std::string input;
  std::string method = "pssv";
  std::int64_t rank = -1;  // -1: unset
  double lambda = 0.0;     // 0: default
  double rho = 1.5;
  double mu0 = 0.0;  // 0: default
  double tol = 1e-7;
  int max_iter = 1000;
  int inner_iters = 1;
  std::string out_a;
  std::string out_e;
  std::string trace_path;
};

int run_solve(const SolveOptions& opt) {
  if (opt.method == "pssv" && opt.rank < 0) {
    std::cerr << "solve: --rank is required with --method pssv\n";
    return kExitError;
  }
  if (opt.method == "nuclear" && opt.rank > 0) {
    std::cerr << "solve: --rank conflicts with --method nuclear (implies rank 0)\n";
    return kExitError;
  }

  const pssv::Matrix O = pssv::read_matrix_csv(opt.input);

  pssv::RpcaConfig cfg;
  cfg.target_rank = opt.method == "nuclear" ? 0 : opt.rank;
  if (opt.lambda > 0.0) cfg.lambda = opt.lambda;
  cfg.rho = opt.rho;
  if (opt.mu0 > 0.0) cfg.mu0 = opt.mu0;
  cfg.tol = opt.tol;
  cfg.max_iter = opt.max_iter;
  cfg.inner_iters = opt.inner_iters;

  const pssv::RpcaSolution sol = pssv::solve_rpca(O, cfg);

  if (!opt.out_a.empty()) pssv::write_matrix_csv(sol.A, opt.out_a);
  if (!opt.out_e.empty()) pssv::write_matrix_csv(sol.E, opt.out_e);
  if (!opt.trace_path.empty()) pssv::write_solver_trace_csv(sol.trace, opt.trace_path);

  std::printf("method=%s rank=%lld iterations=%d converged=%s residual=%.6e objective=%.10g\n",
              opt.method.c_str(), static_cast<long long>(cfg.target_rank),
              sol.iterations, sol.converged ? "yes" : "no", sol.final_residual,
              sol.trace.empty() ? 0.0 : sol.trace.back().objective);
  return sol.converged ? kExitOk : kExitNotConverged;
}

struct CompleteOptions {
  std::string input;
  std::string mask_path;
  double observe_fraction = 0.0;
  std::uint64_t seed = 0;
  std::int64_t rank = 0;
  double rho = 1.05;
  double mu0 = 1e-3;
  double tol = 1e-7;
  int max_iter = 2000;
  std::string out;
  std::string ref_path;
};

int run_complete(const CompleteOptions& opt) {
  const bool pgm = pssv::has_pgm_extension(opt.input);
  const pssv::Matrix O =
      pgm ? pssv::read_pgm(opt.input) : pssv::read_matrix_csv(opt.input);

  pssv::ObservationMask mask;
  if (!opt.mask_path.empty()) {
    const pssv::Matrix indicator = pssv::read_matrix_csv(opt.mask_path);
    if (indicator.rows() != O.rows() || indicator.cols() != O.cols()) {
      std::cerr << "complete: mask shape " << indicator.rows() << "x"
                << indicator.cols() << " does not match input " << O.rows() << "x"
                << O.cols() << "\n";
      return kExitError;
    }
    mask = pssv::ObservationMask::from_indicator(indicator);
  } else if (opt.observe_fraction > 0.0) {
    pssv::PrngStream stream(opt.seed, 0);
    mask = pssv::gen_mask(O.rows(), O.cols(), opt.observe_fraction, stream);
  } else {
    std::cerr << "complete: need --mask or --observe-fraction\n";
    return kExitError;
  }

  pssv::CompletionConfig cfg;
  cfg.target_rank = opt.rank;
  cfg.rho = opt.rho;
  cfg.mu0 = opt.mu0;
  cfg.tol = opt.tol;
  cfg.max_iter = opt.max_iter;

  const pssv::CompletionSolution sol = pssv::solve_completion(O, mask, cfg);

  if (!opt.out.empty()) {
    if (pssv::has_pgm_extension(opt.out)) {
      pssv::write_pgm(sol.A, opt.out);
    } else {
      pssv::write_matrix_csv(sol.A, opt.out);
    }
  }

  std::printf("rank=%lld observed=%zu iterations=%d converged=%s residual=%.6e\n",
              static_cast<long long>(cfg.target_rank), mask.observed.size(),
              sol.iterations, sol.converged ? "yes" : "no", sol.final_residual);

  if (!opt.ref_path.empty()) {
    const pssv::Matrix ref = pssv::has_pgm_extension(opt.ref_path)
                                 ? pssv::read_pgm(opt.ref_path)
                                 : pssv::read_matrix_csv(opt.ref_path);
    const double peak = pgm ? 255.0 : ref.cwiseAbs().maxCoeff();
    std::printf("psnr=%.4f nrmse=%.6e\n", pssv::psnr(ref, sol.A, peak),
                pssv::nrmse(ref, sol.A));
  }
  return sol.converged ? kExitOk : kExitNotConverged;
}

std::string join_path(const std::string& dir, const char* file) {
  return (std::filesystem::path(dir) / file).string();
}

void ensure_dir(const std::string& dir) {
  std::filesystem::create_directories(dir);
}

struct SweepOptions {
  std::string axis = "columns";
  std::int64_t fixed_dim = 1000;
  std::vector<std::int64_t> sweep;
  std::vector<double> corruption;
  std::int64_t rank = 3;
  std::vector<std::string> methods = {"pssv", "nuclear"};
  int trials = 20;
  double tol = 1e-7;
  int max_iter = 1000;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out_dir = ".";
};

pssv::PhaseDiagramSpec make_sweep_spec(const SweepOptions& opt) {
  pssv::PhaseDiagramSpec spec;
  spec.swept_axis = opt.axis == "rows" ? pssv::PhaseDiagramSpec::Axis::kRows
                                       : pssv::PhaseDiagramSpec::Axis::kColumns;
  spec.fixed_dim = opt.fixed_dim;
  spec.sweep_values.assign(opt.sweep.begin(), opt.sweep.end());
  spec.corruption_grid = opt.corruption;
  spec.true_rank = opt.rank;
  spec.methods.clear();
  for (const auto& name : opt.methods) {
    if (name == "pssv") {
      spec.methods.push_back(pssv::Method::kPssv);
    } else if (name == "nuclear") {
      spec.methods.push_back(pssv::Method::kNuclear);
    } else {
      throw std::invalid_argument("unknown method '" + name + "'");
    }
  }
  spec.trials = opt.trials;
  spec.master_seed = opt.seed;
  spec.threads = opt.threads;
  spec.base_config.tol = opt.tol;
  spec.base_config.max_iter = opt.max_iter;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial-sum singular value solvers for robust PCA, matrix "
               "completion, and the synthetic experiment suite"};
  app.require_subcommand(1);

  // --- solve ---------------------------------------------------------------
  SolveOptions solve_opt;
  CLI::App* solve = app.add_subcommand("solve", "Sparse + low-rank decomposition of a CSV matrix");
  solve->add_option("input", solve_opt.input, "Input matrix (CSV)")->required();
  solve->add_option("--method", solve_opt.method, "pssv or nuclear")
      ->check(CLI::IsMember({"pssv", "nuclear"}));
  solve->add_option("--rank", solve_opt.rank, "Target rank N (required for pssv)");
  solve->add_option("--lambda", solve_opt.lambda, "Sparsity weight (default 1/sqrt(max(m,n)))");
  solve->add_option("--rho", solve_opt.rho, "Penalty growth factor (> 1)");
  solve->add_option("--mu0", solve_opt.mu0, "Initial penalty (default 1.25/sigma_1)");
  solve->add_option("--tol", solve_opt.tol, "Relative feasibility tolerance");
  solve->add_option("--max-iter", solve_opt.max_iter, "Outer iteration cap");
  solve->add_option("--inner-iters", solve_opt.inner_iters, "Primal passes per outer iteration");
  solve->add_option("--out-A", solve_opt.out_a, "Write the low-rank component here");
  solve->add_option("--out-E", solve_opt.out_e, "Write the sparse component here");
  solve->add_option("--trace", solve_opt.trace_path, "Write the per-iteration trace CSV here");

  // --- complete ------------------------------------------------------------
  CompleteOptions complete_opt;
  CLI::App* complete = app.add_subcommand("complete", "Low-rank matrix/image completion");
  complete->add_option("input", complete_opt.input, "Input matrix (CSV or PGM)")->required();
  complete->add_option("--mask", complete_opt.mask_path, "0/1 indicator CSV of observed entries");
  complete->add_option("--observe-fraction", complete_opt.observe_fraction,
                       "Sample this fraction of entries as observed");
  complete->add_option("--seed", complete_opt.seed, "Seed for --observe-fraction sampling");
  complete->add_option("--rank", complete_opt.rank, "Target rank p")->required();
  complete->add_option("--rho", complete_opt.rho, "Penalty growth factor (> 1)");
  complete->add_option("--mu0", complete_opt.mu0, "Initial penalty");
  complete->add_option("--tol", complete_opt.tol, "Relative gap tolerance");
  complete->add_option("--max-iter", complete_opt.max_iter, "Iteration cap");
  complete->add_option("--out", complete_opt.out, "Write the recovered matrix/image here");
  complete->add_option("--ref", complete_opt.ref_path, "Reference for PSNR/NRMSE reporting");

  // --- experiment ----------------------------------------------------------
  CLI::App* experiment = app.add_subcommand("experiment", "Synthetic study drivers");
  experiment->require_subcommand(1);

  SweepOptions phase_opt;
  CLI::App* phase = experiment->add_subcommand(
      "phase-diagram", "Success-ratio grid over a dimension sweep x corruption");
  SweepOptions defic_opt;
  CLI::App* defic = experiment->add_subcommand(
      "deficiency-map", "Rank-deficiency fraction over the same grid");
  for (auto [sub, opt] : {std::pair{phase, &phase_opt}, std::pair{defic, &defic_opt}}) {
    sub->add_option("--axis", opt->axis, "columns or rows")
        ->check(CLI::IsMember({"columns", "rows"}));
    sub->add_option("--fixed-dim", opt->fixed_dim, "Size of the non-swept dimension");
    sub->add_option("--sweep", opt->sweep, "Swept dimension values")
        ->required()
        ->delimiter(',');
    sub->add_option("--corruption", opt->corruption, "Corruption ratios in [0, 0.4]")
        ->required()
        ->delimiter(',');
    sub->add_option("--rank", opt->rank, "True (and target) rank");
    sub->add_option("--methods", opt->methods, "Subset of pssv,nuclear")->delimiter(',');
    sub->add_option("--trials", opt->trials, "Trials per cell");
    sub->add_option("--tol", opt->tol, "Solver tolerance");
    sub->add_option("--max-iter", opt->max_iter, "Solver iteration cap");
    sub->add_option("--seed", opt->seed, "Master seed");
    sub->add_option("--threads", opt->threads, "Worker threads");
    sub->add_option("--out", opt->out_dir, "Output directory");
  }

  double toy_xmax = 4.0;
  double toy_step = 0.01;
  std::uint64_t toy_seed = 0;
  std::string toy_out = ".";
  CLI::App* toy = experiment->add_subcommand(
      "toy-fig2", "Nuclear vs partial-sum values on the 2x2 toy families");
  toy->add_option("--x-max", toy_xmax, "Sweep upper bound");
  toy->add_option("--step", toy_step, "Sweep step");
  toy->add_option("--seed", toy_seed, "Accepted for interface uniformity (study is deterministic)");
  toy->add_option("--out", toy_out, "Output directory");

  struct InitOptions {
    std::int64_t m = 1000, n = 50, rank = 3;
    double corruption = 0.05;
    int inits = 100;
    double init_scale = 1.0;
    double tol = 1e-7;
    int max_iter = 1000;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_dir = ".";
  } init_opt;
  CLI::App* init = experiment->add_subcommand(
      "init-sensitivity", "NRMSE distribution over random initializations");
  init->add_option("--m", init_opt.m, "Rows");
  init->add_option("--n", init_opt.n, "Columns");
  init->add_option("--rank", init_opt.rank, "True (and target) rank");
  init->add_option("--corruption", init_opt.corruption, "Corruption ratio");
  init->add_option("--inits", init_opt.inits, "Number of initializations");
  init->add_option("--init-scale", init_opt.init_scale,
                   "Perturbation scale (0 = solver default start)");
  init->add_option("--tol", init_opt.tol, "Solver tolerance");
  init->add_option("--max-iter", init_opt.max_iter, "Solver iteration cap");
  init->add_option("--seed", init_opt.seed, "Master seed");
  init->add_option("--threads", init_opt.threads, "Worker threads");
  init->add_option("--out", init_opt.out_dir, "Output directory");

  struct LambdaOptions {
    std::int64_t m = 1000, n = 50, rank = 3;
    double corruption = 0.05;
    std::vector<double> L;
    int trials = 10;
    double tol = 1e-7;
    int max_iter = 1000;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_dir = ".";
  } lambda_opt;
  CLI::App* lambda_sweep = experiment->add_subcommand(
      "lambda-sweep", "Mean NRMSE of both methods as lambda = L/sqrt(max(m,n)) varies");
  lambda_sweep->add_option("--m", lambda_opt.m, "Rows");
  lambda_sweep->add_option("--n", lambda_opt.n, "Columns");
  lambda_sweep->add_option("--rank", lambda_opt.rank, "True (and target) rank");
  lambda_sweep->add_option("--corruption", lambda_opt.corruption, "Corruption ratio");
  lambda_sweep->add_option("--L", lambda_opt.L, "L multipliers")->required()->delimiter(',');
  lambda_sweep->add_option("--trials", lambda_opt.trials, "Trials per L");
  lambda_sweep->add_option("--tol", lambda_opt.tol, "Solver tolerance");
  lambda_sweep->add_option("--max-iter", lambda_opt.max_iter, "Solver iteration cap");
  lambda_sweep->add_option("--seed", lambda_opt.seed, "Master seed");
  lambda_sweep->add_option("--threads", lambda_opt.threads, "Worker threads");
  lambda_sweep->add_option("--out", lambda_opt.out_dir, "Output directory");

  struct TraceOptions {
    std::int64_t m = 1000, n = 40;
    std::vector<std::int64_t> ranks = {2, 3, 4};
    double corruption = 0.05;
    int trials = 5;
    double tol = 1e-7;
    int max_iter = 1000;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_dir = ".";
  } trace_opt;
  CLI::App* conv = experiment->add_subcommand(
      "convergence-trace", "Per-iteration error and feasibility traces per method");
  conv->add_option("--m", trace_opt.m, "Rows");
  conv->add_option("--n", trace_opt.n, "Columns");
  conv->add_option("--ranks", trace_opt.ranks, "True ranks to trace")->delimiter(',');
  conv->add_option("--corruption", trace_opt.corruption, "Corruption ratio");
  conv->add_option("--trials", trace_opt.trials, "Trials per rank");
  conv->add_option("--tol", trace_opt.tol, "Solver tolerance");
  conv->add_option("--max-iter", trace_opt.max_iter, "Solver iteration cap");
  conv->add_option("--seed", trace_opt.seed, "Master seed");
  conv->add_option("--threads", trace_opt.threads, "Worker threads");
  conv->add_option("--out", trace_opt.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (solve->parsed()) return run_solve(solve_opt);
    if (complete->parsed()) return run_complete(complete_opt);

    if (phase->parsed()) {
      ensure_dir(phase_opt.out_dir);
      const auto result = pssv::run_phase_diagram(make_sweep_spec(phase_opt));
      pssv::write_phase_diagram_csv(result, join_path(phase_opt.out_dir, "phase_diagram.csv"));
      return kExitOk;
    }
    if (defic->parsed()) {
      ensure_dir(defic_opt.out_dir);
      const auto result = pssv::run_rank_deficiency_map(make_sweep_spec(defic_opt));
      pssv::write_deficiency_map_csv(result, join_path(defic_opt.out_dir, "deficiency_map.csv"));
      return kExitOk;
    }
    if (toy->parsed()) {
      ensure_dir(toy_out);
      const auto result = pssv::run_toy_fig2(toy_xmax, toy_step);
      pssv::write_toy_fig2_csv(result, join_path(toy_out, "toy_fig2.csv"));
      std::printf("family_a: nuclear argmin x=%.4f, pssv argmin x=%.4f\n",
                  result.argmin_nuclear_a, result.argmin_pssv_a);
      std::printf("family_b: nuclear argmin x=%.4f, pssv argmin x=%.4f\n",
                  result.argmin_nuclear_b, result.argmin_pssv_b);
      return kExitOk;
    }
    if (init->parsed()) {
      ensure_dir(init_opt.out_dir);
      pssv::InstanceSpec inst{init_opt.m, init_opt.n, init_opt.rank,
                              init_opt.corruption, init_opt.seed};
      pssv::RpcaConfig base;
      base.tol = init_opt.tol;
      base.max_iter = init_opt.max_iter;
      const auto result = pssv::run_init_sensitivity(
          inst, init_opt.inits, init_opt.init_scale, init_opt.threads, base);
      pssv::write_init_sensitivity_csv(
          result, join_path(init_opt.out_dir, "init_sensitivity.csv"));
      std::printf("fraction below 0.01: %.4f\n", result.fraction_below_threshold);
      return kExitOk;
    }
    if (lambda_sweep->parsed()) {
      ensure_dir(lambda_opt.out_dir);
      pssv::InstanceSpec inst{lambda_opt.m, lambda_opt.n, lambda_opt.rank,
                              lambda_opt.corruption, lambda_opt.seed};
      pssv::RpcaConfig base;
      base.tol = lambda_opt.tol;
      base.max_iter = lambda_opt.max_iter;
      const auto result = pssv::run_lambda_sweep(inst, lambda_opt.L, lambda_opt.trials,
                                                 lambda_opt.threads, base);
      pssv::write_lambda_sweep_csv(result,
                                   join_path(lambda_opt.out_dir, "lambda_sweep.csv"));
      return kExitOk;
    }
    if (conv->parsed()) {
      ensure_dir(trace_opt.out_dir);
      pssv::RpcaConfig base;
      base.tol = trace_opt.tol;
      base.max_iter = trace_opt.max_iter;
      std::vector<pssv::Index> ranks(trace_opt.ranks.begin(), trace_opt.ranks.end());
      const auto result = pssv::run_convergence_trace(
          trace_opt.m, trace_opt.n, ranks, trace_opt.corruption, trace_opt.trials,
          trace_opt.seed, trace_opt.threads, base);
      pssv::write_convergence_trace_csv(
          result, join_path(trace_opt.out_dir, "convergence_trace.csv"));
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
