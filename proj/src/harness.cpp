#include "pssv/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "pssv/metrics.hpp"
#include "pssv/operators.hpp"

namespace pssv {

namespace {

// Runs fn(0..count-1) on up to `threads` workers. Each index writes only its
// own output slot, so the aggregation that follows is order-independent and
// results match the serial run exactly.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& worker : pool) worker.join();
}

std::pair<Index, Index> cell_dims(const PhaseDiagramSpec& spec, Index param) {
  return spec.swept_axis == PhaseDiagramSpec::Axis::kColumns
             ? std::pair<Index, Index>{spec.fixed_dim, param}
             : std::pair<Index, Index>{param, spec.fixed_dim};
}

TrialOutcome solve_and_score(const SyntheticInstance& inst, Method method,
                             const RpcaConfig& base, Index true_rank) {
  RpcaConfig cfg = base;
  cfg.target_rank = method == Method::kPssv ? true_rank : 0;

  const auto start = std::chrono::steady_clock::now();
  const RpcaSolution sol = solve_rpca(inst.O, cfg);
  const auto stop = std::chrono::steady_clock::now();

  TrialOutcome out;
  out.nrmse = nrmse(inst.A_gt, sol.A);
  out.success = out.nrmse < kSuccessNrmseThreshold;
  out.deficiency_ratio = sol.A.norm() == 0.0
                             ? 0.0
                             : rank_deficiency_ratio(sol.A, true_rank);
  out.iterations = sol.iterations;
  out.wall_time_s = std::chrono::duration<double>(stop - start).count();
  return out;
}

ExperimentResult run_sweep(const PhaseDiagramSpec& spec) {
  spec.validate();

  const int n_params = static_cast<int>(spec.sweep_values.size());
  const int n_ratios = static_cast<int>(spec.corruption_grid.size());
  const int n_methods = static_cast<int>(spec.methods.size());
  const int n_cells = n_params * n_ratios;
  const int n_jobs = n_cells * spec.trials;

  // outcomes[job * n_methods + method_idx], job = (cell * trials + trial)
  std::vector<TrialOutcome> outcomes(
      static_cast<std::size_t>(n_jobs) * static_cast<std::size_t>(n_methods));

  parallel_for(n_jobs, spec.threads, [&](int job) {
    const int cell = job / spec.trials;
    const int trial = job % spec.trials;
    const Index param = spec.sweep_values[static_cast<std::size_t>(cell / n_ratios)];
    const double ratio = spec.corruption_grid[static_cast<std::size_t>(cell % n_ratios)];
    const auto [m, n] = cell_dims(spec, param);

    const SyntheticInstance inst =
        make_instance(m, n, spec.true_rank, ratio, spec.master_seed,
                      static_cast<std::uint64_t>(trial));
    for (int mi = 0; mi < n_methods; ++mi) {
      outcomes[static_cast<std::size_t>(job) * n_methods + mi] = solve_and_score(
          inst, spec.methods[static_cast<std::size_t>(mi)], spec.base_config,
          spec.true_rank);
    }
  });

  ExperimentResult result;
  result.spec = spec;
  result.cells.reserve(static_cast<std::size_t>(n_cells));
  for (int cell = 0; cell < n_cells; ++cell) {
    ExperimentCell out_cell;
    out_cell.param = spec.sweep_values[static_cast<std::size_t>(cell / n_ratios)];
    out_cell.corruption = spec.corruption_grid[static_cast<std::size_t>(cell % n_ratios)];
    for (int mi = 0; mi < n_methods; ++mi) {
      MethodCellStats stats;
      stats.method = spec.methods[static_cast<std::size_t>(mi)];
      int successes = 0;
      int deficient = 0;
      double sum_nrmse = 0.0;
      double sum_ratio = 0.0;
      double sum_iters = 0.0;
      for (int trial = 0; trial < spec.trials; ++trial) {
        const TrialOutcome& o =
            outcomes[static_cast<std::size_t>(cell * spec.trials + trial) * n_methods +
                     mi];
        successes += o.success ? 1 : 0;
        deficient += o.deficiency_ratio < 0.01 ? 1 : 0;
        sum_nrmse += o.nrmse;
        sum_ratio += o.deficiency_ratio;
        sum_iters += o.iterations;
      }
      const double trials = static_cast<double>(spec.trials);
      stats.success_ratio = successes / trials;
      stats.mean_nrmse = sum_nrmse / trials;
      stats.mean_deficiency_ratio = sum_ratio / trials;
      stats.deficient_fraction = deficient / trials;
      stats.mean_iterations = sum_iters / trials;
      out_cell.per_method.push_back(stats);
    }
    result.cells.push_back(std::move(out_cell));
  }
  return result;
}

}  // namespace

const char* method_name(Method m) {
  return m == Method::kPssv ? "pssv" : "nuclear";
}

void PhaseDiagramSpec::validate() const {
  if (sweep_values.empty()) {
    throw std::invalid_argument("PhaseDiagramSpec: sweep_values is empty");
  }
  if (!std::is_sorted(sweep_values.begin(), sweep_values.end()) ||
      std::adjacent_find(sweep_values.begin(), sweep_values.end()) !=
          sweep_values.end()) {
    throw std::invalid_argument("PhaseDiagramSpec: sweep_values must be increasing");
  }
  for (const double r : corruption_grid) {
    if (!(r >= 0.0 && r <= 0.4)) {
      throw std::invalid_argument("PhaseDiagramSpec: corruption outside [0, 0.4]");
    }
  }
  if (corruption_grid.empty()) {
    throw std::invalid_argument("PhaseDiagramSpec: corruption_grid is empty");
  }
  if (methods.empty()) {
    throw std::invalid_argument("PhaseDiagramSpec: no methods selected");
  }
  if (trials < 1) throw std::invalid_argument("PhaseDiagramSpec: trials must be >= 1");
  const Index min_param = sweep_values.front();
  if (true_rank < 1 || true_rank > std::min(fixed_dim, min_param)) {
    throw std::invalid_argument(
        "PhaseDiagramSpec: true_rank exceeds the smallest instance dimension");
  }
}

const MethodCellStats& ExperimentCell::stats(Method m) const {
  for (const auto& s : per_method) {
    if (s.method == m) return s;
  }
  throw std::invalid_argument("ExperimentCell: method not present");
}

const ExperimentCell& ExperimentResult::cell(Index param, double corruption) const {
  for (const auto& c : cells) {
    if (c.param == param && c.corruption == corruption) return c;
  }
  throw std::invalid_argument("ExperimentResult: no such cell");
}

ExperimentResult run_phase_diagram(const PhaseDiagramSpec& spec) {
  return run_sweep(spec);
}

ExperimentResult run_rank_deficiency_map(const PhaseDiagramSpec& spec) {
  // Identical sweep; the deficiency fraction is part of every cell's stats
  // and the CSV writer picks the deficiency-centric columns.
  return run_sweep(spec);
}

ToyFig2Result run_toy_fig2(double x_max, double step) {
  if (!(step > 0.0) || !(x_max > 0.0)) {
    throw std::invalid_argument("run_toy_fig2: x_max and step must be > 0");
  }
  ToyFig2Result result;
  const int points = static_cast<int>(std::floor(x_max / step + 0.5)) + 1;
  result.family_a.reserve(static_cast<std::size_t>(points));
  result.family_b.reserve(static_cast<std::size_t>(points));

  const auto evaluate = [](double first_row_entry, double x) {
    Matrix M(2, 2);
    M << 1.0, 1.0, first_row_entry, x;
    const MatrixNorms mn = norms(M);
    return ToyFig2Result::Row{x, mn.nuclear, pssv_norm(M, 1)};
  };

  for (int i = 0; i < points; ++i) {
    const double x = i * step;
    result.family_a.push_back(evaluate(3.0, x));
    result.family_b.push_back(evaluate(1.0, x));
  }

  const auto argmin = [](const std::vector<ToyFig2Result::Row>& rows,
                         const bool use_pssv) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double v = use_pssv ? rows[i].pssv : rows[i].nuclear;
      const double b = use_pssv ? rows[best].pssv : rows[best].nuclear;
      if (v < b) best = i;
    }
    return rows[best].x;
  };

  result.argmin_nuclear_a = argmin(result.family_a, false);
  result.argmin_pssv_a = argmin(result.family_a, true);
  result.argmin_nuclear_b = argmin(result.family_b, false);
  result.argmin_pssv_b = argmin(result.family_b, true);

  const auto sigma_at = [](double first_row_entry, double x) {
    Matrix M(2, 2);
    M << 1.0, 1.0, first_row_entry, x;
    return singular_values(M);
  };
  result.sigma_at_nuclear_argmin_a = sigma_at(3.0, result.argmin_nuclear_a);
  result.sigma_at_pssv_argmin_a = sigma_at(3.0, result.argmin_pssv_a);
  return result;
}

InitSensitivityResult run_init_sensitivity(const InstanceSpec& inst, int n_inits,
                                           double init_scale, int threads,
                                           const RpcaConfig& base) {
  if (n_inits < 1) {
    throw std::invalid_argument("run_init_sensitivity: n_inits must be >= 1");
  }
  const SyntheticInstance data =
      make_instance(inst.m, inst.n, inst.rank, inst.corruption, inst.master_seed, 0);

  RpcaConfig cfg = base;
  cfg.target_rank = inst.rank;

  // Perturbations are drawn around the solver's zero start (A = E = 0 plus
  // the scaled multiplier), so init_scale -> 0 recovers the default solve.
  const double lambda = cfg.lambda.value_or(
      1.0 / std::sqrt(static_cast<double>(std::max(inst.m, inst.n))));
  const double sigma1 = singular_values(data.O)(0);
  const Matrix Z_default =
      data.O / std::max(sigma1, data.O.cwiseAbs().maxCoeff() / lambda);
  const double amplitude = init_scale * data.O.cwiseAbs().maxCoeff();

  InitSensitivityResult result;
  result.nrmse.assign(static_cast<std::size_t>(n_inits), 0.0);

  parallel_for(n_inits, threads, [&](int i) {
    std::optional<RpcaInit> init;
    if (amplitude != 0.0) {
      PrngStream stream(inst.master_seed, 1000 + static_cast<std::uint64_t>(i));
      const auto noise = [&](PrngStream& s) {
        Matrix X(inst.m, inst.n);
        for (Index c = 0; c < inst.n; ++c) {
          for (Index r = 0; r < inst.m; ++r) X(r, c) = amplitude * s.uniform_signed();
        }
        return X;
      };
      RpcaInit custom;
      custom.A0 = noise(stream);
      custom.E0 = noise(stream);
      custom.Z0 = Z_default + noise(stream);
      init = std::move(custom);
    }
    const RpcaSolution sol = solve_rpca(data.O, cfg, {}, init);
    result.nrmse[static_cast<std::size_t>(i)] = nrmse(data.A_gt, sol.A);
  });

  int below = 0;
  for (const double v : result.nrmse) {
    below += v < kSuccessNrmseThreshold ? 1 : 0;
  }
  result.fraction_below_threshold = static_cast<double>(below) / n_inits;
  return result;
}

LambdaSweepResult run_lambda_sweep(const InstanceSpec& inst,
                                   const std::vector<double>& L_values,
                                   int trials, int threads,
                                   const RpcaConfig& base) {
  if (L_values.empty()) {
    throw std::invalid_argument("run_lambda_sweep: no L values");
  }
  for (const double L : L_values) {
    if (!(L > 0.0)) throw std::invalid_argument("run_lambda_sweep: L must be > 0");
  }
  if (trials < 1) throw std::invalid_argument("run_lambda_sweep: trials must be >= 1");

  const double denom = std::sqrt(static_cast<double>(std::max(inst.m, inst.n)));
  const int n_L = static_cast<int>(L_values.size());
  const int n_jobs = n_L * trials;

  std::vector<double> nrmse_pssv(static_cast<std::size_t>(n_jobs));
  std::vector<double> nrmse_nuclear(static_cast<std::size_t>(n_jobs));

  parallel_for(n_jobs, threads, [&](int job) {
    const int li = job / trials;
    const int trial = job % trials;
    const SyntheticInstance data =
        make_instance(inst.m, inst.n, inst.rank, inst.corruption, inst.master_seed,
                      static_cast<std::uint64_t>(trial));
    RpcaConfig cfg = base;
    cfg.lambda = L_values[static_cast<std::size_t>(li)] / denom;

    cfg.target_rank = inst.rank;
    nrmse_pssv[static_cast<std::size_t>(job)] =
        nrmse(data.A_gt, solve_rpca(data.O, cfg).A);

    cfg.target_rank = 0;
    nrmse_nuclear[static_cast<std::size_t>(job)] =
        nrmse(data.A_gt, solve_rpca(data.O, cfg).A);
  });

  LambdaSweepResult result;
  for (int li = 0; li < n_L; ++li) {
    double sum_p = 0.0;
    double sum_n = 0.0;
    for (int t = 0; t < trials; ++t) {
      sum_p += nrmse_pssv[static_cast<std::size_t>(li * trials + t)];
      sum_n += nrmse_nuclear[static_cast<std::size_t>(li * trials + t)];
    }
    const double L = L_values[static_cast<std::size_t>(li)];
    result.rows.push_back({L, L / denom, sum_p / trials, sum_n / trials});
  }
  return result;
}

ConvergenceTraceResult run_convergence_trace(Index m, Index n,
                                             const std::vector<Index>& ranks,
                                             double corruption, int trials,
                                             std::uint64_t master_seed,
                                             int threads,
                                             const RpcaConfig& base) {
  if (ranks.empty()) {
    throw std::invalid_argument("run_convergence_trace: no ranks");
  }
  if (trials < 1) {
    throw std::invalid_argument("run_convergence_trace: trials must be >= 1");
  }

  struct TrialTrace {
    std::vector<double> combined_error;
    std::vector<double> feasibility;
  };

  const std::vector<Method> methods = {Method::kPssv, Method::kNuclear};
  const int n_ranks = static_cast<int>(ranks.size());
  const int n_jobs = n_ranks * trials * 2;

  std::vector<TrialTrace> traces(static_cast<std::size_t>(n_jobs));

  parallel_for(n_jobs, threads, [&](int job) {
    const int mi = job % 2;
    const int trial = (job / 2) % trials;
    const Index rank = ranks[static_cast<std::size_t>(job / (2 * trials))];

    const SyntheticInstance data = make_instance(m, n, rank, corruption, master_seed,
                                                 static_cast<std::uint64_t>(trial));
    const double norm_E = data.E_gt.norm();

    TrialTrace& trace = traces[static_cast<std::size_t>(job)];
    const RpcaObserver observer = [&](const RpcaIterationView& view) {
      double combined = nrmse(data.A_gt, view.A_next);
      if (norm_E > 0.0) combined += (data.E_gt - view.E_next).norm() / norm_E;
      trace.combined_error.push_back(combined);
    };

    RpcaConfig cfg = base;
    cfg.target_rank = methods[static_cast<std::size_t>(mi)] == Method::kPssv ? rank : 0;
    const RpcaSolution sol = solve_rpca(data.O, cfg, observer);
    trace.feasibility.reserve(sol.trace.size());
    for (const auto& rec : sol.trace) trace.feasibility.push_back(rec.feasibility);
  });

  ConvergenceTraceResult result;
  for (int ri = 0; ri < n_ranks; ++ri) {
    for (int mi = 0; mi < 2; ++mi) {
      ConvergenceTraceResult::Series series;
      series.method = methods[static_cast<std::size_t>(mi)];
      series.rank = ranks[static_cast<std::size_t>(ri)];

      std::size_t longest = 0;
      for (int t = 0; t < trials; ++t) {
        const auto& tr = traces[static_cast<std::size_t>((ri * trials + t) * 2 + mi)];
        longest = std::max(longest, tr.feasibility.size());
      }
      series.combined_error.assign(longest, 0.0);
      series.feasibility.assign(longest, 0.0);

      double sum_iters = 0.0;
      double worst_final = 0.0;
      for (int t = 0; t < trials; ++t) {
        const auto& tr = traces[static_cast<std::size_t>((ri * trials + t) * 2 + mi)];
        sum_iters += static_cast<double>(tr.feasibility.size());
        worst_final = std::max(worst_final, tr.feasibility.back());
        for (std::size_t k = 0; k < longest; ++k) {
          const std::size_t idx = std::min(k, tr.feasibility.size() - 1);
          series.combined_error[k] += tr.combined_error[idx];
          series.feasibility[k] += tr.feasibility[idx];
        }
      }
      for (std::size_t k = 0; k < longest; ++k) {
        series.combined_error[k] /= trials;
        series.feasibility[k] /= trials;
      }
      series.mean_iterations = sum_iters / trials;
      series.final_feasibility_max = worst_final;
      result.series.push_back(std::move(series));
    }
  }
  return result;
}

}  // namespace pssv
