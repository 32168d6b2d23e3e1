#pragma once

#include <string>

#include "pssv/dense_matrix.hpp"
#include "pssv/harness.hpp"
#include "pssv/mask.hpp"

namespace pssv {

// Matrix CSV: plain numeric rows, comma-separated, no header, one line per
// matrix row. Written with 17 significant digits so a read-back reproduces
// every entry exactly. Parse errors throw std::runtime_error naming the
// offending line.
Matrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const Matrix& X, const std::string& path);

// PGM: P2 (ASCII) or P5 (binary) grayscale with maxval <= 255, mapped to a
// matrix of values in [0, 255]. Writing clamps to [0, 255] and rounds.
Matrix read_pgm(const std::string& path);
void write_pgm(const Matrix& X, const std::string& path, bool binary = true);

/// True if the path ends in .pgm (case-insensitive).
bool has_pgm_extension(const std::string& path);

// Result CSVs. Column order is fixed and formatting deterministic, so a
// repeated run with the same seed produces byte-identical files.
void write_phase_diagram_csv(const ExperimentResult& result,
                             const std::string& path);
void write_deficiency_map_csv(const ExperimentResult& result,
                              const std::string& path);
void write_toy_fig2_csv(const ToyFig2Result& result, const std::string& path);
void write_init_sensitivity_csv(const InitSensitivityResult& result,
                                const std::string& path);
void write_lambda_sweep_csv(const LambdaSweepResult& result,
                            const std::string& path);
void write_convergence_trace_csv(const ConvergenceTraceResult& result,
                                 const std::string& path);
void write_solver_trace_csv(const IterationTrace& trace,
                            const std::string& path);

}  // namespace pssv
