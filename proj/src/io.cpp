#include "pssv/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pssv {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw std::runtime_error(path + ": " + message);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  return out;
}

double parse_double(std::string_view token, const std::string& path, int line) {
  // trim surrounding whitespace
  while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) {
    token.remove_prefix(1);
  }
  while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) {
    token.remove_suffix(1);
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    fail(path, "line " + std::to_string(line) + ": cannot parse value '" +
                   std::string(token) + "'");
  }
  return value;
}

}  // namespace

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open for reading");

  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<double> row;
    std::size_t begin = 0;
    while (true) {
      const std::size_t comma = line.find(',', begin);
      const std::size_t end = comma == std::string::npos ? line.size() : comma;
      row.push_back(parse_double(
          std::string_view(line).substr(begin, end - begin), path, line_no));
      if (comma == std::string::npos) break;
      begin = comma + 1;
    }

    if (width == 0) {
      width = row.size();
    } else if (row.size() != width) {
      fail(path, "line " + std::to_string(line_no) + ": expected " +
                     std::to_string(width) + " values, got " +
                     std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(path, "no numeric rows");

  Matrix X(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      X(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return X;
}

void write_matrix_csv(const Matrix& X, const std::string& path) {
  std::ofstream out = open_output(path);
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index j = 0; j < X.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(X(i, j));
    }
    out << '\n';
  }
  if (!out) fail(path, "write failed");
}

namespace {

// Reads the next whitespace-delimited token of a PGM header, skipping
// '#' comments.
std::string next_pgm_token(std::istream& in) {
  std::string token;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c)) {
    token.push_back(static_cast<char>(c));
    c = in.get();
  }
  return token;
}

long parse_pgm_int(std::istream& in, const std::string& path, const char* what) {
  const std::string token = next_pgm_token(in);
  if (token.empty()) fail(path, std::string("truncated header, missing ") + what);
  long value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || value < 0) {
    fail(path, std::string("bad ") + what + " '" + token + "'");
  }
  return value;
}

}  // namespace

Matrix read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");

  const std::string magic = next_pgm_token(in);
  if (magic != "P2" && magic != "P5") fail(path, "not a P2/P5 PGM file");
  const long cols = parse_pgm_int(in, path, "width");
  const long rows = parse_pgm_int(in, path, "height");
  const long maxval = parse_pgm_int(in, path, "maxval");
  if (cols < 1 || rows < 1) fail(path, "empty image");
  if (maxval < 1 || maxval > 255) fail(path, "maxval must be in [1, 255]");

  Matrix X(rows, cols);
  if (magic == "P2") {
    for (long i = 0; i < rows; ++i) {
      for (long j = 0; j < cols; ++j) {
        X(i, j) = static_cast<double>(parse_pgm_int(in, path, "pixel"));
      }
    }
  } else {
    // single whitespace byte separates the header from the raster
    std::vector<unsigned char> raster(static_cast<std::size_t>(rows * cols));
    in.read(reinterpret_cast<char*>(raster.data()),
            static_cast<std::streamsize>(raster.size()));
    if (in.gcount() != static_cast<std::streamsize>(raster.size())) {
      fail(path, "truncated raster");
    }
    for (long i = 0; i < rows; ++i) {
      for (long j = 0; j < cols; ++j) {
        X(i, j) = static_cast<double>(raster[static_cast<std::size_t>(i * cols + j)]);
      }
    }
  }
  return X;
}

void write_pgm(const Matrix& X, const std::string& path, bool binary) {
  std::ofstream out = open_output(path);
  out << (binary ? "P5" : "P2") << '\n'
      << X.cols() << ' ' << X.rows() << '\n'
      << 255 << '\n';
  const auto quantize = [](double v) {
    return static_cast<int>(std::lround(std::clamp(v, 0.0, 255.0)));
  };
  if (binary) {
    std::vector<unsigned char> raster(static_cast<std::size_t>(X.size()));
    for (Index i = 0; i < X.rows(); ++i) {
      for (Index j = 0; j < X.cols(); ++j) {
        raster[static_cast<std::size_t>(i * X.cols() + j)] =
            static_cast<unsigned char>(quantize(X(i, j)));
      }
    }
    out.write(reinterpret_cast<const char*>(raster.data()),
              static_cast<std::streamsize>(raster.size()));
  } else {
    for (Index i = 0; i < X.rows(); ++i) {
      for (Index j = 0; j < X.cols(); ++j) {
        if (j > 0) out << ' ';
        out << quantize(X(i, j));
      }
      out << '\n';
    }
  }
  if (!out) fail(path, "write failed");
}

bool has_pgm_extension(const std::string& path) {
  if (path.size() < 4) return false;
  std::string tail = path.substr(path.size() - 4);
  std::transform(tail.begin(), tail.end(), tail.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return tail == ".pgm";
}

namespace {

const char* axis_name(PhaseDiagramSpec::Axis axis) {
  return axis == PhaseDiagramSpec::Axis::kColumns ? "columns" : "rows";
}

void write_sweep_csv(const ExperimentResult& result, const std::string& path,
                     bool deficiency_view) {
  std::ofstream out = open_output(path);
  out << "axis,fixed_dim,true_rank,trials,param,corruption,method,";
  if (deficiency_view) {
    out << "deficient_fraction,mean_deficiency_ratio,success_ratio\n";
  } else {
    out << "success_ratio,mean_nrmse,mean_deficiency_ratio,deficient_fraction,"
           "mean_iterations\n";
  }
  for (const auto& cell : result.cells) {
    for (const auto& stats : cell.per_method) {
      out << axis_name(result.spec.swept_axis) << ',' << result.spec.fixed_dim << ','
          << result.spec.true_rank << ',' << result.spec.trials << ',' << cell.param
          << ',' << format_short(cell.corruption) << ',' << method_name(stats.method)
          << ',';
      if (deficiency_view) {
        out << format_short(stats.deficient_fraction) << ','
            << format_short(stats.mean_deficiency_ratio) << ','
            << format_short(stats.success_ratio) << '\n';
      } else {
        out << format_short(stats.success_ratio) << ','
            << format_short(stats.mean_nrmse) << ','
            << format_short(stats.mean_deficiency_ratio) << ','
            << format_short(stats.deficient_fraction) << ','
            << format_short(stats.mean_iterations) << '\n';
      }
    }
  }
  if (!out) fail(path, "write failed");
}

}  // namespace

void write_phase_diagram_csv(const ExperimentResult& result,
                             const std::string& path) {
  write_sweep_csv(result, path, false);
}

void write_deficiency_map_csv(const ExperimentResult& result,
                              const std::string& path) {
  write_sweep_csv(result, path, true);
}

void write_toy_fig2_csv(const ToyFig2Result& result, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "family,x,nuclear,pssv,is_nuclear_argmin,is_pssv_argmin\n";
  const auto emit = [&](const char* family,
                        const std::vector<ToyFig2Result::Row>& rows,
                        double argmin_nuclear, double argmin_pssv) {
    for (const auto& row : rows) {
      out << family << ',' << format_short(row.x) << ','
          << format_short(row.nuclear) << ',' << format_short(row.pssv) << ','
          << (row.x == argmin_nuclear ? 1 : 0) << ','
          << (row.x == argmin_pssv ? 1 : 0) << '\n';
    }
  };
  emit("a", result.family_a, result.argmin_nuclear_a, result.argmin_pssv_a);
  emit("b", result.family_b, result.argmin_nuclear_b, result.argmin_pssv_b);
  if (!out) fail(path, "write failed");
}

void write_init_sensitivity_csv(const InitSensitivityResult& result,
                                const std::string& path) {
  std::ofstream out = open_output(path);
  out << "init_index,nrmse,success\n";
  for (std::size_t i = 0; i < result.nrmse.size(); ++i) {
    out << i << ',' << format_short(result.nrmse[i]) << ','
        << (result.nrmse[i] < 0.01 ? 1 : 0) << '\n';
  }
  if (!out) fail(path, "write failed");
}

void write_lambda_sweep_csv(const LambdaSweepResult& result,
                            const std::string& path) {
  std::ofstream out = open_output(path);
  out << "L,lambda,mean_nrmse_pssv,mean_nrmse_nuclear\n";
  for (const auto& row : result.rows) {
    out << format_short(row.L) << ',' << format_short(row.lambda) << ','
        << format_short(row.mean_nrmse_pssv) << ','
        << format_short(row.mean_nrmse_nuclear) << '\n';
  }
  if (!out) fail(path, "write failed");
}

void write_convergence_trace_csv(const ConvergenceTraceResult& result,
                                 const std::string& path) {
  std::ofstream out = open_output(path);
  out << "method,rank,iteration,combined_error,feasibility\n";
  for (const auto& series : result.series) {
    for (std::size_t k = 0; k < series.feasibility.size(); ++k) {
      out << method_name(series.method) << ',' << series.rank << ',' << k + 1 << ','
          << format_short(series.combined_error[k]) << ','
          << format_short(series.feasibility[k]) << '\n';
    }
  }
  if (!out) fail(path, "write failed");
}

void write_solver_trace_csv(const IterationTrace& trace, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "iteration,feasibility,objective,lagrangian,mu\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << k + 1 << ',' << format_short(trace[k].feasibility) << ','
        << format_short(trace[k].objective) << ','
        << format_short(trace[k].lagrangian) << ',' << format_short(trace[k].mu)
        << '\n';
  }
  if (!out) fail(path, "write failed");
}

}  // namespace pssv
