#include "pssv/synth.hpp"

#include <Eigen/QR>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pssv {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
  std::uint64_t state = master_seed;
  const std::uint64_t a = splitmix64(state);
  state ^= stream_index;
  const std::uint64_t b = splitmix64(state);
  return a ^ (b + 0x9e3779b97f4a7c15ULL);
}

// Random matrix with U[0,1) entries, column by column.
Matrix uniform_matrix(Index m, Index n, PrngStream& stream) {
  Matrix X(m, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) X(i, j) = stream.uniform();
  }
  return X;
}

// Orthonormal m x k basis spanning the range of a random U[0,1) matrix.
Matrix random_orthonormal(Index m, Index k, PrngStream& stream) {
  const Matrix raw = uniform_matrix(m, k, stream);
  Eigen::HouseholderQR<Matrix> qr(raw);
  Matrix q = qr.householderQ() * Matrix::Identity(m, k);
  return q;
}

// Random orthogonal (not normalized) basis: U[0,1) draws with the projections
// onto earlier columns removed. Column norms grow like sqrt(m), so the
// planted spectrum keeps its natural scale relative to entry-wise noise.
Matrix random_orthogonal_basis(Index m, Index k, PrngStream& stream) {
  Matrix basis = uniform_matrix(m, k, stream);
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i < j; ++i) {
      basis.col(j) -=
          (basis.col(i).dot(basis.col(j)) / basis.col(i).squaredNorm()) *
          basis.col(i);
    }
  }
  return basis;
}

// First `count` positions of a partial Fisher-Yates shuffle over all
// row-major linear indices. Exact count, uniform without replacement.
std::vector<Index> sample_positions(Index m, Index n, Index count,
                                    PrngStream& stream) {
  const Index total = m * n;
  std::vector<Index> indices(static_cast<std::size_t>(total));
  std::iota(indices.begin(), indices.end(), Index{0});
  for (Index t = 0; t < count; ++t) {
    const Index j = t + static_cast<Index>(stream.bounded(
                            static_cast<std::uint64_t>(total - t)));
    std::swap(indices[static_cast<std::size_t>(t)],
              indices[static_cast<std::size_t>(j)]);
  }
  indices.resize(static_cast<std::size_t>(count));
  return indices;
}

}  // namespace

PrngStream::PrngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed),
      stream_index_(stream_index),
      engine_(derive_seed(master_seed, stream_index)) {}

double PrngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double PrngStream::uniform_signed() { return 2.0 * uniform() - 1.0; }

std::uint64_t PrngStream::bounded(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("PrngStream::bounded: n must be > 0");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

Matrix gen_low_rank(Index m, Index n, Index rank, PrngStream& stream) {
  if (rank < 1 || rank > std::min(m, n)) {
    throw std::invalid_argument("gen_low_rank: rank " + std::to_string(rank) +
                                " outside [1, min(m, n)]");
  }
  const Matrix basis = random_orthogonal_basis(m, rank, stream);
  const Matrix weights = uniform_matrix(rank, n, stream);
  return basis * weights;
}

std::pair<Matrix, Matrix> corrupt_sparse(const Matrix& A, double ratio,
                                         PrngStream& stream,
                                         CorruptionModel model) {
  require_finite(A, "corrupt_sparse");
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw std::invalid_argument("corrupt_sparse: ratio must lie in [0, 1]");
  }
  const Index m = A.rows();
  const Index n = A.cols();
  const Index count = static_cast<Index>(
      std::llround(static_cast<double>(m) * static_cast<double>(n) * ratio));

  Matrix E = Matrix::Zero(m, n);
  const std::vector<Index> positions = sample_positions(m, n, count, stream);
  for (const Index lin : positions) {
    const Index i = lin / n;  // row-major linear index
    const Index j = lin % n;
    const double noise = stream.uniform();
    E(i, j) = model == CorruptionModel::kReplace ? noise - A(i, j) : noise;
  }
  return {E, A + E};
}

Matrix gen_unbalanced(Index m, Index n, const std::vector<double>& sigmas,
                      PrngStream& stream) {
  const Index k = static_cast<Index>(sigmas.size());
  if (k < 1 || k > std::min(m, n)) {
    throw std::invalid_argument("gen_unbalanced: need 1 <= #sigmas <= min(m, n)");
  }
  const Matrix U = random_orthonormal(m, k, stream);
  const Matrix V = random_orthonormal(n, k, stream);
  Vector d(k);
  for (Index i = 0; i < k; ++i) d(i) = sigmas[static_cast<std::size_t>(i)];
  return U * d.asDiagonal() * V.transpose();
}

ObservationMask gen_mask(Index m, Index n, double observe_fraction,
                         PrngStream& stream) {
  if (!(observe_fraction > 0.0 && observe_fraction <= 1.0)) {
    throw std::invalid_argument("gen_mask: fraction must lie in (0, 1]");
  }
  const Index count = static_cast<Index>(std::llround(
      static_cast<double>(m) * static_cast<double>(n) * observe_fraction));

  ObservationMask mask;
  mask.rows = m;
  mask.cols = n;
  mask.observed.reserve(static_cast<std::size_t>(count));
  for (const Index lin : sample_positions(m, n, count, stream)) {
    mask.observed.emplace_back(lin / n, lin % n);
  }
  return mask;
}

SyntheticInstance make_instance(Index m, Index n, Index rank, double ratio,
                                std::uint64_t master_seed,
                                std::uint64_t stream_index,
                                CorruptionModel model) {
  PrngStream stream(master_seed, stream_index);
  SyntheticInstance inst;
  inst.A_gt = gen_low_rank(m, n, rank, stream);
  auto [E, O] = corrupt_sparse(inst.A_gt, ratio, stream, model);
  inst.E_gt = std::move(E);
  inst.O = std::move(O);
  inst.true_rank = rank;
  inst.corruption_ratio = ratio;
  inst.master_seed = master_seed;
  inst.stream_index = stream_index;
  return inst;
}

}  // namespace pssv
