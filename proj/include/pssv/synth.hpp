#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "pssv/dense_matrix.hpp"
#include "pssv/mask.hpp"

namespace pssv {

// Seeded, portable random stream. The engine is std::mt19937_64 (bit-exact
// across platforms by the standard); doubles are derived from raw 64-bit
// output rather than std::uniform_real_distribution, whose mapping is
// implementation-defined. Identical (master_seed, stream_index) therefore
// reproduce identical draws everywhere. Parallel trials use disjoint stream
// indices; there is no shared generator state.
class PrngStream {
 public:
  explicit PrngStream(std::uint64_t master_seed, std::uint64_t stream_index = 0);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform double in [-1, 1).
  double uniform_signed();

  /// Uniform integer in [0, n), rejection-sampled (no modulo bias). n > 0.
  std::uint64_t bounded(std::uint64_t n);

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
};

// Ground-truth instance for the synthetic studies: O = A_gt + E_gt exactly,
// rank(A_gt) = true_rank, and E_gt has round(m * n * corruption_ratio)
// non-zeros.
struct SyntheticInstance {
  Matrix A_gt;
  Matrix E_gt;
  Matrix O;
  Index true_rank = 0;
  double corruption_ratio = 0.0;
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

enum class CorruptionModel {
  kReplace,   // observed entry becomes the U[0,1) draw; E = O - A
  kAdditive,  // the U[0,1) draw is added on top; E is the draw itself
};

/// Random m x n matrix of rank exactly `rank`: a random orthogonal basis
/// (m x rank, U[0,1) draws orthogonalized without normalization) times
/// per-column weight vectors with U[0,1) entries.
Matrix gen_low_rank(Index m, Index n, Index rank, PrngStream& stream);

/// Corrupts round(m * n * ratio) distinct entries of A with U[0,1) noise.
/// Returns (E_gt, O) with O = A + E_gt exactly. Positions are chosen
/// uniformly without replacement via a partial Fisher-Yates shuffle of
/// row-major linear indices; noise draws follow in selection order.
std::pair<Matrix, Matrix> corrupt_sparse(
    const Matrix& A, double ratio, PrngStream& stream,
    CorruptionModel model = CorruptionModel::kReplace);

/// A = U diag(sigmas) V^T with random orthonormal U (m x k), V (n x k);
/// realizes spectra with prescribed (possibly unbalanced) singular values.
Matrix gen_unbalanced(Index m, Index n, const std::vector<double>& sigmas,
                      PrngStream& stream);

/// Uniformly samples round(m * n * observe_fraction) distinct positions.
/// observe_fraction must lie in (0, 1].
ObservationMask gen_mask(Index m, Index n, double observe_fraction,
                         PrngStream& stream);

/// gen_low_rank + corrupt_sparse on a single stream (master_seed, stream_index).
SyntheticInstance make_instance(Index m, Index n, Index rank, double ratio,
                                std::uint64_t master_seed,
                                std::uint64_t stream_index,
                                CorruptionModel model = CorruptionModel::kReplace);

}  // namespace pssv
