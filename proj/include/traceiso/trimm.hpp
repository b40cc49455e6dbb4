#pragma once

#include <optional>
#include <vector>

#include "traceiso/blackbox.hpp"
#include "traceiso/linalg.hpp"

namespace traceiso {

/// Tr-IMM_{w,d} = tr(Q_0 Q_1 ... Q_{d-1}) over n = w^2 d variables.
struct TrimmShape {
  int w = 2;
  int d = 3;

  Index block_size() const { return static_cast<Index>(w) * w; }
  Index n() const { return block_size() * d; }
  /// Throws std::invalid_argument if w < 2, d < 3 or p <= n^5.
  void validate() const;
};

struct VarIndex {
  int k;
  int i;
  int j;
  Index flat;
};

/// Offset of entry (i, j) inside block k: row-major for even k, column-major for odd k.
inline Index block_offset(int w, int k, int i, int j) {
  return k % 2 == 0 ? static_cast<Index>(i) * w + j : static_cast<Index>(j) * w + i;
}

/// Flat variable index of entry (i, j) of Q_k (all indices zero-based).
Index var_index(const TrimmShape& shape, int k, int i, int j);
VarIndex var_position(const TrimmShape& shape, Index flat);

/// Q_0, ..., Q_{d-1} read off a point.
std::vector<MatrixFp> trimm_matrices(const TrimmShape& shape, std::span<const Fp> point);
Fp trimm_eval(const TrimmShape& shape, std::span<const Fp> point);
inline Fp trimm_eval(const TrimmShape& shape, const VectorFp& point) {
  return trimm_eval(shape, std::span<const Fp>(point.data(), static_cast<std::size_t>(point.size())));
}
Blackbox trimm_blackbox(const TrimmShape& shape);
/// Explicit expansion: w^d path monomials.
MultiPoly trimm_explicit(const TrimmShape& shape);

/// Set-multilinear polynomial with uniformly random coefficients on all b^d monomials.
MultiPoly random_tensor(const TrimmShape& shape, Rng& rng);

/// Element of the generator family B_k determined by a w x w matrix.
MatrixFp lie_generator(const TrimmShape& shape, int k, const MatrixFp& m);

/// The w x w linear matrix whose (i, j) entry is row block_offset(k, i, j) of `rows`.
LinearMatrix block_matrix_from_rows(int w, int k, const MatrixFp& rows);
/// Inverse of block_matrix_from_rows.
MatrixFp rows_from_block_matrix(int w, int k, const LinearMatrix& x);

enum class PlantMode { Full, Block };

struct PlantedInstance {
  TrimmShape shape;
  MatrixFp a;
  Blackbox f;
  /// Blocks of `a` when it is block-diagonal.
  std::optional<std::vector<MatrixFp>> blocks;
};

PlantedInstance plant_instance(const TrimmShape& shape, Rng& rng, PlantMode mode);
PlantedInstance instance_from_matrix(const TrimmShape& shape, const MatrixFp& a);
PlantedInstance instance_from_blocks(const TrimmShape& shape, const std::vector<MatrixFp>& blocks);

/// PIT of f against Tr-IMM(a x).
bool verify_witness(const Blackbox& f, const TrimmShape& shape, const MatrixFp& a, int trials, Rng& rng);
bool verify_witness(const Blackbox& f, const TrimmShape& shape, const std::vector<MatrixFp>& blocks, int trials,
                    Rng& rng);

}  // namespace traceiso
