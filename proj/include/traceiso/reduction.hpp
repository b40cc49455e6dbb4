#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "traceiso/abp.hpp"
#include "traceiso/oracles.hpp"
#include "traceiso/outcome.hpp"
#include "traceiso/trimm.hpp"

namespace traceiso {

struct AdjacencyStructureBroken : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StructureViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OrderingReport {
  std::vector<int> tau;
  std::vector<std::vector<Index>> evaldim_table;
};

/// Cyclic block order recovered from pairwise evaluation dimensions.
OrderingReport order_blocks(const Blackbox& g, const TrimmShape& shape, Rng& rng);

struct TensorReduction {
  MatrixFp a_prime;  // f(a_prime x) is a d-tensor
  int w = 0;
  OrderingReport ordering;
};

/// Change of variables turning f into a tensor over ordered blocks.
Outcome<TensorReduction> trace_to_tensor_iso(const Blackbox& f, Rng& rng, RunLog* log = nullptr);

struct Intertwiner {
  MatrixFp t;
  MatrixFp s;
  bool transposed = false;
};

/// Columns span the solutions (vec T; vec S), column-major vec, of T y = z S.
MatrixFp intertwiner_solutions(const LinearMatrix& y, const LinearMatrix& z);
/// Invertible T, S with T y = z S or T y = z^T S.
Outcome<Intertwiner> solve_intertwiner(const LinearMatrix& y, const LinearMatrix& z, Rng& rng);

struct KronFactor {
  MatrixFp m;
  LinearMatrix x;
};

/// Splits y = m (x) x; throws StructureViolation if y has no such form.
KronFactor factor_kron(const LinearMatrix& y, int w);

/// Blocks B_k with h = Tr-IMM(B_0 x_0, ...). `embedding` maps h's variables into the instance.
Outcome<TensorIsoWitness> tensor_iso_to_det(const Blackbox& h, int w, const DetOracle& det, Rng& rng,
                                            const std::optional<MatrixFp>& embedding = {}, RunLog* log = nullptr);

struct TraceWitness {
  int w = 0;
  MatrixFp a;  // f(x) = Tr-IMM(a x)
};

Outcome<TraceWitness> trace_equivalence(const Blackbox& f, const DetOracle& det, Rng& rng, RunLog* log = nullptr);

}  // namespace traceiso
