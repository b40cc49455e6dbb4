#pragma once

#include <stdexcept>
#include <vector>

#include "traceiso/blackbox.hpp"
#include "traceiso/outcome.hpp"

namespace traceiso {

struct CertificationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Basis of the Lie algebra {E : sum_ij E_ij x_j df/dx_i = 0}.
struct LieBasis {
  Index n = 0;
  std::vector<MatrixFp> basis;

  Index dim() const { return static_cast<Index>(basis.size()); }
  /// Span as a subspace of F^(n*n), row-major flattening.
  SpanBasis<Fp> span() const;
};

struct InvariantSubspace {
  MatrixFp basis;  // columns

  Index dim() const { return basis.cols(); }
};

enum class LieMode { Sampled, Exact };

/// Flatten row-major into an n^2 vector, and back.
VectorFp flatten(const MatrixFp& e);
MatrixFp unflatten(const VectorFp& v, Index n);

/// Throws CertificationFailed if a sampled basis element fails its PIT twice in a row.
LieBasis lie_algebra_basis(const Blackbox& f, Rng& rng, LieMode mode = LieMode::Sampled);

/// True if grad f . (E x) vanishes at `trials` random points.
bool lie_identity_holds(const Blackbox& f, const MatrixFp& e, int trials, Rng& rng);

MatrixFp random_element(const LieBasis& lie, Rng& rng);

/// Smallest subspace containing v and closed under every basis element.
InvariantSubspace closure(const VectorFp& v, const LieBasis& lie);

/// One pass of the subspace search; rejects at the first failing gate.
Outcome<std::vector<InvariantSubspace>> invariant_subspaces_once(const Blackbox& f, Rng& rng);

/// Retries square-free and certification failures up to three times.
Outcome<std::vector<InvariantSubspace>> irreducible_invariant_subspaces(const Blackbox& f, Rng& rng,
                                                                       RunLog* log = nullptr);

}  // namespace traceiso
