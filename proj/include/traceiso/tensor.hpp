#pragma once

#include <optional>

#include "traceiso/oracles.hpp"
#include "traceiso/outcome.hpp"

namespace traceiso {

/// Point b with x(b) = E_ij; throws SingularMatrix if the entries of x are dependent.
VectorFp unit_point(const LinearMatrix& x, int i, int j);

/// Isomorphism of a d-tensor over w^2-sized blocks to Tr-IMM, using an MMTI oracle on a 3-block restriction.
Outcome<TensorIsoWitness> degree_d_to_3(const Blackbox& f, int w, const MmtiOracle& mmti, Rng& rng,
                                        const std::optional<MatrixFp>& embedding = {}, RunLog* log = nullptr);

}  // namespace traceiso
