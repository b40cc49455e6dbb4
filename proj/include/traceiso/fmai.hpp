#pragma once

#include <stdexcept>
#include <vector>

#include "traceiso/oracles.hpp"
#include "traceiso/outcome.hpp"

namespace traceiso {

struct NotClosed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Degenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Basis of a subalgebra of m x m matrices.
struct AlgebraInput {
  Index m = 0;
  std::vector<MatrixFp> basis;
};

/// images[a] is the image of basis element a in the w x w matrices.
struct AlgebraIso {
  int w = 0;
  std::vector<MatrixFp> images;
};

/// Coordinates of m in the basis; nullopt if m is outside the span.
std::optional<VectorFp> algebra_coordinates(const AlgebraInput& a, const MatrixFp& m);

/// Column c of matrix a holds the coordinates of basis[a] * basis[c].
std::vector<MatrixFp> left_mult_matrices(const AlgebraInput& a);

/// Basis of all matrices commuting with every element of `mats`.
std::vector<MatrixFp> commutant_basis(const std::vector<MatrixFp>& mats);

/// Solutions of the Lie constraints for a 4-tensor, one column per basis vector (w^8 coefficients).
MatrixFp constrained_tensor_space(const std::vector<MatrixFp>& left, const std::vector<MatrixFp>& commutant, int w);
/// Random nonzero element of constrained_tensor_space as a polynomial; throws Degenerate if the space is zero.
MultiPoly build_constrained_tensor(const std::vector<MatrixFp>& left, const std::vector<MatrixFp>& commutant, int w,
                                   Rng& rng);

Outcome<AlgebraIso> fmai_solve(const AlgebraInput& a, const MmtiOracle& mmti, Rng& rng, RunLog* log = nullptr);

/// Multiplicative on all basis pairs and onto the w x w matrices.
bool verify_algebra_iso(const AlgebraInput& a, const AlgebraIso& iso);

/// K^{-1} (I_w (x) M_w) K inside the w^2 x w^2 matrices, with a randomly mixed basis.
AlgebraInput planted_algebra(int w, Rng& rng);
/// Diagonal m x m matrices.
AlgebraInput diagonal_algebra(Index m);

}  // namespace traceiso
