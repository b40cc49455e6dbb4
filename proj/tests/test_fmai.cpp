#include <gtest/gtest.h>

#include "traceiso/fmai.hpp"
#include "traceiso/lie.hpp"

using namespace traceiso;

namespace {

MatrixFp unit(Index w, Index i, Index j) {
  MatrixFp e = MatrixFp::Zero(w, w);
  e(i, j) = Fp(1);
  return e;
}

AlgebraInput matrix_algebra(Index w) {
  AlgebraInput a{w, {}};
  for (Index i = 0; i < w; ++i)
    for (Index j = 0; j < w; ++j) a.basis.push_back(unit(w, i, j));
  return a;
}

// Coefficient of x0[a0] x1[a1] x2[a2] x3[a3] in Tr-IMM_{2,4}, flattened like the constrained tensor.
VectorFp trimm_coefficients() {
  const TrimmShape s{2, 4};
  const MultiPoly f = trimm_explicit(s);
  const Index b = s.block_size();
  VectorFp v = VectorFp::Zero(b * b * b * b);
  for (Index t = 0; t < v.size(); ++t) {
    MultiPoly::Exponents e(static_cast<std::size_t>(s.n()), 0);
    Index rest = t;
    for (int k = 3; k >= 0; --k) {
      ++e[static_cast<std::size_t>(k * b + rest % b)];
      rest /= b;
    }
    v(t) = f.coefficient(e);
  }
  return v;
}

std::vector<MatrixFp> transposes(const std::vector<MatrixFp>& ms) {
  std::vector<MatrixFp> out;
  for (const auto& m : ms) out.push_back(m.transpose());
  return out;
}

}  // namespace

TEST(LeftMult, ReproducesProducts) {
  AlgebraInput a = matrix_algebra(2);
  auto left = left_mult_matrices(a);
  ASSERT_EQ(left.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t c = 0; c < 4; ++c) {
      VectorFp coords = VectorFp::Unit(4, static_cast<Index>(c));
      VectorFp expected = *algebra_coordinates(a, MatrixFp(a.basis[i] * a.basis[c]));
      EXPECT_EQ(VectorFp(left[i] * coords), expected);
    }
}

TEST(LeftMult, IdentityElementActsTrivially) {
  AlgebraInput a = matrix_algebra(2);
  a.basis[0] = MatrixFp::Identity(2, 2);
  auto left = left_mult_matrices(a);
  EXPECT_EQ(left[0], MatrixFp(MatrixFp::Identity(4, 4)));
}

TEST(LeftMult, NonClosedSpanThrows) {
  Rng rng(1);
  AlgebraInput a{3, {}};
  for (int t = 0; t < 4; ++t) a.basis.push_back(random_matrix(rng, 3, 3));
  EXPECT_THROW(left_mult_matrices(a), NotClosed);
}

TEST(LeftMult, DependentBasisThrows) {
  AlgebraInput a = matrix_algebra(2);
  a.basis[3] = a.basis[0];
  EXPECT_THROW(left_mult_matrices(a), InputError);
}

TEST(Commutant, Examples) {
  EXPECT_EQ(commutant_basis({MatrixFp::Identity(3, 3)}).size(), 9u);

  Rng rng(2);
  const int w = 2;
  MatrixFp k = random_invertible(rng, 4);
  std::vector<MatrixFp> family;
  for (Index i = 0; i < w; ++i)
    for (Index j = 0; j < w; ++j) family.push_back(inverse(k) * kron(MatrixFp::Identity(w, w), unit(w, i, j)) * k);
  auto comm = commutant_basis(family);
  ASSERT_EQ(comm.size(), 4u);
  SpanBasis<Fp> expected(16);
  for (Index i = 0; i < w; ++i)
    for (Index j = 0; j < w; ++j) expected.insert(flatten(MatrixFp(inverse(k) * kron(unit(w, i, j), MatrixFp::Identity(w, w)) * k)));
  SpanBasis<Fp> got(16);
  for (const auto& c : comm) got.insert(flatten(c));
  EXPECT_TRUE(got.same_span(expected));

  MatrixFp diag = MatrixFp::Zero(4, 4);
  for (Index i = 0; i < 4; ++i) diag(i, i) = Fp(i + 1);
  EXPECT_EQ(commutant_basis({diag}).size(), 4u);
}

TEST(ConstrainedTensor, IdentityConjugationGivesTrimm) {
  std::vector<MatrixFp> left;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) left.push_back(kron(MatrixFp::Identity(2, 2), unit(2, i, j)));
  auto comm = commutant_basis(transposes(left));
  MatrixFp space = constrained_tensor_space(left, comm, 2);
  ASSERT_EQ(space.cols(), 1);
  const VectorFp target = trimm_coefficients();
  Index pivot = 0;
  while (target(pivot).is_zero()) ++pivot;
  const VectorFp v = space.col(0) * (target(pivot) / space(pivot, 0));
  EXPECT_EQ(v, target);
}

TEST(ConstrainedTensor, PlantedAlgebrasHaveOneDimensionalSpace) {
  Rng rng(3);
  for (int seed = 0; seed < 10; ++seed) {
    auto left = left_mult_matrices(planted_algebra(2, rng));
    auto comm = commutant_basis(transposes(left));
    ASSERT_EQ(comm.size(), 4u);
    EXPECT_EQ(constrained_tensor_space(left, comm, 2).cols(), 1);
  }
}

TEST(ConstrainedTensor, ZeroSpaceIsDegenerate) {
  Rng rng(4);
  std::vector<MatrixFp> left{random_matrix(rng, 4, 4), random_matrix(rng, 4, 4)};
  std::vector<MatrixFp> comm{random_matrix(rng, 4, 4), random_matrix(rng, 4, 4)};
  EXPECT_THROW(build_constrained_tensor(left, comm, 2, rng), Degenerate);
}

TEST(Fmai, PlantedAlgebras) {
  Rng rng(5);
  QuadraticDetOracle det;
  MmtiOracle mmti(det);
  int ok = 0;
  for (int seed = 0; seed < 5; ++seed) {
    AlgebraInput a = planted_algebra(2, rng);
    RunLog log;
    auto iso = fmai_solve(a, mmti, rng, &log);
    if (iso.ok() && verify_algebra_iso(a, *iso)) ++ok;
    else if (!iso.ok()) ADD_FAILURE() << iso.rejection().gate << ": " << iso.rejection().detail;
  }
  EXPECT_EQ(ok, 5);
}

TEST(Fmai, CanonicalMatrixAlgebra) {
  Rng rng(6);
  QuadraticDetOracle det;
  MmtiOracle mmti(det);
  AlgebraInput a = matrix_algebra(2);
  auto iso = fmai_solve(a, mmti, rng);
  ASSERT_TRUE(iso.ok()) << iso.rejection().gate << ": " << iso.rejection().detail;
  EXPECT_TRUE(verify_algebra_iso(a, *iso));
}

TEST(Fmai, DiagonalAlgebraIsRejected) {
  Rng rng(7);
  QuadraticDetOracle det;
  MmtiOracle mmti(det);
  AlgebraInput a = diagonal_algebra(4);
  auto left = left_mult_matrices(a);
  // the commutant of four distinct diagonal idempotents is the diagonal matrices
  EXPECT_EQ(commutant_basis(transposes(left)).size(), 4u);
  EXPECT_FALSE(fmai_solve(a, mmti, rng).ok());
}

TEST(Fmai, WrongBasisSize) {
  Rng rng(8);
  QuadraticDetOracle det;
  MmtiOracle mmti(det);
  auto res = fmai_solve(diagonal_algebra(3), mmti, rng);
  ASSERT_FALSE(res.ok());
  EXPECT_EQ(res.rejection().gate, "basis-size");
}

TEST(Fmai, BrokenIsomorphismFailsVerification) {
  AlgebraInput a = matrix_algebra(2);
  AlgebraIso iso{2, a.basis};
  EXPECT_TRUE(verify_algebra_iso(a, iso));
  std::swap(iso.images[1], iso.images[2]);
  EXPECT_FALSE(verify_algebra_iso(a, iso));
}
