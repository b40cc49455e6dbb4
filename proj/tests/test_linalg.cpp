#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "traceiso/linalg.hpp"
#include "traceiso/poly.hpp"

using namespace traceiso;

namespace {

// Leibniz expansion: independent determinant oracle for small matrices.
Fp leibniz_det(const MatrixFp& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Fp total(0);
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
    Fp term(inversions % 2 ? -1 : 1);
    for (int i = 0; i < n; ++i) term *= a(i, perm[static_cast<std::size_t>(i)]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

MatrixFp low_rank(Rng& rng, Index rows, Index cols, Index r) {
  return random_matrix(rng, rows, r) * random_matrix(rng, r, cols);
}

}  // namespace

TEST(Linalg, RankNullityAndKernel) {
  Rng rng(1);
  for (Index r = 0; r <= 6; ++r) {
    MatrixFp a = low_rank(rng, 7, 9, r);
    EXPECT_EQ(rank(a), r);
    MatrixFp n = nullspace(a);
    EXPECT_EQ(n.cols(), 9 - r);
    EXPECT_TRUE(is_zero(MatrixFp(a * n)));
    EXPECT_EQ(rank(n), n.cols());
  }
}

TEST(Linalg, SmallPrimeExample) {
  ModulusScope scope{PrimeModulus(7)};
  MatrixFp a(2, 3);
  a << Fp(1), Fp(2), Fp(3), Fp(2), Fp(4), Fp(6);
  EXPECT_EQ(rank(a), 1);
  EXPECT_EQ(nullspace(a).cols(), 2);
  MatrixFp i2 = MatrixFp::Identity(2, 2);
  EXPECT_EQ(inverse(i2), i2);
}

TEST(Linalg, SolveConsistentAndInconsistent) {
  Rng rng(2);
  MatrixFp a = low_rank(rng, 6, 5, 3);
  VectorFp x = random_vector(rng, 5);
  VectorFp b = a * x;
  auto sol = solve_linear(a, b);
  ASSERT_TRUE(sol.has_value());
  EXPECT_EQ(VectorFp(a * *sol), b);
  VectorFp bad = b;
  bool found_inconsistent = false;
  for (int t = 0; t < 5 && !found_inconsistent; ++t) {
    bad(0) += Fp(1 + t);
    found_inconsistent = !solve_linear(a, bad).has_value();
  }
  EXPECT_TRUE(found_inconsistent);
}

TEST(Linalg, InverseAndDeterminantAgainstLeibniz) {
  Rng rng(3);
  for (Index n = 1; n <= 6; ++n) {
    MatrixFp a = random_matrix(rng, n, n);
    EXPECT_EQ(determinant(a), leibniz_det(a));
    MatrixFp inv = inverse(a);
    EXPECT_EQ(MatrixFp(a * inv), MatrixFp::Identity(n, n));
  }
  MatrixFp singular = low_rank(rng, 4, 4, 3);
  EXPECT_EQ(determinant(singular), Fp(0));
  EXPECT_THROW(inverse(singular), SingularMatrix);
  EXPECT_THROW(determinant(MatrixFp(2, 3)), ShapeMismatch);
}

TEST(Linalg, CharPolyMatchesInterpolatedDeterminant) {
  Rng rng(4);
  for (Index n : {1, 2, 3, 5, 7}) {
    MatrixFp a = random_matrix(rng, n, n);
    if (n == 5) a.row(2).setZero();  // forces a zero subdiagonal pivot search
    std::vector<Fp> ts, vs;
    for (Index t = 0; t <= n; ++t) {
      ts.push_back(Fp(static_cast<long long>(t)));
      MatrixFp m = Fp(static_cast<long long>(t)) * MatrixFp::Identity(n, n) - a;
      vs.push_back(leibniz_det(m));
    }
    UniPolyFp oracle = interpolate_univariate<Fp>(ts, vs);
    EXPECT_EQ(UniPolyFp(char_poly(a)), oracle) << "n = " << n;
  }
}

TEST(Linalg, CharPolyOfUpperTriangular) {
  MatrixFp a = MatrixFp::Zero(3, 3);
  a(0, 0) = Fp(2);
  a(1, 1) = Fp(3);
  a(2, 2) = Fp(5);
  a(0, 2) = Fp(9);
  UniPolyFp expected = UniPolyFp({Fp(-2), Fp(1)}) * UniPolyFp({Fp(-3), Fp(1)}) * UniPolyFp({Fp(-5), Fp(1)});
  EXPECT_EQ(UniPolyFp(char_poly(a)), expected);
}

TEST(Linalg, KroneckerMixedProduct) {
  Rng rng(5);
  MatrixFp a = random_matrix(rng, 2, 2), b = random_matrix(rng, 3, 3), c = random_matrix(rng, 2, 2),
           d = random_matrix(rng, 3, 3);
  EXPECT_EQ(MatrixFp(kron(a, b) * kron(c, d)), kron(MatrixFp(a * c), MatrixFp(b * d)));
  MatrixFp i2 = MatrixFp::Identity(2, 2);
  EXPECT_EQ(kron(i2, i2), MatrixFp::Identity(4, 4));
}

TEST(Linalg, SpanBasisMembership) {
  Rng rng(6);
  MatrixFp a = random_matrix(rng, 8, 3);
  SpanBasis<Fp> s = column_span(a);
  EXPECT_EQ(s.dim(), 3);
  VectorFp inside = a * random_vector(rng, 3);
  EXPECT_TRUE(s.contains(inside));
  EXPECT_FALSE(s.insert(inside));
  EXPECT_FALSE(s.contains(random_vector(rng, 8)));
  SpanBasis<Fp> t = column_span(MatrixFp(a * random_invertible(rng, 3)));
  EXPECT_TRUE(s.same_span(t));
}

TEST(Linalg, BlockDiagonalAssembly) {
  MatrixFp a = MatrixFp::Constant(1, 2, Fp(3));
  MatrixFp b = MatrixFp::Constant(2, 1, Fp(4));
  MatrixFp m = block_diagonal<Fp>({a, b});
  EXPECT_EQ(m.rows(), 3);
  EXPECT_EQ(m.cols(), 3);
  EXPECT_EQ(m(0, 1), Fp(3));
  EXPECT_EQ(m(2, 2), Fp(4));
  EXPECT_EQ(m(1, 0), Fp(0));
}
