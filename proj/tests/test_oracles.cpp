#include <gtest/gtest.h>

#include "traceiso/oracles.hpp"
#include "traceiso/trimm.hpp"

using namespace traceiso;

namespace {

MultiPoly det2() {
  MultiPoly x0 = MultiPoly::variable(4, 0), x1 = MultiPoly::variable(4, 1);
  MultiPoly x2 = MultiPoly::variable(4, 2), x3 = MultiPoly::variable(4, 3);
  return x0 * x3 - x1 * x2;
}

// Explicit det2(B x) by expanding products of linear forms.
MultiPoly det2_composed(const MatrixFp& b) {
  auto form = [&](Index r) { return MultiPoly::linear_form(b.row(r).transpose()); };
  return form(0) * form(3) - form(1) * form(2);
}

MultiPoly random_quadratic_of_rank(Index r, Rng& rng) {
  MatrixFp c = random_matrix(rng, r, 4);
  MultiPoly g(4);
  for (Index i = 0; i < r; ++i) {
    MultiPoly l = MultiPoly::linear_form(c.row(i).transpose());
    g += rng.uniform_nonzero() * (l * l);
  }
  return g;
}

Fp nonresidue() {
  Fp v(2);
  while (is_square(v)) v += Fp(1);
  return v;
}

}  // namespace

TEST(QuadraticOracle, Det2ItselfIsAccepted) {
  Rng rng(1);
  auto x = det_oracle_w2(det2(), rng);
  ASSERT_TRUE(x.ok()) << x.rejection().detail;
  EXPECT_EQ(det_linear_matrix(*x), det2());
}

TEST(QuadraticOracle, ComposedWithRandomMatrices) {
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    const MultiPoly g = det2_composed(random_invertible(rng, 4));
    auto x = det_oracle_w2(g, rng);
    ASSERT_TRUE(x.ok()) << x.rejection().detail;
    EXPECT_EQ(det_linear_matrix(*x), g);
  }
}

TEST(QuadraticOracle, LowRankIsRejected) {
  Rng rng(3);
  MultiPoly square = MultiPoly::variable(4, 0) * MultiPoly::variable(4, 0);
  EXPECT_FALSE(det_oracle_w2(square, rng).ok());
  for (int t = 0; t < 20; ++t) {
    auto x = det_oracle_w2(random_quadratic_of_rank(1 + t % 3, rng), rng);
    ASSERT_FALSE(x.ok());
    EXPECT_EQ(x.rejection().gate, "det-oracle");
  }
}

TEST(QuadraticOracle, WrongDiscriminantClassIsRejected) {
  Rng rng(4);
  MultiPoly g(4);
  for (std::size_t i = 0; i < 4; ++i) {
    MultiPoly v = MultiPoly::variable(4, i);
    g += (i == 3 ? nonresidue() : Fp(1)) * (v * v);
  }
  EXPECT_FALSE(det_oracle_w2(g, rng).ok());
}

TEST(QuadraticOracle, NonQuadraticIsRejected) {
  Rng rng(5);
  EXPECT_FALSE(det_oracle_w2(det2() + MultiPoly::variable(4, 1), rng).ok());
  EXPECT_FALSE(det_oracle_w2(MultiPoly::variable(3, 0), rng).ok());
}

TEST(QuadraticOracle, TransposeRelabelingIsAccepted) {
  Rng rng(6);
  MatrixFp b = random_invertible(rng, 4);
  MatrixFp swap = MatrixFp::Zero(4, 4);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) swap(2 * i + j, 2 * j + i) = Fp(1);
  for (const MatrixFp& m : {b, MatrixFp(swap * b)}) {
    auto x = det_oracle_w2(det2_composed(m), rng);
    ASSERT_TRUE(x.ok());
    EXPECT_EQ(det_linear_matrix(*x), det2_composed(m));
  }
}

TEST(PlantedOracle, RegisteredMatrixIsReturned) {
  Rng rng(7);
  LinearMatrix x = block_matrix_from_rows(3, 0, random_invertible(rng, 9));
  LinearMatrix other = LinearMatrix::symbolic(3, 3) * random_invertible(rng, 3);
  PlantedDetOracle oracle({other, x});
  auto ans = oracle.query(det_linear_matrix(x), 3, {}, rng);
  ASSERT_TRUE(ans.ok());
  EXPECT_TRUE(*ans == x);

  auto scaled = oracle.query(det_linear_matrix(x) * Fp(5), 3, {}, rng);
  ASSERT_TRUE(scaled.ok());
  MatrixFp diag = MatrixFp::Identity(3, 3);
  diag(0, 0) = Fp(5);
  EXPECT_TRUE(*scaled == diag * x);
}

TEST(PlantedOracle, UnregisteredMatrixIsRejected) {
  Rng rng(8);
  LinearMatrix x = LinearMatrix::symbolic(2, 2);
  PlantedDetOracle oracle({x});
  MultiPoly g = det_linear_matrix(LinearMatrix::symbolic(2, 2) * random_invertible(rng, 2) + random_matrix(rng, 2, 2) * LinearMatrix::symbolic(2, 2));
  EXPECT_FALSE(oracle.query(g, 2, {}, rng).ok());
}

TEST(PlantedOracle, TransposeFlag) {
  Rng rng(9);
  LinearMatrix x = LinearMatrix::symbolic(2, 2) * random_invertible(rng, 2);
  PlantedDetOracle oracle({x});
  oracle.set_transpose(true);
  auto ans = oracle.query(det_linear_matrix(x), 2, {}, rng);
  ASSERT_TRUE(ans.ok());
  EXPECT_TRUE(*ans == x.transpose());
}

TEST(PlantedOracle, SecretModeUsesEmbedding) {
  Rng rng(10);
  const TrimmShape s{3, 3};
  PlantedInstance inst = plant_instance(s, rng, PlantMode::Block);
  PlantedDetOracle oracle(s, inst.a);
  const Index b = s.block_size();
  for (int k = 0; k < s.d; ++k) {
    LinearMatrix secret = block_matrix_from_rows(s.w, k, (*inst.blocks)[static_cast<std::size_t>(k)]);
    const MultiPoly g = det_linear_matrix(secret) * Fp(3);
    QueryContext ctx{MatrixFp(MatrixFp::Identity(s.n(), s.n()).middleCols(k * b, b))};
    auto ans = oracle.query(g, s.w, ctx, rng);
    ASSERT_TRUE(ans.ok());
    EXPECT_EQ(det_linear_matrix(*ans), g);
  }
}

TEST(Mmti, TrimmItselfAndPlantedBlocks) {
  Rng rng(11);
  QuadraticDetOracle det;
  MmtiOracle mmti(det);
  const TrimmShape s{2, 3};
  auto own = mmti.solve(trimm_blackbox(s), 2, rng);
  ASSERT_TRUE(own.ok()) << own.rejection().gate;
  EXPECT_TRUE(verify_witness(trimm_blackbox(s), s, own->blocks, 30, rng));

  PlantedInstance inst = plant_instance(s, rng, PlantMode::Block);
  auto planted = mmti.solve(inst.f, 2, rng);
  ASSERT_TRUE(planted.ok()) << planted.rejection().gate;
  EXPECT_TRUE(verify_witness(inst.f, s, planted->blocks, 30, rng));
}

TEST(Mmti, RandomTensorIsRejected) {
  Rng rng(12);
  QuadraticDetOracle det;
  MmtiOracle mmti(det);
  for (int t = 0; t < 3; ++t) EXPECT_FALSE(mmti.solve(Blackbox::from_poly(random_tensor({2, 3}, rng)), 2, rng).ok());
}
