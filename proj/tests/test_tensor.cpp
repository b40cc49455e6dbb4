#include <gtest/gtest.h>

#include "traceiso/abp.hpp"
#include "traceiso/tensor.hpp"

using namespace traceiso;

TEST(UnitPoint, SymbolicLabeling) {
  LinearMatrix x = LinearMatrix::symbolic(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_EQ(unit_point(x, i, j), VectorFp(VectorFp::Unit(4, i * 2 + j)));
}

TEST(UnitPoint, EvaluatesBackToUnitMatrix) {
  Rng rng(1);
  LinearMatrix x = block_matrix_from_rows(2, 1, random_invertible(rng, 4));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      MatrixFp e = MatrixFp::Zero(2, 2);
      e(i, j) = Fp(1);
      EXPECT_EQ(x.eval(unit_point(x, i, j)), e);
    }
}

TEST(UnitPoint, DependentFormsThrow) {
  MatrixFp rows = MatrixFp::Identity(4, 4);
  rows.row(3) = rows.row(0);
  EXPECT_THROW(unit_point(block_matrix_from_rows(2, 0, rows), 0, 0), SingularMatrix);
}

TEST(DegreeReduction, PlantedBlockTensors) {
  Rng rng(2);
  QuadraticDetOracle det;
  MmtiOracle mmti(det);
  for (TrimmShape s : {TrimmShape{2, 4}, TrimmShape{2, 5}, TrimmShape{2, 6}}) {
    for (int seed = 0; seed < 3; ++seed) {
      PlantedInstance inst = plant_instance(s, rng, PlantMode::Block);
      auto wit = degree_d_to_3(inst.f, 2, mmti, rng);
      ASSERT_TRUE(wit.ok()) << s.d << " " << wit.rejection().gate << ": " << wit.rejection().detail;
      ASSERT_EQ(static_cast<int>(wit->blocks.size()), s.d);
      EXPECT_TRUE(verify_witness(inst.f, s, wit->blocks, 50, rng));
    }
  }
}

TEST(DegreeReduction, PlantedOracleWithEmbedding) {
  Rng rng(3);
  const TrimmShape s{2, 5};
  PlantedInstance inst = plant_instance(s, rng, PlantMode::Block);
  PlantedDetOracle det(s, inst.a);
  MmtiOracle mmti(det);
  auto wit = degree_d_to_3(inst.f, 2, mmti, rng);
  ASSERT_TRUE(wit.ok()) << wit.rejection().gate;
  EXPECT_TRUE(verify_witness(inst.f, s, wit->blocks, 50, rng));
}

TEST(DegreeReduction, ThreeBlocksPassStraightThrough) {
  Rng rng(4);
  QuadraticDetOracle det;
  MmtiOracle mmti(det);
  const TrimmShape s{2, 3};
  auto wit = degree_d_to_3(trimm_blackbox(s), 2, mmti, rng);
  ASSERT_TRUE(wit.ok());
  EXPECT_TRUE(verify_witness(trimm_blackbox(s), s, wit->blocks, 50, rng));
}

TEST(DegreeReduction, RandomTensorIsRejected) {
  Rng rng(5);
  QuadraticDetOracle det;
  MmtiOracle mmti(det);
  for (int t = 0; t < 3; ++t) EXPECT_FALSE(degree_d_to_3(Blackbox::from_poly(random_tensor({2, 4}, rng)), 2, mmti, rng).ok());
}

TEST(DegreeReduction, RestrictionHasTrimmSignature) {
  Rng rng(6);
  const TrimmShape s{2, 5};
  PlantedInstance inst = plant_instance(s, rng, PlantMode::Block);
  std::vector<Index> head;
  for (Index v = 0; v < 12; ++v) head.push_back(v);
  Blackbox h = substitute(inst.f, head, random_vector(rng, s.n()));
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) EXPECT_EQ(evaldim(h, {a, b}, {2, 3}, rng), 4);
}
