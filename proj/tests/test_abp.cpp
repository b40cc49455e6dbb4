#include <gtest/gtest.h>

#include "traceiso/abp.hpp"
#include "traceiso/trimm.hpp"

using namespace traceiso;

namespace {

SetMultABP random_abp(int blocks, Index b, Index width, Rng& rng) {
  SetMultABP abp;
  for (int k = 0; k < blocks; ++k) {
    const Index rows = k == 0 ? 1 : width;
    const Index cols = k + 1 == blocks ? 1 : width;
    LinearMatrix layer(rows, cols, b);
    for (Index l = 0; l < b; ++l) layer.coefficient(l) = random_matrix(rng, rows, cols);
    abp.layers.push_back(std::move(layer));
  }
  return abp;
}

Fp det_of_block(const TrimmShape& s, int k, const VectorFp& x) {
  MatrixFp q(s.w, s.w);
  for (int i = 0; i < s.w; ++i)
    for (int j = 0; j < s.w; ++j) q(i, j) = x(block_offset(s.w, k, i, j));
  return determinant(q);
}

}  // namespace

TEST(Abp, EvaldimOfTrimmPairs) {
  Rng rng(1);
  const TrimmShape s{2, 4};
  Blackbox f = trimm_blackbox(s);
  for (int a = 0; a < s.d; ++a)
    for (int b = a + 1; b < s.d; ++b) {
      const bool adjacent = b == a + 1 || (a == 0 && b == s.d - 1);
      EXPECT_EQ(evaldim(f, {a, b}, s, rng), adjacent ? 4 : 16) << a << "," << b;
    }
}

TEST(Abp, EvaldimOfConstant) {
  Rng rng(2);
  const TrimmShape s{2, 3};
  Blackbox one(static_cast<std::size_t>(s.n()), 0, [](std::span<const Fp>) { return Fp(1); });
  EXPECT_EQ(evaldim(one, {0, 1}, s, rng), 1);
}

TEST(Abp, EvaldimInvariantUnderBlockChange) {
  Rng rng(3);
  const TrimmShape s{2, 4};
  PlantedInstance inst = plant_instance(s, rng, PlantMode::Block);
  for (int a = 0; a < s.d; ++a)
    for (int b = a + 1; b < s.d; ++b)
      EXPECT_EQ(evaldim(inst.f, {a, b}, s, rng), evaldim(trimm_blackbox(s), {a, b}, s, rng));
}

TEST(Abp, ReconstructRandomAbp) {
  Rng rng(4);
  for (int blocks : {2, 3, 5}) {
    SetMultABP truth = random_abp(blocks, 3, 3, rng);
    SetMultABP rec = reconstruct_abp(truth.as_blackbox(), blocks, 3, 3, rng);
    ASSERT_EQ(static_cast<int>(rec.layers.size()), blocks);
    for (int t = 0; t < 20; ++t) {
      VectorFp x = random_vector(rng, 3 * blocks);
      EXPECT_EQ(rec.eval(std::span<const Fp>(x.data(), x.size())), truth.eval(std::span<const Fp>(x.data(), x.size())));
    }
  }
}

TEST(Abp, ReconstructTrimm) {
  Rng rng(5);
  for (TrimmShape s : {TrimmShape{2, 3}, TrimmShape{2, 5}}) {
    PlantedInstance inst = plant_instance(s, rng, PlantMode::Block);
    SetMultABP rec = reconstruct_abp(inst.f, s, rng);
    ASSERT_EQ(static_cast<int>(rec.layers.size()), s.d);
    EXPECT_EQ(rec.layers.front().rows(), 1);
    EXPECT_EQ(rec.layers.back().cols(), 1);
    for (int t = 0; t < 20; ++t) {
      VectorFp x = random_vector(rng, s.n());
      EXPECT_EQ(rec.eval(std::span<const Fp>(x.data(), x.size())), trimm_eval(s, VectorFp(inst.a * x)));
    }
  }
}

TEST(Abp, MiddleLayerDeterminantIsPowerOfBlockDeterminant) {
  Rng rng(6);
  const TrimmShape s{2, 4};
  SetMultABP rec = reconstruct_abp(trimm_blackbox(s), s, rng);
  std::optional<Fp> ratio;
  for (int t = 0; t < 10; ++t) {
    VectorFp x = random_vector(rng, s.block_size());
    const Fp lhs = determinant(rec.layers[1].eval(x));
    const Fp rhs = det_of_block(s, 1, x).pow(static_cast<std::uint64_t>(s.w));
    ASSERT_FALSE(rhs.is_zero());
    if (!ratio) ratio = lhs / rhs;
    EXPECT_EQ(lhs, *ratio * rhs);
  }
  EXPECT_FALSE(ratio->is_zero());
}

TEST(Abp, ArityMismatchIsRejected) {
  Rng rng(7);
  EXPECT_THROW(reconstruct_abp(trimm_blackbox({2, 3}), 3, 5, 4, rng), ArityMismatch);
}
