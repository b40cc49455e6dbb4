#include "traceiso/abp.hpp"

#include <optional>

#include "traceiso/lie.hpp"

namespace traceiso {

Fp SetMultABP::eval(std::span<const Fp> point) const {
  const Index b = block_size();
  if (static_cast<Index>(point.size()) != b * static_cast<Index>(layers.size()))
    throw ArityMismatch("SetMultABP::eval: arity mismatch");
  MatrixFp acc;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    MatrixFp m = layers[k].eval(point.subspan(k * static_cast<std::size_t>(b), static_cast<std::size_t>(b)));
    acc = k == 0 ? m : MatrixFp(acc * m);
  }
  return acc(0, 0);
}

Blackbox SetMultABP::as_blackbox() const {
  auto held = std::make_shared<const SetMultABP>(*this);
  return Blackbox(static_cast<std::size_t>(block_size()) * layers.size(), static_cast<int>(layers.size()),
                  [held](std::span<const Fp> x) { return held->eval(x); });
}

Index evaldim(const Blackbox& f, const std::vector<int>& fixed_blocks, const TrimmShape& shape, Rng& rng) {
  const Index b = shape.block_size();
  if (static_cast<Index>(f.num_vars()) != b * shape.d) throw ArityMismatch("evaldim: arity does not match shape");
  std::vector<bool> fixed(static_cast<std::size_t>(f.num_vars()), false);
  for (int k : fixed_blocks)
    for (Index v = 0; v < b; ++v) fixed[static_cast<std::size_t>(k * b + v)] = true;
  const Index m = b * b + 16;
  std::vector<VectorFp> alphas, betas;
  for (Index i = 0; i < m; ++i) {
    alphas.push_back(random_vector(rng, static_cast<Index>(f.num_vars())));
    betas.push_back(random_vector(rng, static_cast<Index>(f.num_vars())));
  }
  MatrixFp values(m, m);
  VectorFp point(static_cast<Index>(f.num_vars()));
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      for (Index v = 0; v < point.size(); ++v) point(v) = fixed[static_cast<std::size_t>(v)] ? alphas[i](v) : betas[j](v);
      values(i, j) = f(point);
    }
  return rank(values);
}

namespace {

struct Evaluator {
  const Blackbox& h;
  Index b;
  int blocks;

  /// h at the concatenation prefix | block | suffix.
  Fp operator()(const VectorFp& prefix, const VectorFp& block, const VectorFp& suffix) const {
    VectorFp x(prefix.size() + block.size() + suffix.size());
    x << prefix, block, suffix;
    return h(x);
  }
};

std::optional<SetMultABP> attempt(const Blackbox& h, int blocks, Index b, Index width, Rng& rng) {
  Evaluator ev{h, b, blocks};
  // suffix[k][j]: assignment to blocks k+1 .. blocks-1
  std::vector<std::vector<VectorFp>> suffix(static_cast<std::size_t>(blocks));
  for (int k = 0; k + 1 < blocks; ++k)
    for (Index j = 0; j < width; ++j) suffix[static_cast<std::size_t>(k)].push_back(random_vector(rng, (blocks - k - 1) * b));
  const VectorFp none(0);

  SetMultABP abp;
  LinearMatrix first(1, width, b);
  for (Index l = 0; l < b; ++l)
    for (Index j = 0; j < width; ++j) first.coefficient(l)(0, j) = ev(none, VectorFp::Unit(b, l), suffix[0][static_cast<std::size_t>(j)]);
  abp.layers.push_back(std::move(first));

  for (int k = 1; k < blocks; ++k) {
    const bool last = k + 1 == blocks;
    const Index out_cols = last ? 1 : width;
    std::vector<VectorFp> prefix;
    for (Index i = 0; i < width; ++i) prefix.push_back(random_vector(rng, k * b));
    MatrixFp anchor(width, width);
    for (Index i = 0; i < width; ++i)
      for (Index j = 0; j < width; ++j) {
        const VectorFp& suf = suffix[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j)];
        anchor(i, j) = ev(prefix[static_cast<std::size_t>(i)], suf.head(b), suf.tail(suf.size() - b));
      }
    if (!is_invertible(anchor)) return std::nullopt;
    const MatrixFp anchor_inv = inverse(anchor);
    LinearMatrix layer(width, out_cols, b);
    for (Index l = 0; l < b; ++l) {
      MatrixFp q(width, out_cols);
      for (Index i = 0; i < width; ++i)
        for (Index j = 0; j < out_cols; ++j)
          q(i, j) = ev(prefix[static_cast<std::size_t>(i)], VectorFp::Unit(b, l),
                       last ? none : suffix[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]);
      layer.coefficient(l) = anchor_inv * q;
    }
    abp.layers.push_back(std::move(layer));
  }
  return abp;
}

}  // namespace

SetMultABP reconstruct_abp(const Blackbox& h, int num_blocks, Index block_size, Index width, Rng& rng) {
  if (num_blocks < 2) throw std::invalid_argument("reconstruct_abp: need at least two blocks");
  if (static_cast<Index>(h.num_vars()) != num_blocks * block_size) throw ArityMismatch("reconstruct_abp: arity mismatch");
  for (int tries = 0; tries < 3; ++tries) {
    auto abp = attempt(h, num_blocks, block_size, width, rng);
    if (!abp) continue;
    if (!pit_equal(abp->as_blackbox(), h, 50, rng)) throw CertificationFailed("reconstructed ABP differs from the input");
    return *abp;
  }
  throw AnchorSingular("anchor matrix stayed singular after 3 attempts");
}

SetMultABP reconstruct_abp(const Blackbox& h, const TrimmShape& shape, Rng& rng) {
  return reconstruct_abp(h, shape.d, shape.block_size(), shape.block_size(), rng);
}

}  // namespace traceiso
