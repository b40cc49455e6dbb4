#pragma once

#include <stdexcept>
#include <vector>

#include "traceiso/blackbox.hpp"
#include "traceiso/trimm.hpp"

namespace traceiso {

struct AnchorSingular : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Set-multilinear ABP: layer k is a linear matrix in the variables of block k.
struct SetMultABP {
  std::vector<LinearMatrix> layers;

  Index block_size() const { return layers.empty() ? 0 : layers.front().num_vars(); }
  Fp eval(std::span<const Fp> point) const;
  Blackbox as_blackbox() const;
};

/// Rank of the evaluation matrix of f with the listed blocks fixed (blocks of w^2 variables).
Index evaldim(const Blackbox& f, const std::vector<int>& fixed_blocks, const TrimmShape& shape, Rng& rng);

/// Width-`width` reconstruction of a set-multilinear h over `num_blocks` blocks of `block_size` variables.
SetMultABP reconstruct_abp(const Blackbox& h, int num_blocks, Index block_size, Index width, Rng& rng);
/// Width w^2 reconstruction over the blocks of `shape`.
SetMultABP reconstruct_abp(const Blackbox& h, const TrimmShape& shape, Rng& rng);

}  // namespace traceiso
