#include "traceiso/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "traceiso/lie.hpp"

namespace traceiso {

namespace {

constexpr int kPitTrials = 20;

/// Largest w with w^2 <= x, or 0 when x is not a perfect square.
int exact_sqrt(Index x) {
  if (x < 0) return 0;
  auto r = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(x))));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r * r == x ? static_cast<int>(r) : 0;
}

MatrixFp unvec(const VectorFp& v, Index rows) {
  MatrixFp m(rows, rows);
  for (Index j = 0; j < rows; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = v(j * rows + i);
  return m;
}

LinearMatrix sub_block(const LinearMatrix& y, Index r0, Index c0, Index rows, Index cols) {
  LinearMatrix out(rows, cols, y.num_vars());
  for (Index l = 0; l < y.num_vars(); ++l) out.coefficient(l) = y.coefficient(l).block(r0, c0, rows, cols);
  out.constant() = y.constant().block(r0, c0, rows, cols);
  return out;
}

/// w x w linear matrix read from a vector-shaped layer: entry (i, j) is position `index(i, j)`.
template <class IndexFn>
LinearMatrix reshape_layer(const LinearMatrix& layer, int w, IndexFn index) {
  LinearMatrix x(w, w, layer.num_vars());
  const bool row = layer.rows() == 1;
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < w; ++j) {
      const Index p = index(i, j);
      for (Index l = 0; l < layer.num_vars(); ++l)
        x.coefficient(l)(i, j) = row ? layer.coefficient(l)(0, p) : layer.coefficient(l)(p, 0);
      x.constant()(i, j) = row ? layer.constant()(0, p) : layer.constant()(p, 0);
    }
  return x;
}

}  // namespace

OrderingReport order_blocks(const Blackbox& g, const TrimmShape& shape, Rng& rng) {
  const int d = shape.d;
  const Index adjacent = shape.block_size();
  OrderingReport report;
  report.evaldim_table.assign(static_cast<std::size_t>(d), std::vector<Index>(static_cast<std::size_t>(d), 0));
  for (int r = 0; r < d; ++r)
    for (int s = r + 1; s < d; ++s) {
      const Index e = evaldim(g, {r, s}, shape, rng);
      report.evaldim_table[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] = e;
      report.evaldim_table[static_cast<std::size_t>(s)][static_cast<std::size_t>(r)] = e;
    }
  auto neighbours = [&](int r) {
    std::vector<int> out;
    for (int s = 0; s < d; ++s)
      if (s != r && report.evaldim_table[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] == adjacent) out.push_back(s);
    return out;
  };
  if (d == 3) {
    for (int r = 0; r < d; ++r)
      if (neighbours(r).size() != 2) throw AdjacencyStructureBroken("a block pair has the wrong evaluation dimension");
    report.tau = {0, 1, 2};
    return report;
  }
  for (int r = 0; r < d; ++r)
    if (neighbours(r).size() != 2)
      throw AdjacencyStructureBroken("block " + std::to_string(r) + " does not have exactly two neighbours");
  report.tau = {0, neighbours(0).front()};
  std::set<int> used{0, report.tau[1]};
  while (static_cast<int>(report.tau.size()) < d) {
    const int prev = report.tau[report.tau.size() - 2];
    const int cur = report.tau.back();
    const auto next = neighbours(cur);
    const int step = next[0] == prev ? next[1] : next[0];
    if (used.count(step)) throw AdjacencyStructureBroken("adjacency chain closes early");
    used.insert(step);
    report.tau.push_back(step);
  }
  const auto last = neighbours(report.tau.back());
  if (std::find(last.begin(), last.end(), 0) == last.end()) throw AdjacencyStructureBroken("adjacency chain does not close");
  return report;
}

Outcome<TensorReduction> trace_to_tensor_iso(const Blackbox& f, Rng& rng, RunLog* log) {
  const int d = f.degree();
  const auto n = static_cast<Index>(f.num_vars());
  if (d < 3 || n % d != 0) return Rejection{"dimension", "variable count is not w^2 d"};
  const int w = exact_sqrt(n / d);
  if (w < 2) return Rejection{"dimension", "variable count is not w^2 d with w >= 2"};
  log_pass(log, "dimension");

  auto spaces = irreducible_invariant_subspaces(f, rng, log);
  if (!spaces.ok()) return spaces.rejection();
  const Index b = static_cast<Index>(w) * w;
  MatrixFp v(n, n);
  for (int k = 0; k < d; ++k) {
    const auto& u = (*spaces)[static_cast<std::size_t>(k)];
    if (u.dim() != b) return Rejection{"dimension", "invariant subspace of dimension " + std::to_string(u.dim())};
    v.middleCols(k * b, b) = u.basis;
  }
  if (!is_invertible(v)) return Rejection{"dimension", "invariant subspaces do not span the whole space"};

  const TrimmShape shape{w, d};
  OrderingReport ordering;
  try {
    ordering = order_blocks(compose_linear(f, v), shape, rng);
  } catch (const AdjacencyStructureBroken& e) {
    return Rejection{"block-order", e.what()};
  }
  log_pass(log, "block-order");
  MatrixFp perm = MatrixFp::Zero(n, n);
  for (int k = 0; k < d; ++k) perm.block(ordering.tau[static_cast<std::size_t>(k)] * b, k * b, b, b).setIdentity();
  return TensorReduction{v * perm, w, std::move(ordering)};
}

MatrixFp intertwiner_solutions(const LinearMatrix& y, const LinearMatrix& z) {
  const Index s = y.rows();
  if (y.cols() != s || z.rows() != s || z.cols() != s || y.num_vars() != z.num_vars())
    throw ShapeMismatch("intertwiner_solutions: incompatible shapes");
  const Index sq = s * s;
  const MatrixFp id = MatrixFp::Identity(s, s);
  MatrixFp system((y.num_vars() + 1) * sq, 2 * sq);
  for (Index l = 0; l <= y.num_vars(); ++l) {
    const MatrixFp& yl = l < y.num_vars() ? y.coefficient(l) : y.constant();
    const MatrixFp& zl = l < z.num_vars() ? z.coefficient(l) : z.constant();
    system.block(l * sq, 0, sq, sq) = kron(yl.transpose(), id);
    system.block(l * sq, sq, sq, sq) = -kron(id, zl);
  }
  return nullspace(system);
}

Outcome<Intertwiner> solve_intertwiner(const LinearMatrix& y, const LinearMatrix& z, Rng& rng) {
  const MatrixFp direct = intertwiner_solutions(y, z);
  const MatrixFp flipped = intertwiner_solutions(y, z.transpose());
  if ((direct.cols() > 0) == (flipped.cols() > 0))
    return Rejection{"intertwiner", direct.cols() > 0 ? "both branches are solvable" : "neither branch is solvable"};
  const bool transposed = flipped.cols() > 0;
  const MatrixFp& space = transposed ? flipped : direct;
  const Index s = y.rows();
  for (int tries = 0; tries < 3; ++tries) {
    const VectorFp v = space * random_vector(rng, space.cols());
    MatrixFp t = unvec(v.head(s * s), s);
    MatrixFp u = unvec(v.tail(s * s), s);
    if (is_invertible(t) && is_invertible(u)) return Intertwiner{std::move(t), std::move(u), transposed};
  }
  return Rejection{"intertwiner", "no invertible solution after 3 samples"};
}

KronFactor factor_kron(const LinearMatrix& y, int w) {
  const Index s = static_cast<Index>(w) * w;
  if (y.rows() != s || y.cols() != s) throw ShapeMismatch("factor_kron: expected a w^2 x w^2 matrix");
  std::optional<LinearMatrix> x;
  Index pivot_var = 0, pivot_r = 0, pivot_c = 0;
  auto at = [](const LinearMatrix& m, Index l, Index r, Index c) {
    return l < m.num_vars() ? m.coefficient(l)(r, c) : m.constant()(r, c);
  };
  MatrixFp m = MatrixFp::Zero(w, w);
  for (Index bi = 0; bi < w; ++bi)
    for (Index bj = 0; bj < w; ++bj) {
      LinearMatrix block = sub_block(y, bi * w, bj * w, w, w);
      if (!x) {
        if (block.is_zero()) continue;
        x = block;
        bool found = false;
        for (Index l = 0; l <= block.num_vars() && !found; ++l)
          for (Index r = 0; r < w && !found; ++r)
            for (Index c = 0; c < w && !found; ++c)
              if (!at(block, l, r, c).is_zero()) {
                pivot_var = l;
                pivot_r = r;
                pivot_c = c;
                found = true;
              }
      }
      const Fp ratio = at(block, pivot_var, pivot_r, pivot_c) / at(*x, pivot_var, pivot_r, pivot_c);
      if (!(block == ratio * *x)) throw StructureViolation("block is not a multiple of the first nonzero block");
      m(bi, bj) = ratio;
    }
  if (!x || !is_invertible(m)) throw StructureViolation("Kronecker factor is singular");
  return KronFactor{m, *x};
}

Outcome<TensorIsoWitness> tensor_iso_to_det(const Blackbox& h, int w, const DetOracle& det, Rng& rng,
                                            const std::optional<MatrixFp>& embedding, RunLog* log) {
  const Index b = static_cast<Index>(w) * w;
  const auto n = static_cast<Index>(h.num_vars());
  if (w < 2 || n % b != 0 || n / b < 3) return Rejection{"dimension", "input is not a tensor over w^2-sized blocks"};
  const int d = static_cast<int>(n / b);
  const MatrixFp base = embedding ? *embedding : MatrixFp::Identity(n, n);
  if (base.cols() != n) throw ShapeMismatch("tensor_iso_to_det: embedding has the wrong number of columns");

  SetMultABP abp;
  try {
    abp = reconstruct_abp(h, d, b, b, rng);
  } catch (const AnchorSingular& e) {
    return Rejection{"abp-reconstruction", e.what()};
  } catch (const CertificationFailed& e) {
    return Rejection{"abp-reconstruction", e.what()};
  }
  log_pit(log, 50);
  log_pass(log, "abp-reconstruction");
  const auto& layers = abp.layers;

  // t[k] solves layer k + 1 on the left, s[k] on the right
  std::vector<MatrixFp> t(static_cast<std::size_t>(d)), s(static_cast<std::size_t>(d));
  for (int k = 1; k <= d - 2; ++k) {
    MultiPoly g(0);
    try {
      g = wth_root(det_blackbox(layers[static_cast<std::size_t>(k)]), w, rng);
    } catch (const std::domain_error& e) {
      return Rejection{"wth-root", e.what()};
    }
    QueryContext ctx{MatrixFp(base.middleCols(k * b, b))};
    auto answer = det.query(g, w, ctx, rng);
    if (!answer.ok()) return answer.rejection();
    auto iw = solve_intertwiner(layers[static_cast<std::size_t>(k)], answer->kron_identity_left(w), rng);
    if (!iw.ok()) return iw.rejection();
    if (iw->transposed) log_pass(log, "intertwiner-transposed");
    t[static_cast<std::size_t>(k - 1)] = iw->t;
    s[static_cast<std::size_t>(k)] = iw->s;
  }
  log_pass(log, "det-oracle");
  log_pass(log, "intertwiner");

  std::vector<LinearMatrix> hat;
  hat.push_back(layers[0] * inverse(t[0]));
  for (int k = 1; k <= d - 2; ++k) {
    const MatrixFp& right = k <= d - 3 ? t[static_cast<std::size_t>(k)] : s[static_cast<std::size_t>(d - 2)];
    hat.push_back(t[static_cast<std::size_t>(k - 1)] * layers[static_cast<std::size_t>(k)] * inverse(right));
  }
  hat.push_back(s[static_cast<std::size_t>(d - 2)] * layers[static_cast<std::size_t>(d - 1)]);

  std::vector<LinearMatrix> x(static_cast<std::size_t>(d), LinearMatrix(w, w, b));
  MatrixFp fold = MatrixFp::Identity(w, w);
  try {
    for (int k = 1; k <= d - 2; ++k) {
      KronFactor kf = factor_kron(hat[static_cast<std::size_t>(k)], w);
      fold = fold * kf.m;
      x[static_cast<std::size_t>(k)] = std::move(kf.x);
    }
  } catch (const StructureViolation& e) {
    return Rejection{"kron-structure", e.what()};
  }
  log_pass(log, "kron-structure");
  const LinearMatrix last = kron(fold, MatrixFp::Identity(w, w)) * hat.back();
  x[0] = reshape_layer(hat.front(), w, [w](int i, int j) { return static_cast<Index>(i) * w + j; });
  x[static_cast<std::size_t>(d - 1)] = reshape_layer(last, w, [w](int i, int j) { return static_cast<Index>(j) * w + i; });

  TensorIsoWitness witness;
  for (int k = 0; k < d; ++k) {
    witness.blocks.push_back(rows_from_block_matrix(w, k, x[static_cast<std::size_t>(k)]));
    if (!is_invertible(witness.blocks.back())) return Rejection{"final-pit", "witness block is singular"};
  }
  log_pit(log, kPitTrials);
  if (!verify_witness(h, TrimmShape{w, d}, witness.blocks, kPitTrials, rng))
    return Rejection{"final-pit", "witness does not reproduce the tensor"};
  log_pass(log, "final-pit");
  return witness;
}

Outcome<TraceWitness> trace_equivalence(const Blackbox& f, const DetOracle& det, Rng& rng, RunLog* log) {
  auto red = trace_to_tensor_iso(f, rng, log);
  if (!red.ok()) return red.rejection();
  const Blackbox h = compose_linear(f, red->a_prime);
  auto tensor = tensor_iso_to_det(h, red->w, det, rng, red->a_prime, log);
  if (!tensor.ok()) return tensor.rejection();
  const TrimmShape shape{red->w, f.degree()};
  MatrixFp a = block_diagonal(tensor->blocks) * inverse(red->a_prime);
  log_pit(log, kPitTrials);
  if (!verify_witness(f, shape, a, kPitTrials, rng)) return Rejection{"final-pit", "witness does not reproduce f"};
  return TraceWitness{red->w, std::move(a)};
}

}  // namespace traceiso
