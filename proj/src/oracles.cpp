#include "traceiso/oracles.hpp"

#include "traceiso/reduction.hpp"

namespace traceiso {

namespace {

constexpr int kOracleTrials = 20;

Rejection not_equivalent(std::string detail) { return Rejection{"det-oracle", std::move(detail)}; }

std::optional<MatrixFp> gram_matrix(const MultiPoly& g) {
  const auto n = static_cast<Index>(g.num_vars());
  const Fp half = Fp(2).inverse();
  MatrixFp gram = MatrixFp::Zero(n, n);
  for (const auto& [e, c] : g.terms()) {
    std::vector<Index> vars;
    for (Index i = 0; i < n; ++i)
      for (int t = 0; t < e[static_cast<std::size_t>(i)]; ++t) vars.push_back(i);
    if (vars.size() != 2) return std::nullopt;
    if (vars[0] == vars[1]) {
      gram(vars[0], vars[0]) += c;
    } else {
      gram(vars[0], vars[1]) += c * half;
      gram(vars[1], vars[0]) += c * half;
    }
  }
  return gram;
}

struct Diagonalized {
  MatrixFp basis;  // columns c with basis^T G basis = diag(1, ..., 1, delta)
  Fp delta;
};

/// Orthogonal basis whose first n-1 vectors have norm one, found by sampling square values.
std::optional<Diagonalized> diagonalize(const MatrixFp& gram, Rng& rng) {
  const Index n = gram.rows();
  MatrixFp space = MatrixFp::Identity(n, n);
  MatrixFp out(n, n);
  for (Index step = 0; step + 1 < n; ++step) {
    std::optional<VectorFp> picked;
    for (int tries = 0; tries < 200 && !picked; ++tries) {
      VectorFp v = space * random_vector(rng, space.cols());
      const Fp q = v.dot(gram * v);
      if (!q.is_zero() && is_square(q)) picked = v * sqrt(q).inverse();
    }
    if (!picked) return std::nullopt;
    out.col(step) = *picked;
    MatrixFp constraint = picked->transpose() * gram * space;
    space = space * nullspace(constraint);
  }
  out.col(n - 1) = space.col(0);
  const Fp delta = space.col(0).dot(gram * space.col(0));
  if (delta.is_zero()) return std::nullopt;
  return Diagonalized{out, delta};
}

MatrixFp det2_gram() {
  const Fp half = Fp(2).inverse();
  MatrixFp h = MatrixFp::Zero(4, 4);
  h(0, 3) = h(3, 0) = half;
  h(1, 2) = h(2, 1) = -half;
  return h;
}

}  // namespace

Outcome<LinearMatrix> det_oracle_w2(const MultiPoly& g, Rng& rng) {
  if (g.num_vars() != 4) return not_equivalent("quadratic oracle expects 4 variables");
  auto gram = gram_matrix(g);
  if (!gram) return not_equivalent("query is not a quadratic form");
  const Index r = rank(*gram);
  if (r != 4) return not_equivalent("quadratic form has rank " + std::to_string(r));

  const MatrixFp target = det2_gram();
  auto dg = diagonalize(*gram, rng);
  auto dh = diagonalize(target, rng);
  if (!dg || !dh) return not_equivalent("no diagonal form found");
  const Fp ratio = dg->delta / dh->delta;
  if (!is_square(ratio)) return not_equivalent("discriminant square class differs");
  dg->basis.col(3) *= sqrt(ratio).inverse();

  const MatrixFp l = dh->basis * inverse(dg->basis);
  if (MatrixFp(l.transpose() * target * l) != *gram) return not_equivalent("congruence check failed");
  LinearMatrix x(2, 2, 4);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) x.set_entry(i, j, l.row(2 * i + j).transpose());
  if (!pit_equal(det_blackbox(x), Blackbox::from_poly(g), kOracleTrials, rng))
    return not_equivalent("determinant of the answer differs from the query");
  return x;
}

Outcome<LinearMatrix> QuadraticDetOracle::query(const MultiPoly& g, int w, const QueryContext&, Rng& rng) const {
  if (w != 2) return not_equivalent("quadratic oracle supports w = 2 only");
  return det_oracle_w2(g, rng);
}

Outcome<LinearMatrix> det_oracle_planted(const MultiPoly& g, const std::vector<LinearMatrix>& registry, Rng& rng) {
  const Blackbox target = Blackbox::from_poly(g);
  for (const auto& x : registry) {
    if (x.num_vars() != static_cast<Index>(g.num_vars()) || x.rows() != x.cols()) continue;
    std::optional<Fp> beta;
    for (int tries = 0; tries < 5 && !beta; ++tries) {
      VectorFp point = random_vector(rng, x.num_vars());
      const Fp dx = determinant(x.eval(point));
      if (!dx.is_zero()) beta = target(point) / dx;
    }
    if (!beta || beta->is_zero()) continue;
    MatrixFp scale = MatrixFp::Identity(x.rows(), x.rows());
    scale(0, 0) = *beta;
    LinearMatrix answer = scale * x;
    if (pit_equal(det_blackbox(answer), target, kOracleTrials, rng)) return answer;
  }
  return not_equivalent("no registered matrix matches the query");
}

std::vector<LinearMatrix> PlantedDetOracle::candidates(Index num_vars, int w, const QueryContext& ctx) const {
  if (!shape_) return registry_;
  std::vector<LinearMatrix> out;
  if (shape_->w != w) return out;
  const Index n = shape_->n();
  const MatrixFp embedding = ctx.embedding ? *ctx.embedding : MatrixFp::Identity(n, num_vars);
  if (embedding.rows() != n || embedding.cols() != num_vars) return out;
  const MatrixFp composed = secret_ * embedding;
  const Index b = shape_->block_size();
  for (int k = 0; k < shape_->d; ++k) {
    const MatrixFp rows = composed.middleRows(k * b, b);
    if (!is_zero(rows)) out.push_back(block_matrix_from_rows(w, k, rows));
  }
  return out;
}

Outcome<LinearMatrix> PlantedDetOracle::query(const MultiPoly& g, int w, const QueryContext& ctx, Rng& rng) const {
  auto answer = det_oracle_planted(g, candidates(static_cast<Index>(g.num_vars()), w, ctx), rng);
  if (!answer.ok() || !transpose_) return answer;
  return answer->transpose();
}

Outcome<TensorIsoWitness> MmtiOracle::solve(const Blackbox& h, int w, Rng& rng, const std::optional<MatrixFp>& embedding,
                                            RunLog* log) const {
  return tensor_iso_to_det(h, w, det_, rng, embedding, log);
}

}  // namespace traceiso
