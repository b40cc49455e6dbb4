#include "traceiso/lie.hpp"

#include <deque>
#include <map>

namespace traceiso {

SpanBasis<Fp> LieBasis::span() const {
  SpanBasis<Fp> s(n * n);
  for (const auto& e : basis) s.insert(flatten(e));
  return s;
}

VectorFp flatten(const MatrixFp& e) {
  VectorFp v(e.rows() * e.cols());
  for (Index i = 0; i < e.rows(); ++i)
    for (Index j = 0; j < e.cols(); ++j) v(i * e.cols() + j) = e(i, j);
  return v;
}

MatrixFp unflatten(const VectorFp& v, Index n) {
  if (v.size() != n * n) throw ShapeMismatch("unflatten: length is not n^2");
  MatrixFp e(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) e(i, j) = v(i * n + j);
  return e;
}

bool lie_identity_holds(const Blackbox& f, const MatrixFp& e, int trials, Rng& rng) {
  for (int t = 0; t < trials; ++t) {
    VectorFp a = random_vector(rng, e.rows());
    if (!bb_gradient_at(f, a).dot(VectorFp(e * a)).is_zero()) return false;
  }
  return true;
}

namespace {

std::vector<MatrixFp> basis_from_nullspace(const MatrixFp& null, Index n) {
  std::vector<MatrixFp> out;
  for (Index c = 0; c < null.cols(); ++c) out.push_back(unflatten(null.col(c), n));
  return out;
}

LieBasis exact_basis(const Blackbox& f) {
  const MultiPoly* poly = f.explicit_form();
  if (!poly) throw std::invalid_argument("exact Lie algebra needs an explicit polynomial");
  const auto n = static_cast<Index>(poly->num_vars());
  std::map<MultiPoly::Exponents, Index> rows;
  std::vector<std::vector<std::pair<Index, Fp>>> columns(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i) {
    const MultiPoly di = poly->partial(static_cast<std::size_t>(i));
    for (Index j = 0; j < n; ++j) {
      for (const auto& [e, c] : di.terms()) {
        MultiPoly::Exponents m = e;
        ++m[static_cast<std::size_t>(j)];
        auto [it, fresh] = rows.emplace(m, static_cast<Index>(rows.size()));
        columns[static_cast<std::size_t>(i * n + j)].emplace_back(it->second, c);
      }
    }
  }
  MatrixFp sys = MatrixFp::Zero(std::max<Index>(static_cast<Index>(rows.size()), 1), n * n);
  for (std::size_t col = 0; col < columns.size(); ++col)
    for (const auto& [r, c] : columns[col]) sys(r, static_cast<Index>(col)) += c;
  return LieBasis{n, basis_from_nullspace(nullspace(sys), n)};
}

std::optional<LieBasis> sampled_basis(const Blackbox& f, Index rows, Rng& rng) {
  const auto n = static_cast<Index>(f.num_vars());
  MatrixFp sys(rows, n * n);
  for (Index t = 0; t < rows; ++t) {
    VectorFp a = random_vector(rng, n);
    VectorFp g = bb_gradient_at(f, a);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) sys(t, i * n + j) = g(i) * a(j);
  }
  LieBasis lie{n, basis_from_nullspace(nullspace(sys), n)};
  // certify every element against 20 fresh points, sharing gradients
  for (int t = 0; t < 20 && lie.dim() > 0; ++t) {
    VectorFp a = random_vector(rng, n);
    VectorFp g = bb_gradient_at(f, a);
    for (const auto& e : lie.basis)
      if (!g.dot(VectorFp(e * a)).is_zero()) return std::nullopt;
  }
  return lie;
}

}  // namespace

LieBasis lie_algebra_basis(const Blackbox& f, Rng& rng, LieMode mode) {
  if (static_cast<std::uint64_t>(f.degree()) >= current_modulus().value())
    throw std::invalid_argument("lie_algebra_basis: modulus must exceed the degree");
  if (mode == LieMode::Exact) return exact_basis(f);
  const auto n = static_cast<Index>(f.num_vars());
  Index rows = n * n + 32;
  for (int attempt = 0; attempt < 2; ++attempt, rows *= 2)
    if (auto lie = sampled_basis(f, rows, rng)) return *lie;
  throw CertificationFailed("Lie algebra basis failed certification");
}

MatrixFp random_element(const LieBasis& lie, Rng& rng) {
  MatrixFp r = MatrixFp::Zero(lie.n, lie.n);
  for (const auto& e : lie.basis) r += rng.uniform() * e;
  return r;
}

InvariantSubspace closure(const VectorFp& v, const LieBasis& lie) {
  SpanBasis<Fp> span(v.size());
  std::deque<VectorFp> frontier;
  if (span.insert(v)) frontier.push_back(v);
  while (!frontier.empty()) {
    VectorFp u = std::move(frontier.front());
    frontier.pop_front();
    for (const auto& e : lie.basis) {
      VectorFp image = e * u;
      if (span.insert(image)) frontier.push_back(std::move(image));
    }
  }
  return InvariantSubspace{span.basis()};
}

Outcome<std::vector<InvariantSubspace>> invariant_subspaces_once(const Blackbox& f, Rng& rng) {
  LieBasis lie;
  try {
    lie = lie_algebra_basis(f, rng);
  } catch (const CertificationFailed& e) {
    return Rejection{"lie-certification", e.what()};
  }
  const MatrixFp r = random_element(lie, rng);
  const UniPolyFp q(char_poly(r));
  if (!squarefree_test(q)) return Rejection{"square-free", "characteristic polynomial has a repeated factor"};

  std::vector<InvariantSubspace> spaces;
  std::vector<SpanBasis<Fp>> spans;
  for (const auto& [factor, mult] : factor_univariate(q, rng)) {
    MatrixFp kernel = nullspace(eval_at_matrix(factor, r));
    if (kernel.cols() == 0) return Rejection{"factor-nullspace", "factor of the characteristic polynomial has trivial kernel"};
    InvariantSubspace u = closure(kernel.col(0), lie);
    SpanBasis<Fp> s = column_span(u.basis);
    bool seen = false;
    for (const auto& other : spans) seen = seen || other.same_span(s);
    if (seen) continue;
    spans.push_back(std::move(s));
    spaces.push_back(std::move(u));
  }
  const auto d = static_cast<std::size_t>(f.degree());
  if (spaces.size() != d)
    return Rejection{"subspace-count", "found " + std::to_string(spaces.size()) + " closure spaces, expected " + std::to_string(d)};
  for (const auto& s : spaces)
    if (s.dim() != spaces.front().dim()) return Rejection{"subspace-dimension", "closure spaces have unequal dimensions"};
  return spaces;
}

Outcome<std::vector<InvariantSubspace>> irreducible_invariant_subspaces(const Blackbox& f, Rng& rng, RunLog* log) {
  for (int attempt = 0;; ++attempt) {
    auto result = invariant_subspaces_once(f, rng);
    if (result.ok()) {
      log_pass(log, "invariant-subspaces");
      return result;
    }
    const std::string& gate = result.rejection().gate;
    const bool retryable = gate == "square-free" || gate == "lie-certification";
    if (!retryable || attempt == 3) return result;
  }
}

}  // namespace traceiso
