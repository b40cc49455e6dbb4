#include "traceiso/tensor.hpp"

#include "traceiso/abp.hpp"
#include "traceiso/lie.hpp"

namespace traceiso {

namespace {

constexpr int kPitTrials = 20;

/// Coefficient matrix whose row r is the linear form at position r of x (row-major).
MatrixFp entry_forms(const LinearMatrix& x) {
  MatrixFp forms(x.rows() * x.cols(), x.num_vars());
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) forms.row(i * x.cols() + j) = x.entry(i, j).transpose();
  return forms;
}

struct BlockEvaluator {
  const Blackbox& f;
  Index b;
  int d;

  /// f with block k free and every other block set from `fixed`.
  std::optional<VectorFp> linear_form(std::vector<VectorFp> fixed, int k, Rng& rng) const {
    auto at = [&](const VectorFp& v) {
      fixed[static_cast<std::size_t>(k)] = v;
      VectorFp point(b * d);
      for (int t = 0; t < d; ++t) point.segment(t * b, b) = fixed[static_cast<std::size_t>(t)];
      return f(point);
    };
    if (!at(VectorFp::Zero(b)).is_zero()) return std::nullopt;
    VectorFp coeffs(b);
    for (Index l = 0; l < b; ++l) coeffs(l) = at(VectorFp::Unit(b, l));
    const VectorFp probe = random_vector(rng, b);
    if (at(probe) != coeffs.dot(probe)) return std::nullopt;
    return coeffs;
  }
};

}  // namespace

VectorFp unit_point(const LinearMatrix& x, int i, int j) {
  const MatrixFp forms = entry_forms(x);
  if (forms.rows() != forms.cols() || !is_invertible(forms))
    throw SingularMatrix();
  return inverse(forms) * VectorFp::Unit(forms.rows(), static_cast<Index>(i) * x.cols() + j);
}

Outcome<TensorIsoWitness> degree_d_to_3(const Blackbox& f, int w, const MmtiOracle& mmti, Rng& rng,
                                        const std::optional<MatrixFp>& embedding, RunLog* log) {
  const Index b = static_cast<Index>(w) * w;
  const auto n = static_cast<Index>(f.num_vars());
  if (w < 2 || n % b != 0 || n / b < 3) return Rejection{"dimension", "input is not a tensor over w^2-sized blocks"};
  const int d = static_cast<int>(n / b);
  if (d == 3) return mmti.solve(f, w, rng, embedding, log);
  const MatrixFp base = embedding ? *embedding : MatrixFp::Identity(n, n);

  std::vector<Index> head(static_cast<std::size_t>(3 * b));
  for (Index v = 0; v < 3 * b; ++v) head[static_cast<std::size_t>(v)] = v;
  std::optional<TensorIsoWitness> first;
  for (int attempt = 0; attempt < 2 && !first; ++attempt) {
    const VectorFp point = random_vector(rng, n);
    auto answer = mmti.solve(substitute(f, head, point), w, rng, MatrixFp(base.leftCols(3 * b)), log);
    if (answer.ok()) first = *answer;
    else if (attempt == 1) return answer.rejection();
  }
  log_pass(log, "mmti");

  std::vector<LinearMatrix> x;
  for (int k = 0; k < 3; ++k) x.push_back(block_matrix_from_rows(w, k, first->blocks[static_cast<std::size_t>(k)]));
  // unit[k][i * w + j] = point sending X'_k to E_ij
  std::vector<std::vector<VectorFp>> unit(static_cast<std::size_t>(d));
  auto fill_units = [&](int k) {
    for (int i = 0; i < w; ++i)
      for (int j = 0; j < w; ++j) unit[static_cast<std::size_t>(k)].push_back(unit_point(x[static_cast<std::size_t>(k)], i, j));
  };
  auto u = [&](int k, int i, int j) { return unit[static_cast<std::size_t>(k)][static_cast<std::size_t>(i * w + j)]; };

  const BlockEvaluator eval{f, b, d};
  std::vector<VectorFp> fixed(static_cast<std::size_t>(d), VectorFp::Zero(b));
  auto assemble = [&](int k, auto&& setup) -> std::optional<LinearMatrix> {
    LinearMatrix out(w, w, b);
    for (int i = 0; i < w; ++i)
      for (int j = 0; j < w; ++j) {
        setup(i, j);
        auto form = eval.linear_form(fixed, k, rng);
        if (!form) return std::nullopt;
        out.set_entry(i, j, *form);
      }
    return out;
  };

  try {
    for (int k = 0; k < 3; ++k) fill_units(k);
    if (d == 4) {
      auto x3 = assemble(3, [&](int i, int j) {
        fixed[0] = u(0, j, 0);
        fixed[1] = u(1, 0, 0);
        fixed[2] = u(2, 0, i);
      });
      if (!x3) return Rejection{"linear-form", "entry of the last matrix is not a linear form"};
      x.push_back(*x3);
    } else {
      VectorFp anchor(n);
      anchor << u(0, 0, 0), u(1, 0, 0), u(2, 0, 0), VectorFp::Zero(n - 3 * b);
      std::vector<Index> tail;
      for (Index v = 3 * b; v < n; ++v) tail.push_back(v);
      SetMultABP suffix;
      try {
        suffix = reconstruct_abp(substitute(f, tail, anchor), d - 3, b, w, rng);
      } catch (const AnchorSingular& e) {
        return Rejection{"abp-reconstruction", e.what()};
      } catch (const CertificationFailed& e) {
        return Rejection{"abp-reconstruction", e.what()};
      }
      log_pit(log, 50);
      log_pass(log, "abp-reconstruction");

      const MatrixFp last_forms = entry_forms(suffix.layers.back());
      std::vector<VectorFp> last_units;
      for (int j = 0; j < w; ++j) {
        auto sol = solve_linear(last_forms, VectorFp::Unit(w, j));
        if (!sol) return Rejection{"unit-point", "last suffix layer has dependent entries"};
        last_units.push_back(*sol);
      }
      std::vector<LinearMatrix> middle;
      for (int k = 4; k <= d - 2; ++k) middle.push_back(suffix.layers[static_cast<std::size_t>(k - 3)]);

      x.push_back(LinearMatrix(w, w, b));  // placeholder for X'_3
      for (auto& m : middle) x.push_back(m);
      for (int k = 4; k <= d - 2; ++k) fill_units(k);

      auto x3 = assemble(3, [&](int i, int j) {
        fixed[0] = u(0, 0, 0);
        fixed[1] = u(1, 0, 0);
        fixed[2] = u(2, 0, i);
        for (int k = 4; k <= d - 2; ++k) fixed[static_cast<std::size_t>(k)] = u(k, j, j);
        fixed[static_cast<std::size_t>(d - 1)] = last_units[static_cast<std::size_t>(j)];
      });
      if (!x3) return Rejection{"linear-form", "entry of X'_3 is not a linear form"};
      x[3] = *x3;
      fill_units(3);

      auto xl = assemble(d - 1, [&](int i, int j) {
        fixed[0] = u(0, j, 0);
        for (int k = 1; k <= d - 3; ++k) fixed[static_cast<std::size_t>(k)] = u(k, 0, 0);
        fixed[static_cast<std::size_t>(d - 2)] = u(d - 2, 0, i);
      });
      if (!xl) return Rejection{"linear-form", "entry of the last matrix is not a linear form"};
      x.push_back(*xl);
    }
  } catch (const SingularMatrix& e) {
    return Rejection{"unit-point", e.what()};
  }
  log_pass(log, "linear-form");

  TensorIsoWitness witness;
  for (int k = 0; k < d; ++k) witness.blocks.push_back(rows_from_block_matrix(w, k, x[static_cast<std::size_t>(k)]));
  log_pit(log, kPitTrials);
  if (!verify_witness(f, TrimmShape{w, d}, witness.blocks, kPitTrials, rng))
    return Rejection{"final-pit", "witness does not reproduce the tensor"};
  log_pass(log, "final-pit");
  return witness;
}

}  // namespace traceiso
