#include "traceiso/fmai.hpp"

#include "traceiso/lie.hpp"
#include "traceiso/tensor.hpp"

namespace traceiso {

namespace {

MatrixFp basis_columns(const AlgebraInput& a) {
  MatrixFp cols(a.m * a.m, static_cast<Index>(a.basis.size()));
  for (std::size_t c = 0; c < a.basis.size(); ++c) {
    if (a.basis[c].rows() != a.m || a.basis[c].cols() != a.m) throw InputError("basis matrix has the wrong size");
    cols.col(static_cast<Index>(c)) = flatten(a.basis[c]);
  }
  return cols;
}

MatrixFp unvec_cols(const VectorFp& v, Index s) {
  MatrixFp m(s, s);
  for (Index j = 0; j < s; ++j)
    for (Index i = 0; i < s; ++i) m(i, j) = v(j * s + i);
  return m;
}

int exact_root(std::size_t r) {
  int w = 0;
  while (static_cast<std::size_t>((w + 1) * (w + 1)) <= r) ++w;
  return static_cast<std::size_t>(w * w) == r ? w : 0;
}

}  // namespace

std::optional<VectorFp> algebra_coordinates(const AlgebraInput& a, const MatrixFp& m) {
  return solve_linear(basis_columns(a), flatten(m));
}

std::vector<MatrixFp> left_mult_matrices(const AlgebraInput& a) {
  const MatrixFp cols = basis_columns(a);
  const auto r = static_cast<Index>(a.basis.size());
  if (rank(cols) != r) throw InputError("basis is linearly dependent");
  std::vector<MatrixFp> out;
  for (Index i = 0; i < r; ++i) {
    MatrixFp l(r, r);
    for (Index c = 0; c < r; ++c) {
      auto coords = solve_linear(cols, flatten(MatrixFp(a.basis[static_cast<std::size_t>(i)] * a.basis[static_cast<std::size_t>(c)])));
      if (!coords) throw NotClosed("product of basis elements leaves the span");
      l.col(c) = *coords;
    }
    out.push_back(std::move(l));
  }
  return out;
}

std::vector<MatrixFp> commutant_basis(const std::vector<MatrixFp>& mats) {
  if (mats.empty()) throw std::invalid_argument("commutant_basis: empty family");
  const Index s = mats.front().rows();
  const MatrixFp id = MatrixFp::Identity(s, s);
  MatrixFp system(static_cast<Index>(mats.size()) * s * s, s * s);
  for (std::size_t t = 0; t < mats.size(); ++t) {
    if (mats[t].rows() != s || mats[t].cols() != s) throw ShapeMismatch("commutant_basis: sizes differ");
    system.middleRows(static_cast<Index>(t) * s * s, s * s) = kron(mats[t].transpose(), id) - kron(id, mats[t]);
  }
  const MatrixFp null = nullspace(system);
  std::vector<MatrixFp> out;
  for (Index c = 0; c < null.cols(); ++c) out.push_back(unvec_cols(null.col(c), s));
  return out;
}

MatrixFp constrained_tensor_space(const std::vector<MatrixFp>& left, const std::vector<MatrixFp>& commutant, int w) {
  if (w > 2) throw SizeBound("constrained tensor is limited to w <= 2");
  const Index b = static_cast<Index>(w) * w;
  const Index total = b * b * b * b;
  const Index stride[4] = {b * b * b, b * b, b, 1};
  const std::size_t gens = 2 * (left.size() + commutant.size());
  MatrixFp system = MatrixFp::Zero(static_cast<Index>(gens) * total, total);
  Index row0 = 0;
  for (int k = 0; k < 4; ++k) {
    const int next = (k + 1) % 4;
    const auto& family = k % 2 == 0 ? left : commutant;
    for (const auto& g : family) {
      // block k carries g^T and block k+1 carries -g
      const MatrixFp ek = g.transpose();
      const MatrixFp en = -g;
      for (Index t = 0; t < total; ++t) {
        const Index ck = (t / stride[k]) % b;
        const Index cn = (t / stride[next]) % b;
        for (Index a = 0; a < b; ++a) {
          system(row0 + t, t + (a - ck) * stride[k]) += ek(a, ck);
          system(row0 + t, t + (a - cn) * stride[next]) += en(a, cn);
        }
      }
      row0 += total;
    }
  }
  return nullspace(system.topRows(row0));
}

MultiPoly build_constrained_tensor(const std::vector<MatrixFp>& left, const std::vector<MatrixFp>& commutant, int w,
                                   Rng& rng) {
  const MatrixFp space = constrained_tensor_space(left, commutant, w);
  if (space.cols() == 0) throw Degenerate("constrained tensor system has only the zero solution");
  VectorFp coeffs = space * random_vector(rng, space.cols());
  if (is_zero(coeffs)) coeffs = space.col(0);
  const Index b = static_cast<Index>(w) * w;
  MultiPoly f(static_cast<std::size_t>(4 * b));
  for (Index t = 0; t < coeffs.size(); ++t) {
    if (coeffs(t).is_zero()) continue;
    MultiPoly::Exponents e(static_cast<std::size_t>(4 * b), 0);
    Index rest = t;
    for (int k = 3; k >= 0; --k) {
      ++e[static_cast<std::size_t>(k * b + rest % b)];
      rest /= b;
    }
    f.add_term(e, coeffs(t));
  }
  return f;
}

bool verify_algebra_iso(const AlgebraInput& a, const AlgebraIso& iso) {
  if (iso.images.size() != a.basis.size()) return false;
  for (const auto& f : iso.images)
    if (f.rows() != iso.w || f.cols() != iso.w) return false;
  SpanBasis<Fp> span(static_cast<Index>(iso.w) * iso.w);
  for (const auto& f : iso.images) span.insert(flatten(f));
  if (span.dim() != static_cast<Index>(iso.w) * iso.w) return false;
  for (std::size_t i = 0; i < a.basis.size(); ++i)
    for (std::size_t j = 0; j < a.basis.size(); ++j) {
      auto coords = algebra_coordinates(a, MatrixFp(a.basis[i] * a.basis[j]));
      if (!coords) return false;
      MatrixFp image = MatrixFp::Zero(iso.w, iso.w);
      for (std::size_t t = 0; t < a.basis.size(); ++t) image += (*coords)(static_cast<Index>(t)) * iso.images[t];
      if (image != MatrixFp(iso.images[i] * iso.images[j])) return false;
    }
  return true;
}

Outcome<AlgebraIso> fmai_solve(const AlgebraInput& a, const MmtiOracle& mmti, Rng& rng, RunLog* log) {
  const int w = exact_root(a.basis.size());
  if (w < 2) return Rejection{"basis-size", "basis size is not w^2 with w >= 2"};
  log_pass(log, "basis-size");

  std::vector<MatrixFp> left;
  try {
    left = left_mult_matrices(a);
  } catch (const NotClosed& e) {
    return Rejection{"not-closed", e.what()};
  }
  log_pass(log, "not-closed");

  std::vector<MatrixFp> transposed;
  for (const auto& l : left) transposed.push_back(l.transpose());
  const std::vector<MatrixFp> commutant = commutant_basis(transposed);
  if (static_cast<int>(commutant.size()) != w * w)
    return Rejection{"commutant-dimension", "commutant has dimension " + std::to_string(commutant.size())};
  log_pass(log, "commutant-dimension");

  MultiPoly f;
  try {
    f = build_constrained_tensor(left, commutant, w, rng);
  } catch (const Degenerate& e) {
    return Rejection{"constrained-tensor", e.what()};
  }
  log_pass(log, "constrained-tensor");

  auto wit = degree_d_to_3(Blackbox::from_poly(f), w, mmti, rng, {}, log);
  if (!wit.ok()) return wit.rejection();

  const MatrixFp& b0 = wit->blocks[0];
  const MatrixFp& b1 = wit->blocks[1];
  const MatrixFp b0_inv = inverse(b0), b1_inv = inverse(b1);
  const MatrixFp id = MatrixFp::Identity(w, w);
  AlgebraIso iso{w, {}};
  for (const auto& l : left) {
    const MatrixFp conj = b1 * l * b1_inv;
    const MatrixFp image = conj.topLeftCorner(w, w);
    if (conj != kron(id, image)) return Rejection{"isomorphism-extraction", "conjugate is not of the form I (x) F"};
    if (MatrixFp(b0 * l.transpose() * b0_inv) != kron(id, MatrixFp(image.transpose())))
      return Rejection{"isomorphism-extraction", "transposed identity does not match"};
    iso.images.push_back(image);
  }
  log_pass(log, "isomorphism-extraction");
  if (!verify_algebra_iso(a, iso)) return Rejection{"multiplicativity", "map is not a bijective homomorphism"};
  log_pass(log, "multiplicativity");
  return iso;
}

AlgebraInput planted_algebra(int w, Rng& rng) {
  const Index s = static_cast<Index>(w) * w;
  const MatrixFp k = random_invertible(rng, s);
  const MatrixFp k_inv = inverse(k);
  const MatrixFp id = MatrixFp::Identity(w, w);
  std::vector<MatrixFp> units;
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < w; ++j) {
      MatrixFp e = MatrixFp::Zero(w, w);
      e(i, j) = Fp(1);
      units.push_back(k_inv * kron(id, e) * k);
    }
  const MatrixFp mix = random_invertible(rng, s);
  AlgebraInput out{s, {}};
  for (Index a = 0; a < s; ++a) {
    MatrixFp m = MatrixFp::Zero(s, s);
    for (Index c = 0; c < s; ++c) m += mix(a, c) * units[static_cast<std::size_t>(c)];
    out.basis.push_back(std::move(m));
  }
  return out;
}

AlgebraInput diagonal_algebra(Index m) {
  AlgebraInput out{m, {}};
  for (Index i = 0; i < m; ++i) {
    MatrixFp e = MatrixFp::Zero(m, m);
    e(i, i) = Fp(1);
    out.basis.push_back(std::move(e));
  }
  return out;
}

}  // namespace traceiso
