#include "traceiso/blackbox.hpp"

#include <bit>

namespace traceiso {

namespace {

VectorFp random_point(Rng& rng, std::size_t n) { return random_vector(rng, static_cast<Index>(n)); }

}  // namespace

Blackbox Blackbox::from_poly(MultiPoly p) {
  auto shared = std::make_shared<const MultiPoly>(std::move(p));
  const int deg = std::max(shared->total_degree(), 0);
  return Blackbox(shared->num_vars(), deg, [shared](std::span<const Fp> x) { return shared->eval(x); }, shared);
}

Blackbox compose_linear(const Blackbox& f, const MatrixFp& a) {
  if (static_cast<std::size_t>(a.rows()) != f.num_vars())
    throw ArityMismatch("compose_linear: matrix rows must equal the blackbox arity");
  auto inner = std::make_shared<const Blackbox>(f);
  auto mat = std::make_shared<const MatrixFp>(a);
  return Blackbox(static_cast<std::size_t>(a.cols()), f.degree(), [inner, mat](std::span<const Fp> x) {
    Eigen::Map<const VectorFp> xv(x.data(), static_cast<Index>(x.size()));
    VectorFp y = *mat * xv;
    return (*inner)(y);
  });
}

Blackbox substitute(const Blackbox& f, std::vector<Index> free_vars, const VectorFp& base) {
  if (static_cast<std::size_t>(base.size()) != f.num_vars()) throw ArityMismatch("substitute: base point arity");
  auto inner = std::make_shared<const Blackbox>(f);
  auto vars = std::make_shared<const std::vector<Index>>(std::move(free_vars));
  auto pt = std::make_shared<const VectorFp>(base);
  return Blackbox(vars->size(), f.degree(), [inner, vars, pt](std::span<const Fp> y) {
    VectorFp x = *pt;
    for (std::size_t t = 0; t < vars->size(); ++t) x((*vars)[t]) = y[t];
    return (*inner)(x);
  });
}

namespace {

Fp derivative_from_axis(const Blackbox& f, Index var, const VectorFp& point, Fp value_at_point) {
  const int d = f.degree();
  if (d <= 0) return Fp(0);
  std::vector<Fp> ts(static_cast<std::size_t>(d + 1)), vs(ts.size());
  VectorFp x = point;
  for (int s = 0; s <= d; ++s) {
    ts[static_cast<std::size_t>(s)] = Fp(s);
    if (s == 0) {
      vs[0] = value_at_point;
      continue;
    }
    x(var) = point(var) + Fp(s);
    vs[static_cast<std::size_t>(s)] = f(x);
  }
  return interpolate_univariate<Fp>(ts, vs)[1];
}

}  // namespace

Fp bb_partial_derivative_at(const Blackbox& f, Index var, const VectorFp& point) {
  return derivative_from_axis(f, var, point, f(point));
}

VectorFp bb_gradient_at(const Blackbox& f, const VectorFp& point) {
  const Fp at = f(point);
  VectorFp g(point.size());
  for (Index i = 0; i < point.size(); ++i) g(i) = derivative_from_axis(f, i, point, at);
  return g;
}

bool pit_equal(const Blackbox& f, const Blackbox& g, int trials, Rng& rng) {
  if (f.num_vars() != g.num_vars()) throw ArityMismatch("pit_equal: arity mismatch");
  for (int t = 0; t < trials; ++t) {
    VectorFp a = random_point(rng, f.num_vars());
    if (f(a) != g(a)) return false;
  }
  return true;
}

bool pit_zero(const Blackbox& f, int trials, Rng& rng) {
  for (int t = 0; t < trials; ++t)
    if (!f(random_point(rng, f.num_vars())).is_zero()) return false;
  return true;
}

LinearMatrix::LinearMatrix(Index rows, Index cols, Index num_vars)
    : rows_(rows),
      cols_(cols),
      coeff_(static_cast<std::size_t>(num_vars), MatrixFp::Zero(rows, cols)),
      constant_(MatrixFp::Zero(rows, cols)) {}

LinearMatrix LinearMatrix::symbolic(Index rows, Index cols) {
  LinearMatrix x(rows, cols, rows * cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) x.coefficient(i * cols + j)(i, j) = Fp(1);
  return x;
}

VectorFp LinearMatrix::entry(Index i, Index j) const {
  VectorFp v(num_vars());
  for (Index l = 0; l < num_vars(); ++l) v(l) = coeff_[static_cast<std::size_t>(l)](i, j);
  return v;
}

void LinearMatrix::set_entry(Index i, Index j, const VectorFp& coeffs, Fp constant) {
  if (coeffs.size() != num_vars()) throw ShapeMismatch("LinearMatrix::set_entry: coefficient length");
  for (Index l = 0; l < num_vars(); ++l) coeff_[static_cast<std::size_t>(l)](i, j) = coeffs(l);
  constant_(i, j) = constant;
}

MultiPoly LinearMatrix::entry_poly(Index i, Index j) const { return MultiPoly::linear_form(entry(i, j), constant_(i, j)); }

MatrixFp LinearMatrix::eval(std::span<const Fp> point) const {
  if (static_cast<Index>(point.size()) != num_vars()) throw ArityMismatch("LinearMatrix::eval: arity mismatch");
  MatrixFp m = constant_;
  for (std::size_t l = 0; l < coeff_.size(); ++l)
    if (!point[l].is_zero()) m += point[l] * coeff_[l];
  return m;
}

LinearMatrix LinearMatrix::transpose() const {
  LinearMatrix t(cols_, rows_, num_vars());
  for (std::size_t l = 0; l < coeff_.size(); ++l) t.coeff_[l] = coeff_[l].transpose();
  t.constant_ = constant_.transpose();
  return t;
}

LinearMatrix LinearMatrix::kron_identity_left(Index k) const {
  const MatrixFp id = MatrixFp::Identity(k, k);
  LinearMatrix t(k * rows_, k * cols_, num_vars());
  for (std::size_t l = 0; l < coeff_.size(); ++l) t.coeff_[l] = kron(id, coeff_[l]);
  t.constant_ = kron(id, constant_);
  return t;
}

bool LinearMatrix::is_zero() const {
  if (!traceiso::is_zero(constant_)) return false;
  for (const auto& c : coeff_)
    if (!traceiso::is_zero(c)) return false;
  return true;
}

LinearMatrix operator*(const MatrixFp& a, const LinearMatrix& x) {
  if (a.cols() != x.rows_) throw ShapeMismatch("LinearMatrix product: inner dimension");
  LinearMatrix r(a.rows(), x.cols_, x.num_vars());
  for (std::size_t l = 0; l < x.coeff_.size(); ++l) r.coeff_[l] = a * x.coeff_[l];
  r.constant_ = a * x.constant_;
  return r;
}

LinearMatrix operator*(const LinearMatrix& x, const MatrixFp& a) {
  if (x.cols_ != a.rows()) throw ShapeMismatch("LinearMatrix product: inner dimension");
  LinearMatrix r(x.rows_, a.cols(), x.num_vars());
  for (std::size_t l = 0; l < x.coeff_.size(); ++l) r.coeff_[l] = x.coeff_[l] * a;
  r.constant_ = x.constant_ * a;
  return r;
}

LinearMatrix operator*(Fp s, const LinearMatrix& x) {
  LinearMatrix r = x;
  for (auto& c : r.coeff_) c *= s;
  r.constant_ *= s;
  return r;
}

LinearMatrix operator+(const LinearMatrix& a, const LinearMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.num_vars() != b.num_vars())
    throw ShapeMismatch("LinearMatrix sum: shape mismatch");
  LinearMatrix r = a;
  for (std::size_t l = 0; l < r.coeff_.size(); ++l) r.coeff_[l] += b.coeff_[l];
  r.constant_ += b.constant_;
  return r;
}

bool operator==(const LinearMatrix& a, const LinearMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.num_vars() != b.num_vars()) return false;
  if (a.constant_ != b.constant_) return false;
  for (std::size_t l = 0; l < a.coeff_.size(); ++l)
    if (a.coeff_[l] != b.coeff_[l]) return false;
  return true;
}

MultiPoly det_linear_matrix(const LinearMatrix& y, Index size_bound) {
  if (y.rows() != y.cols()) throw ShapeMismatch("det_linear_matrix: matrix is not square");
  const Index m = y.rows();
  if (m > size_bound) throw SizeBound("det_linear_matrix: size " + std::to_string(m) + " exceeds bound");
  if (y.num_vars() > 16) throw SizeBound("det_linear_matrix: more than 16 variables");
  const auto n = static_cast<std::size_t>(y.num_vars());
  if (m == 0) return MultiPoly::constant(n, Fp(1));
  std::vector<std::vector<MultiPoly>> entries(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) entries[static_cast<std::size_t>(i)].push_back(y.entry_poly(i, j));
  // minors[mask]: rows 0..popcount-1 against the columns in mask
  std::vector<MultiPoly> minors(std::size_t{1} << m, MultiPoly(n));
  minors[0] = MultiPoly::constant(n, Fp(1));
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    const int k = std::popcount(mask);
    const auto& row = entries[static_cast<std::size_t>(k - 1)];
    MultiPoly acc(n);
    int pos = 0;
    for (Index j = 0; j < m; ++j) {
      if (!(mask & (1u << j))) continue;
      const MultiPoly& sub = minors[mask & ~(1u << j)];
      if (!sub.is_zero() && !row[static_cast<std::size_t>(j)].is_zero()) {
        MultiPoly term = row[static_cast<std::size_t>(j)] * sub;
        if ((k - 1 + pos) % 2 == 0)
          acc += term;
        else
          acc -= term;
      }
      ++pos;
    }
    minors[mask] = std::move(acc);
  }
  return minors.back();
}

Blackbox det_blackbox(const LinearMatrix& y) {
  if (y.rows() != y.cols()) throw ShapeMismatch("det_blackbox: matrix is not square");
  auto held = std::make_shared<const LinearMatrix>(y);
  return Blackbox(static_cast<std::size_t>(y.num_vars()), static_cast<int>(y.rows()),
                  [held](std::span<const Fp> x) { return determinant(held->eval(x)); });
}

MultiPoly normalize_leading(const MultiPoly& p) {
  const MultiPoly::Exponents* best = nullptr;
  int best_deg = -1;
  Fp lead;
  for (const auto& [e, c] : p.terms()) {
    int s = 0;
    for (auto x : e) s += x;
    if (s > best_deg || (s == best_deg && e > *best)) {
      best = &e;
      best_deg = s;
      lead = c;
    }
  }
  if (!best) return p;
  return p * lead.inverse();
}

namespace {

/// Power series s^(1/w) truncated after degree k, with s(0) = 1.
std::vector<Fp> series_root(const UniPolyFp& s, int w, int k) {
  const Fp alpha = Fp(w).inverse();
  std::vector<Fp> v(static_cast<std::size_t>(k + 1), Fp(0));
  v[0] = Fp(1);
  for (int m = 1; m <= k; ++m) {
    Fp acc(0);
    for (int j = 1; j <= m; ++j) acc += (alpha * Fp(j) - Fp(m - j)) * s[j] * v[static_cast<std::size_t>(m - j)];
    v[static_cast<std::size_t>(m)] = acc / Fp(m);
  }
  return v;
}

}  // namespace

MultiPoly wth_root(const Blackbox& p, int w, Rng& rng) {
  if (w < 1) throw std::invalid_argument("wth_root: w must be positive");
  const std::size_t n = p.num_vars();
  const int big_d = p.degree();
  const int k = big_d / w;
  if (static_cast<std::uint64_t>(big_d) >= current_modulus().value())
    throw std::invalid_argument("wth_root: modulus must exceed the degree");

  VectorFp anchor;
  Fp anchor_value;
  for (int attempt = 0;; ++attempt) {
    if (attempt == 20) throw NotAPerfectPower("wth_root: polynomial vanishes at every sampled point");
    anchor = random_point(rng, n);
    anchor_value = p(anchor);
    if (!anchor_value.is_zero()) break;
  }
  const Fp inv_anchor = anchor_value.inverse();

  std::vector<Fp> ts(static_cast<std::size_t>(big_d + 1));
  for (int t = 0; t <= big_d; ++t) ts[static_cast<std::size_t>(t)] = Fp(t);

  // g(x) / g(anchor) from the root of p restricted to the line through anchor and x.
  auto ratio_at = [&](const VectorFp& x) {
    std::vector<Fp> vs(ts.size());
    vs[0] = Fp(1);
    const VectorFp dir = x - anchor;
    for (int t = 1; t <= big_d; ++t) {
      VectorFp pt = anchor + Fp(t) * dir;
      vs[static_cast<std::size_t>(t)] = p(pt) * inv_anchor;
    }
    UniPolyFp s = interpolate_univariate<Fp>(ts, vs);
    UniPolyFp v(series_root(s, w, k));
    UniPolyFp vw = UniPolyFp::constant(Fp(1));
    for (int e = 0; e < w; ++e) vw = vw * v;
    if (!(vw == s)) throw NotAPerfectPower("wth_root: restriction to a line is not a w-th power");
    return v(Fp(1));
  };

  const auto mons = monomials_up_to(n, k);
  const auto count = static_cast<Index>(mons.size());
  auto mono_value = [&](const MultiPoly::Exponents& e, const VectorFp& x) {
    Fp t(1);
    for (std::size_t i = 0; i < n; ++i)
      for (int r = 0; r < e[i]; ++r) t *= x(static_cast<Index>(i));
    return t;
  };

  for (int attempt = 0; attempt < 3; ++attempt) {
    const Index samples = count + 8;
    MatrixFp sys(samples, count);
    VectorFp rhs(samples);
    for (Index r = 0; r < samples; ++r) {
      VectorFp x = random_point(rng, n);
      for (Index c = 0; c < count; ++c) sys(r, c) = mono_value(mons[static_cast<std::size_t>(c)], x);
      rhs(r) = ratio_at(x);
    }
    if (rank(sys) < count) continue;
    auto sol = solve_linear(sys, rhs);
    if (!sol) throw NotAPerfectPower("wth_root: root values are not polynomial of the expected degree");
    MultiPoly g(n);
    for (Index c = 0; c < count; ++c) g.add_term(mons[static_cast<std::size_t>(c)], (*sol)(c));
    g = normalize_leading(g);

    // Confirm p = c g^w.
    Fp scale;
    bool have_scale = false;
    for (int t = 0; t < 20 && !have_scale; ++t) {
      VectorFp x = random_point(rng, n);
      const Fp gx = g.eval(x);
      if (gx.is_zero()) continue;
      scale = p(x) / gx.pow(static_cast<std::uint64_t>(w));
      have_scale = true;
    }
    if (!have_scale) throw NotAPerfectPower("wth_root: candidate root vanishes");
    for (int t = 0; t < 20; ++t) {
      VectorFp x = random_point(rng, n);
      if (p(x) != scale * g.eval(x).pow(static_cast<std::uint64_t>(w)))
        throw NotAPerfectPower("wth_root: candidate root fails verification");
    }
    return g;
  }
  throw NotAPerfectPower("wth_root: interpolation system stayed rank deficient");
}

MultiPoly wth_root(const MultiPoly& p, int w, Rng& rng) {
  Blackbox bb = Blackbox::from_poly(p);
  return wth_root(bb, w, rng);
}

}  // namespace traceiso
