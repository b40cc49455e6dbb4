#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "traceiso/field.hpp"
#include "traceiso/linalg.hpp"

namespace traceiso {

struct DuplicateNode : std::invalid_argument {
  DuplicateNode() : std::invalid_argument("interpolation nodes are not distinct") {}
};

/// Dense univariate polynomial, coefficients from the constant term up.
template <class S>
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<S> coeffs) : c_(std::move(coeffs)) { trim(); }
  static UniPoly constant(S c) { return UniPoly(std::vector<S>{c}); }
  static UniPoly monomial(S c, int degree) {
    std::vector<S> v(static_cast<std::size_t>(degree + 1), S(0));
    v.back() = c;
    return UniPoly(std::move(v));
  }
  static UniPoly x() { return monomial(S(1), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<S>& coeffs() const { return c_; }
  S operator[](int k) const { return k >= 0 && k <= degree() ? c_[static_cast<std::size_t>(k)] : S(0); }
  S lead() const { return c_.empty() ? S(0) : c_.back(); }

  UniPoly monic() const {
    if (is_zero()) return *this;
    return *this * (S(1) / lead());
  }

  S operator()(S t) const {
    S r(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * t + *it;
    return r;
  }

  UniPoly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<S> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = S(static_cast<long long>(k)) * c_[k];
    return UniPoly(std::move(d));
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<S> r(std::max(a.c_.size(), b.c_.size()), S(0));
    for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] += b.c_[k];
    return UniPoly(std::move(r));
  }
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + b * S(-1); }
  friend UniPoly operator*(const UniPoly& a, S s) {
    if (s == S(0)) return {};
    std::vector<S> r = a.c_;
    for (auto& x : r) x *= s;
    return UniPoly(std::move(r));
  }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<S> r(a.c_.size() + b.c_.size() - 1, S(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == S(0)) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return UniPoly(std::move(r));
  }
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

  /// Quotient and remainder; throws DivisionByZero for a zero divisor.
  std::pair<UniPoly, UniPoly> divmod(const UniPoly& b) const {
    if (b.is_zero()) throw DivisionByZero();
    if (degree() < b.degree()) return {UniPoly(), *this};
    std::vector<S> r = c_;
    std::vector<S> q(static_cast<std::size_t>(degree() - b.degree() + 1), S(0));
    const S inv = S(1) / b.lead();
    const std::size_t bd = static_cast<std::size_t>(b.degree());
    for (std::size_t k = r.size(); k-- > bd;) {
      const S f = r[k] * inv;
      if (f == S(0)) continue;
      q[k - bd] = f;
      for (std::size_t j = 0; j <= bd; ++j) r[k - bd + j] -= f * b.c_[j];
    }
    r.resize(bd);
    return {UniPoly(std::move(q)), UniPoly(std::move(r))};
  }
  friend UniPoly operator/(const UniPoly& a, const UniPoly& b) { return a.divmod(b).first; }
  friend UniPoly operator%(const UniPoly& a, const UniPoly& b) { return a.divmod(b).second; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == S(0)) c_.pop_back();
  }
  std::vector<S> c_;
};

/// Monic gcd (zero if both inputs are zero).
template <class S>
UniPoly<S> gcd(UniPoly<S> a, UniPoly<S> b) {
  while (!b.is_zero()) {
    auto r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

template <class S>
UniPoly<S> interpolate_univariate(std::span<const S> ts, std::span<const S> vs) {
  if (ts.size() != vs.size()) throw ShapeMismatch("interpolate_univariate: size mismatch");
  const std::size_t n = ts.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (ts[i] == ts[j]) throw DuplicateNode();
  UniPoly<S> master = UniPoly<S>::constant(S(1));
  for (const S& t : ts) master = master * UniPoly<S>(std::vector<S>{-t, S(1)});
  UniPoly<S> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (vs[i] == S(0)) continue;
    UniPoly<S> basis = master / UniPoly<S>(std::vector<S>{-ts[i], S(1)});
    out = out + basis * (vs[i] / basis(ts[i]));
  }
  return out;
}

/// p(M) by Horner's rule.
template <class S, class Derived>
MatrixX<S> eval_at_matrix(const UniPoly<S>& p, const Eigen::MatrixBase<Derived>& m) {
  const Index n = m.rows();
  MatrixX<S> r = MatrixX<S>::Zero(n, n);
  for (int k = p.degree(); k >= 0; --k) {
    r = (r * m).eval();
    for (Index i = 0; i < n; ++i) r(i, i) += p[k];
  }
  return r;
}

using UniPolyFp = UniPoly<Fp>;

UniPolyFp powmod(const UniPolyFp& base, std::uint64_t e, const UniPolyFp& mod);
bool squarefree_test(const UniPolyFp& q);
/// Irreducible monic factors with multiplicities (Cantor-Zassenhaus).
std::vector<std::pair<UniPolyFp, int>> factor_univariate(const UniPolyFp& q, Rng& rng);

/// Sparse multivariate polynomial over F_p.
class MultiPoly {
 public:
  using Exponents = std::vector<std::uint16_t>;
  using TermMap = std::map<Exponents, Fp>;

  explicit MultiPoly(std::size_t num_vars = 0) : n_(num_vars) {}
  static MultiPoly constant(std::size_t num_vars, Fp c);
  static MultiPoly variable(std::size_t num_vars, std::size_t i);
  static MultiPoly linear_form(const VectorFp& coeffs, Fp constant = Fp(0));

  std::size_t num_vars() const { return n_; }
  const TermMap& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;
  bool is_homogeneous() const;
  Fp coefficient(const Exponents& e) const;
  void add_term(const Exponents& e, Fp c);

  Fp eval(std::span<const Fp> point) const;
  Fp eval(const VectorFp& point) const { return eval(std::span<const Fp>(point.data(), static_cast<std::size_t>(point.size()))); }
  MultiPoly partial(std::size_t i) const;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, Fp s);
  friend MultiPoly operator*(Fp s, MultiPoly a) { return std::move(a) * s; }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.n_ == b.n_ && a.terms_ == b.terms_; }
  MultiPoly pow(int e) const;

 private:
  std::size_t n_;
  TermMap terms_;
};

/// All exponent vectors of total degree at most `max_degree` (or exactly, if `exact`).
std::vector<MultiPoly::Exponents> monomials_up_to(std::size_t num_vars, int max_degree, bool exact = false);

}  // namespace traceiso
