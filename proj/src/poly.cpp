#include "traceiso/poly.hpp"

#include <algorithm>

namespace traceiso {

UniPolyFp powmod(const UniPolyFp& base, std::uint64_t e, const UniPolyFp& mod) {
  UniPolyFp r = UniPolyFp::constant(Fp(1)) % mod;
  UniPolyFp b = base % mod;
  while (e) {
    if (e & 1) r = (r * b) % mod;
    b = (b * b) % mod;
    e >>= 1;
  }
  return r;
}

bool squarefree_test(const UniPolyFp& q) {
  if (q.is_zero()) return false;
  return gcd(q, q.derivative()).degree() == 0;
}

namespace {

UniPolyFp pth_root(const UniPolyFp& f) {
  const auto p = static_cast<std::size_t>(current_modulus().value());
  std::vector<Fp> c;
  for (std::size_t k = 0; k * p < f.coeffs().size(); ++k) c.push_back(f.coeffs()[k * p]);
  return UniPolyFp(std::move(c));
}

void squarefree_parts(const UniPolyFp& f, int scale, std::vector<std::pair<UniPolyFp, int>>& out) {
  if (f.degree() <= 0) return;
  UniPolyFp c = gcd(f, f.derivative());
  UniPolyFp w = f.monic() / c;
  int i = 1;
  while (w.degree() > 0) {
    UniPolyFp y = gcd(w, c);
    UniPolyFp z = w / y;
    if (z.degree() > 0) out.emplace_back(z.monic(), i * scale);
    ++i;
    w = y;
    c = c / y;
  }
  if (c.degree() > 0) {
    const int p = static_cast<int>(std::min<std::uint64_t>(current_modulus().value(), 1u << 30));
    squarefree_parts(pth_root(c.monic()), scale * p, out);
  }
}

void equal_degree_split(const UniPolyFp& g, int degree, Rng& rng, std::vector<UniPolyFp>& out) {
  if (g.degree() == degree) {
    out.push_back(g.monic());
    return;
  }
  const std::uint64_t p = current_modulus().value();
  for (;;) {
    std::vector<Fp> c(static_cast<std::size_t>(g.degree()));
    for (auto& x : c) x = rng.uniform();
    UniPolyFp a(std::move(c));
    if (a.degree() <= 0) continue;
    UniPolyFp t = a, acc = a;
    for (int j = 1; j < degree; ++j) {
      t = powmod(t, p, g);
      acc = (acc * t) % g;
    }
    UniPolyFp b = powmod(acc, (p - 1) / 2, g) - UniPolyFp::constant(Fp(1));
    UniPolyFp d = gcd(b, g);
    if (d.degree() > 0 && d.degree() < g.degree()) {
      equal_degree_split(d, degree, rng, out);
      equal_degree_split(g / d, degree, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<UniPolyFp, int>> factor_univariate(const UniPolyFp& q, Rng& rng) {
  if (q.is_zero()) throw std::invalid_argument("factor_univariate: zero polynomial");
  std::vector<std::pair<UniPolyFp, int>> parts;
  squarefree_parts(q.monic(), 1, parts);
  std::vector<std::pair<UniPolyFp, int>> out;
  const std::uint64_t p = current_modulus().value();
  for (const auto& [part, mult] : parts) {
    UniPolyFp g = part;
    UniPolyFp h = UniPolyFp::x();
    for (int i = 1; 2 * i <= g.degree(); ++i) {
      h = powmod(h, p, g);
      UniPolyFp prod = gcd(h - UniPolyFp::x(), g);
      if (prod.degree() > 0) {
        std::vector<UniPolyFp> pieces;
        equal_degree_split(prod, i, rng, pieces);
        for (auto& f : pieces) out.emplace_back(std::move(f), mult);
        g = g / prod;
        h = h % g;
      }
    }
    if (g.degree() > 0) out.emplace_back(g.monic(), mult);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
    return std::lexicographical_compare(a.first.coeffs().begin(), a.first.coeffs().end(), b.first.coeffs().begin(),
                                        b.first.coeffs().end(), [](Fp x, Fp y) { return x.value() < y.value(); });
  });
  return out;
}

MultiPoly MultiPoly::constant(std::size_t num_vars, Fp c) {
  MultiPoly r(num_vars);
  r.add_term(Exponents(num_vars, 0), c);
  return r;
}

MultiPoly MultiPoly::variable(std::size_t num_vars, std::size_t i) {
  MultiPoly r(num_vars);
  Exponents e(num_vars, 0);
  e.at(i) = 1;
  r.add_term(e, Fp(1));
  return r;
}

MultiPoly MultiPoly::linear_form(const VectorFp& coeffs, Fp constant) {
  const auto n = static_cast<std::size_t>(coeffs.size());
  MultiPoly r(n);
  Exponents e(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = 1;
    r.add_term(e, coeffs(static_cast<Index>(i)));
    e[i] = 0;
  }
  r.add_term(e, constant);
  return r;
}

int MultiPoly::total_degree() const {
  int best = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (auto x : e) s += x;
    best = std::max(best, s);
  }
  return best;
}

bool MultiPoly::is_homogeneous() const {
  int deg = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (auto x : e) s += x;
    if (deg >= 0 && s != deg) return false;
    deg = s;
  }
  return true;
}

Fp MultiPoly::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Fp(0) : it->second;
}

void MultiPoly::add_term(const Exponents& e, Fp c) {
  if (e.size() != n_) throw ShapeMismatch("MultiPoly: exponent length mismatch");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Fp MultiPoly::eval(std::span<const Fp> point) const {
  if (point.size() != n_) throw ShapeMismatch("MultiPoly::eval: arity mismatch");
  Fp total(0);
  for (const auto& [e, c] : terms_) {
    Fp t = c;
    for (std::size_t i = 0; i < n_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= point[i];
    total += t;
  }
  return total;
}

MultiPoly MultiPoly::partial(std::size_t i) const {
  MultiPoly r(n_);
  for (const auto& [e, c] : terms_) {
    if (e.at(i) == 0) continue;
    Exponents f = e;
    --f[i];
    r.add_term(f, c * Fp(static_cast<long long>(e[i])));
  }
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  if (o.n_ != n_) throw ShapeMismatch("MultiPoly: arity mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  if (o.n_ != n_) throw ShapeMismatch("MultiPoly: arity mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  if (a.n_ != b.n_) throw ShapeMismatch("MultiPoly: arity mismatch");
  MultiPoly r(a.n_);
  MultiPoly::Exponents e(a.n_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < a.n_; ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
      r.add_term(e, ca * cb);
    }
  return r;
}

MultiPoly operator*(MultiPoly a, Fp s) {
  if (s.is_zero()) return MultiPoly(a.n_);
  for (auto& [e, c] : a.terms_) c *= s;
  return a;
}

MultiPoly MultiPoly::pow(int e) const {
  MultiPoly r = constant(n_, Fp(1));
  for (int k = 0; k < e; ++k) r = r * *this;
  return r;
}

std::vector<MultiPoly::Exponents> monomials_up_to(std::size_t num_vars, int max_degree, bool exact) {
  std::vector<MultiPoly::Exponents> out;
  MultiPoly::Exponents cur(num_vars, 0);
  auto rec = [&](auto&& self, std::size_t var, int remaining) -> void {
    if (var + 1 == num_vars || num_vars == 0) {
      if (num_vars == 0) {
        if (!exact || remaining == 0) out.push_back(cur);
        return;
      }
      for (int k = exact ? remaining : 0; k <= remaining; ++k) {
        cur[var] = static_cast<std::uint16_t>(k);
        out.push_back(cur);
      }
      cur[var] = 0;
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      cur[var] = static_cast<std::uint16_t>(k);
      self(self, var + 1, remaining - k);
    }
    cur[var] = 0;
  };
  rec(rec, 0, max_degree);
  return out;
}

}  // namespace traceiso
