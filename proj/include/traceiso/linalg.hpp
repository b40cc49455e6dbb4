#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "traceiso/field.hpp"

namespace traceiso {

template <class S>
using MatrixX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using VectorX = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using RowMatrixX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using MatrixFp = MatrixX<Fp>;
using VectorFp = VectorX<Fp>;
using Index = Eigen::Index;

struct ShapeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularMatrix : std::domain_error {
  SingularMatrix() : std::domain_error("matrix is singular") {}
};

template <class S>
struct Echelon {
  RowMatrixX<S> reduced;
  std::vector<Index> pivots;
};

/// Reduced row echelon form by Gauss-Jordan elimination.
template <class S, class Derived>
Echelon<S> rref(const Eigen::MatrixBase<Derived>& a) {
  Echelon<S> out{a, {}};
  RowMatrixX<S>& m = out.reduced;
  const Index rows = m.rows(), cols = m.cols();
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index piv = r;
    while (piv < rows && m(piv, c) == S(0)) ++piv;
    if (piv == rows) continue;
    if (piv != r) m.row(piv).swap(m.row(r));
    const S inv = S(1) / m(r, c);
    S* pr = &m(r, 0);
    for (Index j = c; j < cols; ++j) pr[j] *= inv;
    for (Index i = 0; i < rows; ++i) {
      if (i == r) continue;
      S* pi = &m(i, 0);
      const S f = pi[c];
      if (f == S(0)) continue;
      for (Index j = c; j < cols; ++j) pi[j] -= f * pr[j];
    }
    out.pivots.push_back(c);
    ++r;
  }
  return out;
}

template <class Derived>
Index rank(const Eigen::MatrixBase<Derived>& a) {
  using S = typename Derived::Scalar;
  return static_cast<Index>(rref<S>(a).pivots.size());
}

/// Columns form a basis of {x : a x = 0}.
template <class Derived>
MatrixX<typename Derived::Scalar> nullspace(const Eigen::MatrixBase<Derived>& a) {
  using S = typename Derived::Scalar;
  const auto e = rref<S>(a);
  const Index n = a.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (Index c : e.pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  MatrixX<S> basis = MatrixX<S>::Zero(n, n - static_cast<Index>(e.pivots.size()));
  Index k = 0;
  for (Index free = 0; free < n; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    basis(free, k) = S(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) basis(e.pivots[r], k) = -e.reduced(static_cast<Index>(r), free);
    ++k;
  }
  return basis;
}

/// Some x with a x = b, or nullopt when the system is inconsistent.
template <class DA, class DB>
std::optional<VectorX<typename DA::Scalar>> solve_linear(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using S = typename DA::Scalar;
  if (a.rows() != b.rows()) throw ShapeMismatch("solve_linear: row count mismatch");
  MatrixX<S> aug(a.rows(), a.cols() + 1);
  aug << a, b;
  const auto e = rref<S>(aug);
  if (!e.pivots.empty() && e.pivots.back() == a.cols()) return std::nullopt;
  VectorX<S> x = VectorX<S>::Zero(a.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x(e.pivots[r]) = e.reduced(static_cast<Index>(r), a.cols());
  return x;
}

template <class Derived>
MatrixX<typename Derived::Scalar> inverse(const Eigen::MatrixBase<Derived>& a) {
  using S = typename Derived::Scalar;
  if (a.rows() != a.cols()) throw ShapeMismatch("inverse: matrix is not square");
  const Index n = a.rows();
  MatrixX<S> aug(n, 2 * n);
  aug << a, MatrixX<S>::Identity(n, n);
  const auto e = rref<S>(aug);
  if (static_cast<Index>(e.pivots.size()) < n || e.pivots[static_cast<std::size_t>(n - 1)] != n - 1) throw SingularMatrix();
  return e.reduced.rightCols(n);
}

template <class Derived>
bool is_invertible(const Eigen::MatrixBase<Derived>& a) {
  return a.rows() == a.cols() && rank(a) == a.rows();
}

template <class Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& a) {
  using S = typename Derived::Scalar;
  if (a.rows() != a.cols()) throw ShapeMismatch("determinant: matrix is not square");
  RowMatrixX<S> m = a;
  const Index n = m.rows();
  S det(1);
  for (Index c = 0; c < n; ++c) {
    Index piv = c;
    while (piv < n && m(piv, c) == S(0)) ++piv;
    if (piv == n) return S(0);
    if (piv != c) {
      m.row(piv).swap(m.row(c));
      det = -det;
    }
    det *= m(c, c);
    const S inv = S(1) / m(c, c);
    for (Index i = c + 1; i < n; ++i) {
      const S f = m(i, c) * inv;
      if (f == S(0)) continue;
      for (Index j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

/// Characteristic polynomial det(tI - a), coefficients from constant term up.
template <class Derived>
std::vector<typename Derived::Scalar> char_poly(const Eigen::MatrixBase<Derived>& a) {
  using S = typename Derived::Scalar;
  if (a.rows() != a.cols()) throw ShapeMismatch("char_poly: matrix is not square");
  const Index n = a.rows();
  MatrixX<S> h = a;
  // Hessenberg form by similarity.
  for (Index j = 0; j + 2 < n; ++j) {
    Index piv = j + 1;
    while (piv < n && h(piv, j) == S(0)) ++piv;
    if (piv == n) continue;
    if (piv != j + 1) {
      h.row(piv).swap(h.row(j + 1));
      h.col(piv).swap(h.col(j + 1));
    }
    const S inv = S(1) / h(j + 1, j);
    for (Index i = j + 2; i < n; ++i) {
      const S u = h(i, j) * inv;
      if (u == S(0)) continue;
      h.row(i) -= u * h.row(j + 1);
      h.col(j + 1) += u * h.col(i);
    }
  }
  std::vector<std::vector<S>> p(static_cast<std::size_t>(n + 1));
  p[0] = {S(1)};
  for (Index m = 1; m <= n; ++m) {
    std::vector<S> cur(static_cast<std::size_t>(m + 1), S(0));
    const auto& prev = p[static_cast<std::size_t>(m - 1)];
    for (std::size_t k = 0; k < prev.size(); ++k) {
      cur[k + 1] += prev[k];
      cur[k] -= h(m - 1, m - 1) * prev[k];
    }
    S prod(1);
    for (Index i = 1; i < m; ++i) {
      prod *= h(m - i, m - i - 1);
      const S coef = h(m - i - 1, m - 1) * prod;
      if (coef == S(0)) continue;
      const auto& q = p[static_cast<std::size_t>(m - i - 1)];
      for (std::size_t k = 0; k < q.size(); ++k) cur[k] -= coef * q[k];
    }
    p[static_cast<std::size_t>(m)] = std::move(cur);
  }
  return p[static_cast<std::size_t>(n)];
}

template <class DA, class DB>
MatrixX<typename DA::Scalar> kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using S = typename DA::Scalar;
  MatrixX<S> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <class S>
MatrixX<S> block_diagonal(const std::vector<MatrixX<S>>& blocks) {
  Index r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  MatrixX<S> out = MatrixX<S>::Zero(r, c);
  r = c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

template <class Derived>
bool is_zero(const Eigen::MatrixBase<Derived>& a) {
  using S = typename Derived::Scalar;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (a(i, j) != S(0)) return false;
  return true;
}

MatrixFp random_matrix(Rng& rng, Index rows, Index cols);
MatrixFp random_invertible(Rng& rng, Index n);
VectorFp random_vector(Rng& rng, Index n);

/// Incrementally grown basis of a subspace, kept in reduced echelon form.
template <class S>
class SpanBasis {
 public:
  explicit SpanBasis(Index ambient) : ambient_(ambient) {}

  Index ambient() const { return ambient_; }
  Index dim() const { return static_cast<Index>(rows_.size()); }

  /// Adds v; returns false if it was already in the span.
  template <class Derived>
  bool insert(const Eigen::MatrixBase<Derived>& v) {
    VectorX<S> r = reduce(v);
    Index lead = 0;
    while (lead < ambient_ && r(lead) == S(0)) ++lead;
    if (lead == ambient_) return false;
    r /= r(lead);
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const S f = rows_[k](lead);
      if (f != S(0)) rows_[k] -= f * r;
    }
    std::size_t at = 0;
    while (at < leads_.size() && leads_[at] < lead) ++at;
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(at), r);
    leads_.insert(leads_.begin() + static_cast<std::ptrdiff_t>(at), lead);
    return true;
  }

  template <class Derived>
  bool contains(const Eigen::MatrixBase<Derived>& v) const {
    return is_zero(reduce(v));
  }

  /// Basis vectors as columns.
  MatrixX<S> basis() const {
    MatrixX<S> out(ambient_, dim());
    for (std::size_t k = 0; k < rows_.size(); ++k) out.col(static_cast<Index>(k)) = rows_[k];
    return out;
  }

  bool same_span(const SpanBasis& other) const {
    if (other.dim() != dim() || other.ambient_ != ambient_) return false;
    for (const auto& r : other.rows_)
      if (!contains(r)) return false;
    return true;
  }

 private:
  template <class Derived>
  VectorX<S> reduce(const Eigen::MatrixBase<Derived>& v) const {
    if (v.size() != ambient_) throw ShapeMismatch("SpanBasis: vector length mismatch");
    VectorX<S> r = v;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const S f = r(leads_[k]);
      if (f != S(0)) r -= f * rows_[k];
    }
    return r;
  }

  Index ambient_;
  std::vector<VectorX<S>> rows_;
  std::vector<Index> leads_;
};

template <class Derived>
SpanBasis<typename Derived::Scalar> column_span(const Eigen::MatrixBase<Derived>& a) {
  SpanBasis<typename Derived::Scalar> s(a.rows());
  for (Index j = 0; j < a.cols(); ++j) s.insert(a.col(j));
  return s;
}

}  // namespace traceiso
