#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "traceiso/field.hpp"
#include "traceiso/linalg.hpp"
#include "traceiso/poly.hpp"

namespace traceiso {

struct ArityMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SizeBound : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotAPerfectPower : std::domain_error {
  using std::domain_error::domain_error;
};

/// Polynomial accessible only through evaluation, with a trusted total-degree bound.
class Blackbox {
 public:
  using Rule = std::function<Fp(std::span<const Fp>)>;

  Blackbox(std::size_t num_vars, int degree, Rule rule, std::shared_ptr<const MultiPoly> explicit_form = nullptr)
      : n_(num_vars), degree_(degree), rule_(std::move(rule)), explicit_(std::move(explicit_form)) {}

  static Blackbox from_poly(MultiPoly p);

  std::size_t num_vars() const { return n_; }
  int degree() const { return degree_; }
  const MultiPoly* explicit_form() const { return explicit_.get(); }

  Fp operator()(std::span<const Fp> point) const {
    if (point.size() != n_) throw ArityMismatch("blackbox expects " + std::to_string(n_) + " inputs");
    return rule_(point);
  }
  Fp operator()(const VectorFp& point) const {
    return (*this)(std::span<const Fp>(point.data(), static_cast<std::size_t>(point.size())));
  }

 private:
  std::size_t n_;
  int degree_;
  Rule rule_;
  std::shared_ptr<const MultiPoly> explicit_;
};

inline Fp bb_eval(const Blackbox& f, const VectorFp& point) { return f(point); }

/// x -> f(a x); `a` has f.num_vars() rows.
Blackbox compose_linear(const Blackbox& f, const MatrixFp& a);

/// y -> f(x) where x = base with x[free_vars[t]] = y[t].
Blackbox substitute(const Blackbox& f, std::vector<Index> free_vars, const VectorFp& base);

Fp bb_partial_derivative_at(const Blackbox& f, Index var, const VectorFp& point);
VectorFp bb_gradient_at(const Blackbox& f, const VectorFp& point);

bool pit_equal(const Blackbox& f, const Blackbox& g, int trials, Rng& rng);
bool pit_zero(const Blackbox& f, int trials, Rng& rng);

/// Matrix whose entries are affine forms in `num_vars` variables.
class LinearMatrix {
 public:
  LinearMatrix(Index rows, Index cols, Index num_vars);

  /// Entry (i, j) is variable i * cols + j.
  static LinearMatrix symbolic(Index rows, Index cols);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index num_vars() const { return static_cast<Index>(coeff_.size()); }

  const MatrixFp& coefficient(Index var) const { return coeff_[static_cast<std::size_t>(var)]; }
  MatrixFp& coefficient(Index var) { return coeff_[static_cast<std::size_t>(var)]; }
  const MatrixFp& constant() const { return constant_; }
  MatrixFp& constant() { return constant_; }

  VectorFp entry(Index i, Index j) const;
  void set_entry(Index i, Index j, const VectorFp& coeffs, Fp constant = Fp(0));
  MultiPoly entry_poly(Index i, Index j) const;

  MatrixFp eval(std::span<const Fp> point) const;
  MatrixFp eval(const VectorFp& point) const {
    return eval(std::span<const Fp>(point.data(), static_cast<std::size_t>(point.size())));
  }

  LinearMatrix transpose() const;
  /// I_k (x) this.
  LinearMatrix kron_identity_left(Index k) const;
  bool is_zero() const;

  friend LinearMatrix operator*(const MatrixFp& a, const LinearMatrix& x);
  friend LinearMatrix operator*(const LinearMatrix& x, const MatrixFp& a);
  friend LinearMatrix operator*(Fp s, const LinearMatrix& x);
  friend LinearMatrix operator+(const LinearMatrix& a, const LinearMatrix& b);
  friend bool operator==(const LinearMatrix& a, const LinearMatrix& b);

 private:
  Index rows_, cols_;
  std::vector<MatrixFp> coeff_;
  MatrixFp constant_;
};

/// Explicit determinant by memoized cofactor expansion.
MultiPoly det_linear_matrix(const LinearMatrix& y, Index size_bound = 9);
/// Determinant evaluated numerically at each query point.
Blackbox det_blackbox(const LinearMatrix& y);

/// g with p = c g^w, scaled so its graded-lex leading coefficient is 1.
MultiPoly wth_root(const Blackbox& p, int w, Rng& rng);
MultiPoly wth_root(const MultiPoly& p, int w, Rng& rng);

/// Rescale so the graded-lex first monomial has coefficient 1.
MultiPoly normalize_leading(const MultiPoly& p);

}  // namespace traceiso
