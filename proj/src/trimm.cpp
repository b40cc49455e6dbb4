#include "traceiso/trimm.hpp"

#include <cmath>

namespace traceiso {

void TrimmShape::validate() const {
  if (w < 2) throw std::invalid_argument("width must be at least 2");
  if (d < 3) throw std::invalid_argument("length must be at least 3");
  const long double bound = std::pow(static_cast<long double>(n()), 5.0L);
  if (static_cast<long double>(current_modulus().value()) <= bound)
    throw std::invalid_argument("modulus must exceed n^5 for this shape");
}

Index var_index(const TrimmShape& shape, int k, int i, int j) {
  if (k < 0 || k >= shape.d || i < 0 || i >= shape.w || j < 0 || j >= shape.w)
    throw std::out_of_range("var_index: position out of range");
  return static_cast<Index>(k) * shape.block_size() + block_offset(shape.w, k, i, j);
}

VarIndex var_position(const TrimmShape& shape, Index flat) {
  if (flat < 0 || flat >= shape.n()) throw std::out_of_range("var_position: index out of range");
  const int k = static_cast<int>(flat / shape.block_size());
  const int off = static_cast<int>(flat % shape.block_size());
  const int a = off / shape.w, b = off % shape.w;
  return k % 2 == 0 ? VarIndex{k, a, b, flat} : VarIndex{k, b, a, flat};
}

std::vector<MatrixFp> trimm_matrices(const TrimmShape& shape, std::span<const Fp> point) {
  if (static_cast<Index>(point.size()) != shape.n()) throw ArityMismatch("trimm_matrices: arity mismatch");
  std::vector<MatrixFp> qs;
  qs.reserve(static_cast<std::size_t>(shape.d));
  for (int k = 0; k < shape.d; ++k) {
    MatrixFp q(shape.w, shape.w);
    const Index base = static_cast<Index>(k) * shape.block_size();
    for (int i = 0; i < shape.w; ++i)
      for (int j = 0; j < shape.w; ++j) q(i, j) = point[static_cast<std::size_t>(base + block_offset(shape.w, k, i, j))];
    qs.push_back(std::move(q));
  }
  return qs;
}

Fp trimm_eval(const TrimmShape& shape, std::span<const Fp> point) {
  const auto qs = trimm_matrices(shape, point);
  MatrixFp acc = qs[0];
  for (std::size_t k = 1; k < qs.size(); ++k) acc = (acc * qs[k]).eval();
  return acc.trace();
}

Blackbox trimm_blackbox(const TrimmShape& shape) {
  return Blackbox(static_cast<std::size_t>(shape.n()), shape.d,
                  [shape](std::span<const Fp> x) { return trimm_eval(shape, x); });
}

MultiPoly trimm_explicit(const TrimmShape& shape) {
  const auto n = static_cast<std::size_t>(shape.n());
  MultiPoly f(n);
  std::vector<int> path(static_cast<std::size_t>(shape.d), 0);
  for (;;) {
    MultiPoly::Exponents e(n, 0);
    for (int k = 0; k < shape.d; ++k) {
      const int i = path[static_cast<std::size_t>(k)];
      const int j = path[static_cast<std::size_t>((k + 1) % shape.d)];
      ++e[static_cast<std::size_t>(var_index(shape, k, i, j))];
    }
    f.add_term(e, Fp(1));
    int pos = 0;
    while (pos < shape.d && ++path[static_cast<std::size_t>(pos)] == shape.w) path[static_cast<std::size_t>(pos++)] = 0;
    if (pos == shape.d) break;
  }
  return f;
}

MultiPoly random_tensor(const TrimmShape& shape, Rng& rng) {
  const auto n = static_cast<std::size_t>(shape.n());
  const Index b = shape.block_size();
  MultiPoly f(n);
  std::vector<Index> pick(static_cast<std::size_t>(shape.d), 0);
  for (;;) {
    MultiPoly::Exponents e(n, 0);
    for (int k = 0; k < shape.d; ++k) ++e[static_cast<std::size_t>(k * b + pick[static_cast<std::size_t>(k)])];
    f.add_term(e, rng.uniform());
    int pos = 0;
    while (pos < shape.d && ++pick[static_cast<std::size_t>(pos)] == b) pick[static_cast<std::size_t>(pos++)] = 0;
    if (pos == shape.d) break;
  }
  return f;
}

MatrixFp lie_generator(const TrimmShape& shape, int k, const MatrixFp& m) {
  if (k < 0 || k >= shape.d) throw std::out_of_range("lie_generator: block out of range");
  if (m.rows() != shape.w || m.cols() != shape.w) throw ShapeMismatch("lie_generator: M must be w x w");
  const Index b = shape.block_size();
  const int next = (k + 1) % shape.d;
  const MatrixFp id = MatrixFp::Identity(shape.w, shape.w);
  MatrixFp out = MatrixFp::Zero(shape.n(), shape.n());
  MatrixFp first, second;
  if (k % 2 == 1) {
    first = kron(MatrixFp(m.transpose()), id);
    second = -kron(m, id);
  } else if (next == 0) {
    // odd d: block d-1 and block 0 are both row-major
    first = kron(id, MatrixFp(m.transpose()));
    second = -kron(m, id);
  } else {
    first = kron(id, MatrixFp(m.transpose()));
    second = -kron(id, m);
  }
  out.block(k * b, k * b, b, b) = first;
  out.block(next * b, next * b, b, b) = second;
  return out;
}

LinearMatrix block_matrix_from_rows(int w, int k, const MatrixFp& rows) {
  if (rows.rows() != static_cast<Index>(w) * w) throw ShapeMismatch("block_matrix_from_rows: need w^2 rows");
  LinearMatrix x(w, w, rows.cols());
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < w; ++j) x.set_entry(i, j, rows.row(block_offset(w, k, i, j)).transpose());
  return x;
}

MatrixFp rows_from_block_matrix(int w, int k, const LinearMatrix& x) {
  MatrixFp rows(static_cast<Index>(w) * w, x.num_vars());
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < w; ++j) rows.row(block_offset(w, k, i, j)) = x.entry(i, j).transpose();
  return rows;
}

PlantedInstance instance_from_matrix(const TrimmShape& shape, const MatrixFp& a) {
  if (a.rows() != shape.n() || a.cols() != shape.n()) throw ShapeMismatch("instance_from_matrix: need n x n");
  return PlantedInstance{shape, a, compose_linear(trimm_blackbox(shape), a), std::nullopt};
}

PlantedInstance instance_from_blocks(const TrimmShape& shape, const std::vector<MatrixFp>& blocks) {
  if (static_cast<int>(blocks.size()) != shape.d) throw ShapeMismatch("instance_from_blocks: need d blocks");
  PlantedInstance inst = instance_from_matrix(shape, block_diagonal(blocks));
  inst.blocks = blocks;
  return inst;
}

PlantedInstance plant_instance(const TrimmShape& shape, Rng& rng, PlantMode mode) {
  if (mode == PlantMode::Full) return instance_from_matrix(shape, random_invertible(rng, shape.n()));
  std::vector<MatrixFp> blocks;
  for (int k = 0; k < shape.d; ++k) blocks.push_back(random_invertible(rng, shape.block_size()));
  return instance_from_blocks(shape, blocks);
}

bool verify_witness(const Blackbox& f, const TrimmShape& shape, const MatrixFp& a, int trials, Rng& rng) {
  if (a.rows() != shape.n() || a.cols() != shape.n() || static_cast<Index>(f.num_vars()) != shape.n()) return false;
  return pit_equal(f, compose_linear(trimm_blackbox(shape), a), trials, rng);
}

bool verify_witness(const Blackbox& f, const TrimmShape& shape, const std::vector<MatrixFp>& blocks, int trials,
                    Rng& rng) {
  if (static_cast<int>(blocks.size()) != shape.d) return false;
  for (const auto& b : blocks)
    if (b.rows() != shape.block_size() || b.cols() != shape.block_size()) return false;
  return verify_witness(f, shape, block_diagonal(blocks), trials, rng);
}

}  // namespace traceiso
