#include "traceiso/linalg.hpp"

namespace traceiso {

MatrixFp random_matrix(Rng& rng, Index rows, Index cols) {
  MatrixFp m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.uniform();
  return m;
}

MatrixFp random_invertible(Rng& rng, Index n) {
  for (;;) {
    MatrixFp m = random_matrix(rng, n, n);
    if (is_invertible(m)) return m;
  }
}

VectorFp random_vector(Rng& rng, Index n) {
  VectorFp v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.uniform();
  return v;
}

}  // namespace traceiso
