#pragma once

#include <optional>
#include <string>
#include <vector>

#include "traceiso/blackbox.hpp"
#include "traceiso/outcome.hpp"
#include "traceiso/trimm.hpp"

namespace traceiso {

/// B_0, ..., B_{d-1} with h = Tr-IMM(B_0 x_0, ..., B_{d-1} x_{d-1}).
struct TensorIsoWitness {
  std::vector<MatrixFp> blocks;
};

struct QueryContext {
  /// Maps the query variables into the variables of the original instance.
  std::optional<MatrixFp> embedding;
};

/// Returns X' with det(X') = g, or rejects.
class DetOracle {
 public:
  virtual ~DetOracle() = default;
  virtual Outcome<LinearMatrix> query(const MultiPoly& g, int w, const QueryContext& ctx, Rng& rng) const = 0;
  virtual std::string name() const = 0;
};

/// Genuine oracle for 2 x 2 determinants via quadratic form classification.
class QuadraticDetOracle : public DetOracle {
 public:
  Outcome<LinearMatrix> query(const MultiPoly& g, int w, const QueryContext& ctx, Rng& rng) const override;
  std::string name() const override { return "w2"; }
};

/// Test oracle that matches queries against known linear matrices.
class PlantedDetOracle : public DetOracle {
 public:
  explicit PlantedDetOracle(std::vector<LinearMatrix> registry) : registry_(std::move(registry)) {}
  /// Candidates are the blocks of Tr-IMM(secret x) restricted to each query's embedding.
  PlantedDetOracle(const TrimmShape& shape, MatrixFp secret) : shape_(shape), secret_(std::move(secret)) {}

  /// Answer with the transpose of the matched matrix.
  void set_transpose(bool on) { transpose_ = on; }

  Outcome<LinearMatrix> query(const MultiPoly& g, int w, const QueryContext& ctx, Rng& rng) const override;
  std::string name() const override { return "planted"; }

 private:
  std::vector<LinearMatrix> candidates(Index num_vars, int w, const QueryContext& ctx) const;

  std::vector<LinearMatrix> registry_;
  std::optional<TrimmShape> shape_;
  MatrixFp secret_;
  bool transpose_ = false;
};

Outcome<LinearMatrix> det_oracle_w2(const MultiPoly& g, Rng& rng);
Outcome<LinearMatrix> det_oracle_planted(const MultiPoly& g, const std::vector<LinearMatrix>& registry, Rng& rng);

/// Matrix multiplication tensor isomorphism, answered by the d = 3 tensor pipeline.
class MmtiOracle {
 public:
  explicit MmtiOracle(const DetOracle& det) : det_(det) {}

  Outcome<TensorIsoWitness> solve(const Blackbox& h, int w, Rng& rng, const std::optional<MatrixFp>& embedding = {},
                                  RunLog* log = nullptr) const;
  const DetOracle& det() const { return det_; }

 private:
  const DetOracle& det_;
};

}  // namespace traceiso
