#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "traceiso/fmai.hpp"
#include "traceiso/trimm.hpp"

namespace traceiso {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class InstanceKind { Full, Block, Tensor, TensorExplicit, Algebra };

std::string kind_name(InstanceKind kind);
InstanceKind parse_kind(const std::string& name);

/// Instance file contents. Field values are residues modulo `modulus`.
struct Instance {
  PrimeModulus modulus;
  InstanceKind kind = InstanceKind::Full;
  int w = 2;
  int d = 3;
  std::uint64_t seed = 0;

  MatrixFp matrix;               // full: f(x) = Tr-IMM(matrix x)
  std::vector<MatrixFp> blocks;  // block, tensor
  MultiPoly terms;               // tensor-explicit
  AlgebraInput algebra;          // algebra
  /// Q_0(x), ..., Q_{d-1}(x) of the planted representation.
  std::optional<std::vector<LinearMatrix>> secret;

  TrimmShape shape() const { return TrimmShape{w, d}; }
  bool is_polynomial() const { return kind != InstanceKind::Algebra; }
};

/// The polynomial of a non-algebra instance.
Blackbox instance_blackbox(const Instance& inst);
/// Matrix A with Q_k(x) read from the rows of A x.
MatrixFp secret_matrix(const Instance& inst);

std::string instance_to_text(const Instance& inst);
/// The secret section is skipped unless `with_secret`.
Instance instance_from_text(const std::string& text, bool with_secret = true);
void write_instance(const std::string& path, const Instance& inst);
Instance read_instance(const std::string& path, bool with_secret = true);

/// Planted instance for gen modes full, block, tensor, algebra, diag-algebra, random-tensor.
Instance generate_instance(const std::string& mode, int w, int d, std::uint64_t seed, const PrimeModulus& modulus);

enum class CertificateKind { Trace, Tensor, Algebra };

struct Certificate {
  PrimeModulus modulus;
  CertificateKind kind = CertificateKind::Trace;
  int w = 2;
  int d = 3;
  MatrixFp matrix;                // trace: f(x) = Tr-IMM(matrix x)
  std::vector<MatrixFp> blocks;   // tensor: f = Tr-IMM(B_0 x_0, ...)
  std::vector<MatrixFp> images;   // algebra: image of each basis element
};

std::string certificate_to_text(const Certificate& cert);
Certificate certificate_from_text(const std::string& text);
void write_certificate(const std::string& path, const Certificate& cert);
Certificate read_certificate(const std::string& path);

/// PIT check of a certificate against an instance; algebra certificates are checked exactly.
bool verify_certificate(const Instance& inst, const Certificate& cert, int trials, Rng& rng);

}  // namespace traceiso
