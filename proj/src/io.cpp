#include "traceiso/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace traceiso {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

Json residue(Fp v) { return v.to_string(); }

Fp parse_residue(const Json& j) {
  if (!j.is_string()) throw FormatError("residue must be a decimal string");
  const std::string s = j.get<std::string>();
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw FormatError("residue '" + s + "' is not a decimal number");
  std::uint64_t v = 0;
  try {
    v = std::stoull(s);
  } catch (const std::out_of_range&) {
    throw FormatError("residue '" + s + "' is out of range");
  }
  if (v >= current_modulus().value()) throw FormatError("residue '" + s + "' is not reduced");
  return Fp::from_uint(v);
}

Json matrix_json(const MatrixFp& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(residue(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixFp parse_matrix(const Json& j, Index rows, Index cols) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows)
    throw FormatError("expected a matrix with " + std::to_string(rows) + " rows");
  MatrixFp m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw FormatError("expected " + std::to_string(cols) + " entries in every matrix row");
    for (Index c = 0; c < cols; ++c) m(i, c) = parse_residue(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

Json matrices_json(const std::vector<MatrixFp>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(matrix_json(m));
  return out;
}

std::vector<MatrixFp> parse_matrices(const Json& j, std::size_t count, Index rows, Index cols) {
  if (!j.is_array() || j.size() != count) throw FormatError("expected " + std::to_string(count) + " matrices");
  std::vector<MatrixFp> out;
  for (const auto& m : j) out.push_back(parse_matrix(m, rows, cols));
  return out;
}

Json linear_matrix_json(const LinearMatrix& x) {
  Json rows = Json::array();
  for (Index i = 0; i < x.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < x.cols(); ++j) {
      Json form = Json::array();
      const VectorFp e = x.entry(i, j);
      for (Index v = 0; v < e.size(); ++v) form.push_back(residue(e(v)));
      row.push_back(std::move(form));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

LinearMatrix parse_linear_matrix(const Json& j, int w, Index n) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(w)) throw FormatError("secret matrix has the wrong shape");
  LinearMatrix x(w, w, n);
  for (int i = 0; i < w; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(w)) throw FormatError("secret matrix has the wrong shape");
    for (int c = 0; c < w; ++c) {
      const Json& form = row[static_cast<std::size_t>(c)];
      if (!form.is_array() || static_cast<Index>(form.size()) != n)
        throw FormatError("secret linear form has the wrong length");
      VectorFp e(n);
      for (Index v = 0; v < n; ++v) e(v) = parse_residue(form[static_cast<std::size_t>(v)]);
      x.set_entry(i, c, e);
    }
  }
  return x;
}

std::vector<LinearMatrix> secret_from_matrix(const TrimmShape& shape, const MatrixFp& a) {
  std::vector<LinearMatrix> out;
  for (int k = 0; k < shape.d; ++k) {
    LinearMatrix q(shape.w, shape.w, shape.n());
    for (int i = 0; i < shape.w; ++i)
      for (int j = 0; j < shape.w; ++j) q.set_entry(i, j, a.row(var_index(shape, k, i, j)).transpose());
    out.push_back(std::move(q));
  }
  return out;
}

Json terms_json(const TrimmShape& shape, const MultiPoly& f) {
  Json out = Json::array();
  const Index b = shape.block_size();
  for (const auto& [e, c] : f.terms()) {
    Json indices = Json::array();
    for (int k = 0; k < shape.d; ++k)
      for (Index o = 0; o < b; ++o)
        if (e[static_cast<std::size_t>(k * b + o)] != 0) {
          const VarIndex v = var_position(shape, k * b + o);
          indices.push_back(Json::array({v.i, v.j}));
        }
    out.push_back(Json{{"indices", std::move(indices)}, {"coeff", residue(c)}});
  }
  return out;
}

MultiPoly parse_terms(const Json& j, const TrimmShape& shape) {
  if (!j.is_array()) throw FormatError("terms must be a list");
  MultiPoly f(static_cast<std::size_t>(shape.n()));
  for (const auto& t : j) {
    const Json& idx = t.at("indices");
    if (!idx.is_array() || idx.size() != static_cast<std::size_t>(shape.d))
      throw FormatError("every term needs one index pair per block");
    MultiPoly::Exponents e(static_cast<std::size_t>(shape.n()), 0);
    for (int k = 0; k < shape.d; ++k) {
      const Json& pair = idx[static_cast<std::size_t>(k)];
      const int i = pair.at(0).get<int>(), c = pair.at(1).get<int>();
      if (i < 0 || c < 0 || i >= shape.w || c >= shape.w) throw FormatError("term index out of range");
      ++e[static_cast<std::size_t>(var_index(shape, k, i, c))];
    }
    f.add_term(e, parse_residue(t.at("coeff")));
  }
  return f;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

void check_version(const Json& j) {
  if (j.at("format_version").get<int>() != kFormatVersion) throw FormatError("unsupported format_version");
}

const std::pair<InstanceKind, const char*> kKindNames[] = {
    {InstanceKind::Full, "full"},
    {InstanceKind::Block, "block"},
    {InstanceKind::Tensor, "tensor"},
    {InstanceKind::TensorExplicit, "tensor-explicit"},
    {InstanceKind::Algebra, "algebra"},
};

const std::pair<CertificateKind, const char*> kCertNames[] = {
    {CertificateKind::Trace, "trace"},
    {CertificateKind::Tensor, "tensor"},
    {CertificateKind::Algebra, "algebra"},
};

}  // namespace

std::string kind_name(InstanceKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  throw std::logic_error("unknown instance kind");
}

InstanceKind parse_kind(const std::string& name) {
  for (const auto& [k, n] : kKindNames)
    if (name == n) return k;
  throw FormatError("unknown instance kind '" + name + "'");
}

Blackbox instance_blackbox(const Instance& inst) {
  const ModulusScope scope(inst.modulus);
  switch (inst.kind) {
    case InstanceKind::Full:
      return instance_from_matrix(inst.shape(), inst.matrix).f;
    case InstanceKind::Block:
    case InstanceKind::Tensor:
      return instance_from_blocks(inst.shape(), inst.blocks).f;
    case InstanceKind::TensorExplicit:
      return Blackbox::from_poly(inst.terms);
    case InstanceKind::Algebra:
      break;
  }
  throw std::invalid_argument("algebra instances have no polynomial");
}

MatrixFp secret_matrix(const Instance& inst) {
  if (!inst.secret) throw FormatError("instance has no secret section");
  const TrimmShape shape = inst.shape();
  MatrixFp a(shape.n(), shape.n());
  for (int k = 0; k < shape.d; ++k)
    for (int i = 0; i < shape.w; ++i)
      for (int j = 0; j < shape.w; ++j)
        a.row(var_index(shape, k, i, j)) = (*inst.secret)[static_cast<std::size_t>(k)].entry(i, j).transpose();
  return a;
}

std::string instance_to_text(const Instance& inst) {
  const ModulusScope scope(inst.modulus);
  Json j;
  j["format_version"] = kFormatVersion;
  j["prime"] = inst.modulus.to_string();
  j["kind"] = kind_name(inst.kind);
  j["w"] = inst.w;
  j["d"] = inst.d;
  j["seed"] = inst.seed;
  switch (inst.kind) {
    case InstanceKind::Full:
      j["matrix"] = matrix_json(inst.matrix);
      break;
    case InstanceKind::Block:
    case InstanceKind::Tensor:
      j["blocks"] = matrices_json(inst.blocks);
      break;
    case InstanceKind::TensorExplicit:
      j["terms"] = terms_json(inst.shape(), inst.terms);
      break;
    case InstanceKind::Algebra:
      j["m"] = inst.algebra.m;
      j["r"] = inst.algebra.basis.size();
      j["matrices"] = matrices_json(inst.algebra.basis);
      break;
  }
  if (inst.secret) {
    Json s = Json::array();
    for (const auto& q : *inst.secret) s.push_back(linear_matrix_json(q));
    j["secret"] = Json{{"linear_matrices", std::move(s)}};
  }
  return j.dump(1) + "\n";
}

Instance instance_from_text(const std::string& text, bool with_secret) {
  const Json j = parse_json(text);
  try {
    check_version(j);
    Instance inst;
    inst.modulus = PrimeModulus::parse(j.at("prime").get<std::string>());
    const ModulusScope scope(inst.modulus);
    inst.kind = parse_kind(j.at("kind").get<std::string>());
    inst.w = j.at("w").get<int>();
    inst.d = j.at("d").get<int>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    if (inst.w < 1 || inst.d < 1) throw FormatError("w and d must be positive");
    const TrimmShape shape = inst.shape();
    const Index b = shape.block_size();
    switch (inst.kind) {
      case InstanceKind::Full:
        inst.matrix = parse_matrix(j.at("matrix"), shape.n(), shape.n());
        break;
      case InstanceKind::Block:
      case InstanceKind::Tensor:
        inst.blocks = parse_matrices(j.at("blocks"), static_cast<std::size_t>(inst.d), b, b);
        break;
      case InstanceKind::TensorExplicit:
        inst.terms = parse_terms(j.at("terms"), shape);
        break;
      case InstanceKind::Algebra: {
        inst.algebra.m = j.at("m").get<Index>();
        const auto r = j.at("r").get<std::size_t>();
        inst.algebra.basis = parse_matrices(j.at("matrices"), r, inst.algebra.m, inst.algebra.m);
        break;
      }
    }
    if (with_secret && j.contains("secret")) {
      const Json& s = j.at("secret").at("linear_matrices");
      if (!s.is_array() || s.size() != static_cast<std::size_t>(inst.d)) throw FormatError("secret needs d matrices");
      std::vector<LinearMatrix> qs;
      for (const auto& q : s) qs.push_back(parse_linear_matrix(q, inst.w, shape.n()));
      inst.secret = std::move(qs);
    }
    return inst;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("bad instance field: ") + e.what());
  }
}

void write_instance(const std::string& path, const Instance& inst) { write_file(path, instance_to_text(inst)); }
Instance read_instance(const std::string& path, bool with_secret) {
  return instance_from_text(read_file(path), with_secret);
}

Instance generate_instance(const std::string& mode, int w, int d, std::uint64_t seed, const PrimeModulus& modulus) {
  const ModulusScope scope(modulus);
  Rng rng(seed);
  Instance inst;
  inst.modulus = modulus;
  inst.w = w;
  inst.d = d;
  inst.seed = seed;
  const TrimmShape shape{w, d};
  if (mode == "full" || mode == "block" || mode == "tensor") {
    const bool full = mode == "full";
    const PlantedInstance p = plant_instance(shape, rng, full ? PlantMode::Full : PlantMode::Block);
    inst.kind = full ? InstanceKind::Full : (mode == "block" ? InstanceKind::Block : InstanceKind::Tensor);
    if (full) inst.matrix = p.a;
    else inst.blocks = *p.blocks;
    inst.secret = secret_from_matrix(shape, p.a);
  } else if (mode == "random-tensor") {
    shape.validate();
    inst.kind = InstanceKind::TensorExplicit;
    inst.terms = random_tensor(shape, rng);
  } else if (mode == "algebra" || mode == "diag-algebra") {
    if (w < 1) throw std::invalid_argument("w must be positive");
    inst.kind = InstanceKind::Algebra;
    inst.algebra = mode == "algebra" ? planted_algebra(w, rng) : diagonal_algebra(static_cast<Index>(w) * w);
  } else {
    throw std::invalid_argument("unknown gen mode '" + mode + "'");
  }
  return inst;
}

std::string certificate_to_text(const Certificate& cert) {
  const ModulusScope scope(cert.modulus);
  Json j;
  j["format_version"] = kFormatVersion;
  j["prime"] = cert.modulus.to_string();
  for (const auto& [k, name] : kCertNames)
    if (k == cert.kind) j["kind"] = name;
  j["w"] = cert.w;
  j["d"] = cert.d;
  switch (cert.kind) {
    case CertificateKind::Trace:
      j["matrix"] = matrix_json(cert.matrix);
      break;
    case CertificateKind::Tensor:
      j["blocks"] = matrices_json(cert.blocks);
      break;
    case CertificateKind::Algebra:
      j["images"] = matrices_json(cert.images);
      break;
  }
  return j.dump(1) + "\n";
}

Certificate certificate_from_text(const std::string& text) {
  const Json j = parse_json(text);
  try {
    check_version(j);
    Certificate cert;
    cert.modulus = PrimeModulus::parse(j.at("prime").get<std::string>());
    const ModulusScope scope(cert.modulus);
    const std::string kind = j.at("kind").get<std::string>();
    bool known = false;
    for (const auto& [k, name] : kCertNames)
      if (kind == name) cert.kind = k, known = true;
    if (!known) throw FormatError("unknown certificate kind '" + kind + "'");
    cert.w = j.at("w").get<int>();
    cert.d = j.at("d").get<int>();
    if (cert.w < 1 || cert.d < 1) throw FormatError("w and d must be positive");
    const TrimmShape shape{cert.w, cert.d};
    const Index b = shape.block_size();
    switch (cert.kind) {
      case CertificateKind::Trace:
        cert.matrix = parse_matrix(j.at("matrix"), shape.n(), shape.n());
        break;
      case CertificateKind::Tensor:
        cert.blocks = parse_matrices(j.at("blocks"), static_cast<std::size_t>(cert.d), b, b);
        break;
      case CertificateKind::Algebra:
        cert.images = parse_matrices(j.at("images"), j.at("images").size(), cert.w, cert.w);
        break;
    }
    return cert;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("bad certificate field: ") + e.what());
  }
}

void write_certificate(const std::string& path, const Certificate& cert) {
  write_file(path, certificate_to_text(cert));
}
Certificate read_certificate(const std::string& path) { return certificate_from_text(read_file(path)); }

bool verify_certificate(const Instance& inst, const Certificate& cert, int trials, Rng& rng) {
  if (!(inst.modulus == cert.modulus)) return false;
  const ModulusScope scope(inst.modulus);
  if (cert.kind == CertificateKind::Algebra) {
    if (inst.kind != InstanceKind::Algebra) return false;
    return verify_algebra_iso(inst.algebra, AlgebraIso{cert.w, cert.images});
  }
  if (!inst.is_polynomial()) return false;
  const Blackbox f = instance_blackbox(inst);
  const TrimmShape shape{cert.w, cert.d};
  if (shape.n() != static_cast<Index>(f.num_vars())) return false;
  if (cert.kind == CertificateKind::Trace)
    return is_invertible(cert.matrix) && verify_witness(f, shape, cert.matrix, trials, rng);
  for (const auto& b : cert.blocks)
    if (!is_invertible(b)) return false;
  return verify_witness(f, shape, cert.blocks, trials, rng);
}

}  // namespace traceiso
