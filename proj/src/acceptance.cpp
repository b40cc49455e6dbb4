#include "traceiso/acceptance.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <thread>

#include "traceiso/abp.hpp"
#include "traceiso/fmai.hpp"
#include "traceiso/lie.hpp"
#include "traceiso/reduction.hpp"
#include "traceiso/tensor.hpp"

namespace traceiso {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string ratio(int hits, int total) { return std::to_string(hits) + "/" + std::to_string(total); }

Rng case_rng(std::uint64_t seed, int id, int t) {
  return Rng(seed * 1000003u + static_cast<std::uint64_t>(id) * 10007u + static_cast<std::uint64_t>(t));
}

MatrixFp unit(Index w, Index i, Index j) {
  MatrixFp e = MatrixFp::Zero(w, w);
  e(i, j) = Fp(1);
  return e;
}

std::string shape_name(const TrimmShape& s) { return "(" + std::to_string(s.w) + "," + std::to_string(s.d) + ")"; }

struct Tally {
  bool pass;
  std::string detail;
};

Tally end_to_end(std::uint64_t seed, int id, const std::vector<TrimmShape>& shapes, int runs, int needed,
                bool planted_oracle, double time_limit) {
  const auto start = Clock::now();
  bool pass = true;
  std::string detail;
  int t = 0;
  for (const auto& s : shapes) {
    int ok = 0;
    for (int r = 0; r < runs; ++r, ++t) {
      Rng rng = case_rng(seed, id, t);
      const PlantedInstance inst = plant_instance(s, rng, PlantMode::Full);
      const QuadraticDetOracle genuine;
      const PlantedDetOracle planted(s, inst.a);
      const DetOracle& det = planted_oracle ? static_cast<const DetOracle&>(planted) : genuine;
      auto wit = trace_equivalence(inst.f, det, rng);
      Rng check = rng.split();
      if (wit.ok() && wit->w == s.w && verify_witness(inst.f, s, wit->a, 100, check)) ++ok;
    }
    pass = pass && ok >= needed;
    detail += shape_name(s) + " " + ratio(ok, runs) + ", ";
  }
  const double elapsed = seconds_since(start);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f s (limit %.0f s)", elapsed, time_limit);
  return {pass && elapsed < time_limit, detail + buf};
}

CriterionResult c1(std::uint64_t seed) {
  auto r = end_to_end(seed, 1, {{2, 3}, {2, 4}}, 20, 18, false, 120);
  return {1, "trace equivalence, genuine oracle", r.pass, r.detail};
}

CriterionResult c2(std::uint64_t seed) {
  auto r = end_to_end(seed, 2, {{3, 3}, {2, 6}}, 10, 9, true, 300);
  return {2, "trace equivalence, planted oracle", r.pass, r.detail};
}

CriterionResult c3(std::uint64_t seed) {
  const QuadraticDetOracle det;
  int dense = 0, zeroed = 0;
  for (int t = 0; t < 20; ++t) {
    Rng rng = case_rng(seed, 3, t);
    MultiPoly f(12);
    for (const auto& e : monomials_up_to(12, 3, true)) f.add_term(e, rng.uniform());
    dense += !trace_equivalence(Blackbox::from_poly(f), det, rng).ok();

    MultiPoly g = trimm_explicit({2, 3});
    auto it = g.terms().begin();
    std::advance(it, static_cast<long>(rng.below(g.num_terms())));
    g.add_term(it->first, -it->second);
    zeroed += !trace_equivalence(Blackbox::from_poly(g), det, rng).ok();
  }
  return {3, "negative controls rejected", dense >= 19 && zeroed >= 19,
          "dense cubic " + ratio(dense, 20) + ", zeroed monomial " + ratio(zeroed, 20)};
}

CriterionResult c4(std::uint64_t seed) {
  int good = 0;
  for (TrimmShape s : {TrimmShape{2, 4}, TrimmShape{3, 3}}) {
    const Blackbox f = trimm_blackbox(s);
    const Index adjacent = s.block_size(), apart = s.block_size() * s.block_size();
    for (int t = 0; t < 10; ++t) {
      Rng rng = case_rng(seed, 4, t + 10 * s.w);
      bool all = true;
      for (int a = 0; a < s.d; ++a)
        for (int b = a + 1; b < s.d; ++b) {
          const bool adj = b - a == 1 || b - a == s.d - 1;
          all = all && evaldim(f, {a, b}, s, rng) == (adj ? adjacent : apart);
        }
      good += all;
    }
  }
  return {4, "evaluation dimension of block pairs", good == 20, ratio(good, 20) + " seeds"};
}

CriterionResult c5(std::uint64_t seed) {
  Rng rng = case_rng(seed, 5, 0);
  const TrimmShape s{2, 3};
  const Blackbox f = Blackbox::from_poly(trimm_explicit(s));
  const LieBasis sampled = lie_algebra_basis(f, rng);
  const LieBasis exact = lie_algebra_basis(f, rng, LieMode::Exact);
  const SpanBasis<Fp> span = sampled.span();
  bool generators = true;
  for (int k = 0; k < s.d; ++k)
    for (int u = 0; u < s.w; ++u)
      for (int v = 0; v < s.w; ++v) generators = generators && span.contains(flatten(lie_generator(s, k, unit(s.w, u, v))));
  bool block_diagonal = true;
  const Index b = s.block_size();
  for (const auto& e : sampled.basis)
    for (Index i = 0; i < e.rows(); ++i)
      for (Index j = 0; j < e.cols(); ++j)
        if (i / b != j / b && !e(i, j).is_zero()) block_diagonal = false;
  const bool same = span.same_span(exact.span());
  const bool dims = sampled.dim() == exact.dim();
  return {5, "Lie algebra of Tr-IMM_{2,3}", same && generators && block_diagonal && dims,
          "dim " + std::to_string(sampled.dim()) + " (exact " + std::to_string(exact.dim()) + "), generators " +
              (generators ? "contained" : "missing") + ", block-diagonal " + (block_diagonal ? "yes" : "no")};
}

CriterionResult c6(std::uint64_t seed) {
  Rng rng = case_rng(seed, 6, 0);
  const LieBasis lie = lie_algebra_basis(trimm_blackbox({2, 3}), rng);
  int squarefree = 0;
  for (int t = 0; t < 100; ++t) squarefree += squarefree_test(UniPolyFp(char_poly(random_element(lie, rng))));
  return {6, "square-free characteristic polynomials", squarefree >= 95, ratio(squarefree, 100)};
}

CriterionResult c7(std::uint64_t seed) {
  const TrimmShape s{2, 3};
  int good = 0;
  for (int t = 0; t < 20; ++t) {
    Rng rng = case_rng(seed, 7, t);
    const PlantedInstance inst = plant_instance(s, rng, PlantMode::Full);
    auto result = irreducible_invariant_subspaces(inst.f, rng);
    if (!result.ok() || result->size() != 3u) continue;
    bool all = true;
    for (const auto& u : *result) {
      if (u.dim() != 4) all = false;
      const MatrixFp image = inst.a * u.basis;
      int touched = 0;
      for (int k = 0; k < s.d; ++k) touched += !is_zero(image.middleRows(k * s.block_size(), s.block_size()));
      if (touched != 1) all = false;
    }
    good += all;
  }
  return {7, "irreducible invariant subspaces", good == 20, ratio(good, 20) + " seeds"};
}

CriterionResult c8(std::uint64_t seed) {
  const TrimmShape s{2, 5};
  int good = 0;
  for (int t = 0; t < 10; ++t) {
    Rng rng = case_rng(seed, 8, t);
    const PlantedInstance inst = plant_instance(s, rng, PlantMode::Block);
    SetMultABP abp;
    try {
      abp = reconstruct_abp(inst.f, s, rng);
    } catch (const std::exception&) {
      continue;
    }
    Index width = 0;
    for (const auto& layer : abp.layers) width = std::max({width, layer.rows(), layer.cols()});
    bool match = width == s.block_size();
    for (int p = 0; p < 200 && match; ++p) {
      const VectorFp x = random_vector(rng, s.n());
      match = abp.eval(std::span<const Fp>(x.data(), static_cast<std::size_t>(x.size()))) == inst.f(x);
    }
    good += match;
  }
  return {8, "set-multilinear ABP reconstruction", good == 10, ratio(good, 10) + " seeds"};
}

CriterionResult c9(std::uint64_t seed) {
  Rng rng = case_rng(seed, 9, 0);
  int accepted = 0;
  for (int t = 0; t < 50; ++t) {
    const MatrixFp b = random_invertible(rng, 4);
    auto form = [&](Index r) { return MultiPoly::linear_form(b.row(r).transpose()); };
    const MultiPoly g = form(0) * form(3) - form(1) * form(2);
    auto x = det_oracle_w2(g, rng);
    if (!x.ok()) continue;
    bool same = true;
    for (int p = 0; p < 50 && same; ++p) {
      const VectorFp pt = random_vector(rng, 4);
      same = determinant(x->eval(pt)) == g.eval(pt);
    }
    accepted += same;
  }
  int rejected = 0;
  for (int t = 0; t < 20; ++t) {
    const Index r = 1 + t % 3;
    const MatrixFp c = random_matrix(rng, r, 4);
    MultiPoly g(4);
    for (Index i = 0; i < r; ++i) {
      const MultiPoly l = MultiPoly::linear_form(c.row(i).transpose());
      g += rng.uniform_nonzero() * (l * l);
    }
    rejected += !det_oracle_w2(g, rng).ok();
  }
  return {9, "quadratic determinant oracle", accepted == 50 && rejected == 20,
          "compositions " + ratio(accepted, 50) + ", low rank rejected " + ratio(rejected, 20)};
}

CriterionResult c10(std::uint64_t) {
  const int w = 2;
  const Index s = w * w;
  const LinearMatrix z = LinearMatrix::symbolic(w, w).kron_identity_left(w);
  const MatrixFp sols = intertwiner_solutions(z, z);
  bool kron_form = sols.cols() == s;
  for (Index c = 0; c < sols.cols() && kron_form; ++c) {
    MatrixFp t(s, s), u(s, s);
    for (Index j = 0; j < s; ++j)
      for (Index i = 0; i < s; ++i) {
        t(i, j) = sols(j * s + i, c);
        u(i, j) = sols(s * s + j * s + i, c);
      }
    MatrixFp m(w, w);
    for (Index i = 0; i < w; ++i)
      for (Index j = 0; j < w; ++j) m(i, j) = t(i * w, j * w);
    kron_form = t == u && t == kron(m, MatrixFp::Identity(w, w));
  }
  const Index mixed = intertwiner_solutions(z.transpose(), z).cols();
  return {10, "intertwiner solution spaces", kron_form && mixed == 0,
          "plain dim " + std::to_string(sols.cols()) + (kron_form ? " (M (x) I form)" : "") + ", mixed dim " +
              std::to_string(mixed)};
}

CriterionResult c11(std::uint64_t seed) {
  const QuadraticDetOracle det;
  const MmtiOracle mmti(det);
  std::string detail;
  bool pass = true;
  int t = 0;
  for (TrimmShape s : {TrimmShape{2, 4}, TrimmShape{2, 6}}) {
    int ok = 0;
    for (int r = 0; r < 10; ++r, ++t) {
      Rng rng = case_rng(seed, 11, t);
      const PlantedInstance inst = plant_instance(s, rng, PlantMode::Block);
      auto wit = degree_d_to_3(inst.f, s.w, mmti, rng);
      Rng check = rng.split();
      ok += wit.ok() && verify_witness(inst.f, s, wit->blocks, 50, check);
    }
    pass = pass && ok == 10;
    detail += shape_name(s) + " " + ratio(ok, 10) + ", ";
  }
  int rejected = 0;
  for (int r = 0; r < 10; ++r, ++t) {
    Rng rng = case_rng(seed, 11, t);
    rejected += !degree_d_to_3(Blackbox::from_poly(random_tensor({2, 4}, rng)), 2, mmti, rng).ok();
  }
  return {11, "degree reduction to three blocks", pass && rejected == 10,
          detail + "random tensor rejected " + ratio(rejected, 10)};
}

CriterionResult c12(std::uint64_t seed) {
  const QuadraticDetOracle det;
  const MmtiOracle mmti(det);
  int ok = 0;
  for (int t = 0; t < 10; ++t) {
    Rng rng = case_rng(seed, 12, t);
    const AlgebraInput a = planted_algebra(2, rng);
    auto iso = fmai_solve(a, mmti, rng);
    ok += iso.ok() && verify_algebra_iso(a, *iso);
  }
  int at_gate = 0;
  std::string gate;
  for (int t = 0; t < 10; ++t) {
    Rng rng = case_rng(seed, 12, 10 + t);
    auto iso = fmai_solve(diagonal_algebra(4), mmti, rng);
    if (!iso.ok()) {
      gate = iso.rejection().gate;
      at_gate += gate == "commutant-dimension";
    }
  }
  return {12, "matrix algebra isomorphism", ok >= 9 && at_gate == 10,
          "planted " + ratio(ok, 10) + ", diagonal rejected at commutant-dimension " + ratio(at_gate, 10) +
              (gate.empty() ? "" : " (observed gate " + gate + ")")};
}

CriterionResult c13(std::uint64_t) {
  const int w = 2;
  std::vector<MatrixFp> left, transposed;
  for (Index i = 0; i < w; ++i)
    for (Index j = 0; j < w; ++j) {
      left.push_back(kron(MatrixFp::Identity(w, w), unit(w, i, j)));
      transposed.push_back(left.back().transpose());
    }
  const MatrixFp space = constrained_tensor_space(left, commutant_basis(transposed), w);
  bool proportional = false;
  if (space.cols() == 1) {
    const TrimmShape s{w, 4};
    const MultiPoly f = trimm_explicit(s);
    const Index b = s.block_size();
    VectorFp target(space.rows());
    for (Index t = 0; t < target.size(); ++t) {
      MultiPoly::Exponents e(static_cast<std::size_t>(s.n()), 0);
      Index rest = t;
      for (int k = 3; k >= 0; --k) {
        ++e[static_cast<std::size_t>(k * b + rest % b)];
        rest /= b;
      }
      target(t) = f.coefficient(e);
    }
    Index pivot = 0;
    while (pivot < target.size() && target(pivot).is_zero()) ++pivot;
    proportional = !space(pivot, 0).is_zero() && VectorFp(space.col(0) * (target(pivot) / space(pivot, 0))) == target;
  }
  return {13, "constrained tensor for the identity conjugation", proportional,
          "nullspace dim " + std::to_string(space.cols()) + (proportional ? ", proportional to Tr-IMM_{2,4}" : "")};
}

const std::function<CriterionResult(std::uint64_t)> kCriteria[kCriterionCount] = {c1, c2, c3, c4,  c5,  c6, c7,
                                                                                  c8, c9, c10, c11, c12, c13};

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
  if (id < 1 || id > kCriterionCount) throw std::out_of_range("no acceptance criterion " + std::to_string(id));
  const auto start = Clock::now();
  CriterionResult r;
  try {
    r = kCriteria[id - 1](seed);
  } catch (const std::exception& e) {
    r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what()};
  }
  r.seconds = seconds_since(start);
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<int> ids = options.only;
  if (ids.empty())
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  std::vector<CriterionResult> results(ids.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ids.size(); i = next++) results[i] = run_criterion(ids[i], options.seed);
  };
  const int jobs = std::clamp(options.jobs, 1, static_cast<int>(ids.size()));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

std::string format_result(const CriterionResult& r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, " [%.1f s]", r.seconds);
  return std::string(r.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(r.id) + ": " + r.title + " -- " +
         r.detail + buf;
}

}  // namespace traceiso
