#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <json.hpp>

#include "traceiso/acceptance.hpp"
#include "traceiso/io.hpp"
#include "traceiso/reduction.hpp"
#include "traceiso/tensor.hpp"

using namespace traceiso;

namespace {

constexpr int kCertified = 0;
constexpr int kNo = 1;
constexpr int kError = 2;

PrimeModulus default_prime() {
  if (const char* env = std::getenv("TRACEISO_PRIME")) return PrimeModulus::parse(env);
  return PrimeModulus();
}

struct GenArgs {
  int w = 2;
  int d = 3;
  std::string prime;
  std::string mode = "full";
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  const PrimeModulus p = a.prime.empty() ? default_prime() : PrimeModulus::parse(a.prime);
  write_instance(a.out, generate_instance(a.mode, a.w, a.d, a.seed, p));
  std::cout << "wrote " << a.out << "\n";
  return kCertified;
}

struct SolveArgs {
  std::string instance;
  std::string task = "trace";
  std::string oracle = "w2";
  std::uint64_t seed = 1;
  std::string cert;
  std::string report;
};

Outcome<Certificate> run_task(const SolveArgs& a, const Instance& inst, const DetOracle& det, Rng& rng, RunLog& log) {
  Certificate cert;
  cert.modulus = inst.modulus;
  cert.w = inst.w;
  cert.d = inst.d;
  const MmtiOracle mmti(det);
  if (a.task == "fmai") {
    if (inst.kind != InstanceKind::Algebra) throw std::invalid_argument("task fmai needs an algebra instance");
    auto iso = fmai_solve(inst.algebra, mmti, rng, &log);
    if (!iso.ok()) return iso.rejection();
    cert.kind = CertificateKind::Algebra;
    cert.w = iso->w;
    cert.images = iso->images;
    return cert;
  }
  if (!inst.is_polynomial()) throw std::invalid_argument("task " + a.task + " needs a polynomial instance");
  const Blackbox f = instance_blackbox(inst);
  if (a.task == "trace") {
    auto wit = trace_equivalence(f, det, rng, &log);
    if (!wit.ok()) return wit.rejection();
    cert.kind = CertificateKind::Trace;
    cert.w = wit->w;
    cert.d = static_cast<int>(static_cast<Index>(f.num_vars()) / (static_cast<Index>(wit->w) * wit->w));
    cert.matrix = wit->a;
    return cert;
  }
  Outcome<TensorIsoWitness> wit = Rejection{};
  if (a.task == "tensor-iso") {
    if (inst.d != 3) throw std::invalid_argument("task tensor-iso needs d = 3");
    wit = mmti.solve(f, inst.w, rng, {}, &log);
  } else if (a.task == "degree-reduce") {
    wit = degree_d_to_3(f, inst.w, mmti, rng, {}, &log);
  } else {
    throw std::invalid_argument("unknown task '" + a.task + "'");
  }
  if (!wit.ok()) return wit.rejection();
  cert.kind = CertificateKind::Tensor;
  cert.blocks = wit->blocks;
  return cert;
}

int cmd_solve(const SolveArgs& a) {
  const bool planted = a.oracle == "planted";
  if (!planted && a.oracle != "w2") throw std::invalid_argument("unknown oracle '" + a.oracle + "'");
  const Instance inst = read_instance(a.instance, planted);
  const ModulusScope scope(inst.modulus);
  std::unique_ptr<DetOracle> det;
  if (planted) {
    if (!inst.secret) throw std::invalid_argument("the planted oracle needs the instance's secret section");
    det = std::make_unique<PlantedDetOracle>(inst.shape(), secret_matrix(inst));
  } else {
    det = std::make_unique<QuadraticDetOracle>();
  }

  Rng rng(a.seed);
  RunLog log;
  const auto start = std::chrono::steady_clock::now();
  const Outcome<Certificate> result = run_task(a, inst, *det, rng, log);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::ordered_json report;
  report["task"] = a.task;
  report["oracle"] = a.oracle;
  report["instance"] = a.instance;
  report["verdict"] = result.ok() ? "certified" : "no";
  if (!result.ok()) {
    report["gate"] = result.rejection().gate;
    report["detail"] = result.rejection().detail;
  }
  report["gates_passed"] = log.gates;
  report["pit_trials"] = log.pit_trials;
  report["wall_time_s"] = wall;
  report["seed"] = a.seed;
  const std::string text = report.dump(1) + "\n";
  std::cout << text;
  if (!a.report.empty()) {
    std::ofstream out(a.report);
    if (!out) throw std::runtime_error("cannot write " + a.report);
    out << text;
  }
  if (!result.ok()) return kNo;
  if (!a.cert.empty()) write_certificate(a.cert, *result);
  return kCertified;
}

struct VerifyArgs {
  std::string instance;
  std::string cert;
  int trials = 50;
  std::uint64_t seed = 1;
};

int cmd_verify(const VerifyArgs& a) {
  const Instance inst = read_instance(a.instance, false);
  const Certificate cert = read_certificate(a.cert);
  Rng rng(a.seed);
  const bool ok = verify_certificate(inst, cert, a.trials, rng);
  std::cout << (ok ? "verified" : "rejected") << " (" << a.trials << " trials, seed " << a.seed << ")\n";
  return ok ? kCertified : kNo;
}

int cmd_selftest(const AcceptanceOptions& options) {
  int failed = 0;
  for (const auto& r : run_acceptance(options)) {
    std::cout << format_result(r) << std::endl;
    failed += !r.pass;
  }
  std::cout << failed << " criteria failed (seed " << options.seed << ")" << std::endl;
  return failed == 0 ? kCertified : kNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace-of-matrix-product equivalence and tensor isomorphism over prime fields"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "write a random instance");
  g->add_option("--w", gen.w, "matrix width")->check(CLI::PositiveNumber);
  g->add_option("--d", gen.d, "number of matrices")->check(CLI::PositiveNumber);
  g->add_option("--prime", gen.prime, "field characteristic (default 2^61-1 or $TRACEISO_PRIME)");
  g->add_option("--mode", gen.mode, "instance kind")
      ->check(CLI::IsMember({"full", "block", "tensor", "algebra", "diag-algebra", "random-tensor"}));
  g->add_option("--seed", gen.seed, "random seed");
  g->add_option("--out", gen.out, "output path")->required();

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "run a pipeline on an instance");
  s->add_option("--instance", solve.instance, "instance path")->required();
  s->add_option("--task", solve.task, "pipeline")->check(CLI::IsMember({"trace", "tensor-iso", "fmai", "degree-reduce"}));
  s->add_option("--oracle", solve.oracle, "determinant oracle")->check(CLI::IsMember({"w2", "planted"}));
  s->add_option("--seed", solve.seed, "random seed");
  s->add_option("--cert", solve.cert, "certificate output path");
  s->add_option("--report", solve.report, "report output path");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "re-check a certificate by random evaluation");
  v->add_option("--instance", verify.instance, "instance path")->required();
  v->add_option("--cert", verify.cert, "certificate path")->required();
  v->add_option("--trials", verify.trials, "evaluation points")->check(CLI::PositiveNumber);
  v->add_option("--seed", verify.seed, "random seed");

  AcceptanceOptions self;
  auto* t = app.add_subcommand("selftest", "run the acceptance suite");
  t->add_option("--seed", self.seed, "base seed");
  t->add_option("--jobs", self.jobs, "criteria run in parallel")->check(CLI::PositiveNumber);
  t->add_option("--only", self.only, "criterion ids")->check(CLI::Range(1, kCriterionCount));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_solve(solve);
    if (*v) return cmd_verify(verify);
    return cmd_selftest(self);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}
