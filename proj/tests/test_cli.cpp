#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "traceiso/io.hpp"

using namespace traceiso;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("traceiso_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(TRACEISO_CLI_PATH) + " " + args + " > " + path("stdout.txt") + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenFullWritesInvertibleMatrix) {
  ASSERT_EQ(run("gen --w 2 --d 3 --mode full --seed 1 --out " + path("i.json")), 0);
  const Instance inst = read_instance(path("i.json"));
  EXPECT_EQ(inst.kind, InstanceKind::Full);
  ASSERT_EQ(inst.matrix.rows(), 12);
  ASSERT_EQ(inst.matrix.cols(), 12);
  const ModulusScope scope(inst.modulus);
  EXPECT_TRUE(is_invertible(inst.matrix));
}

TEST_F(Cli, GenIsDeterministic) {
  ASSERT_EQ(run("gen --w 2 --d 4 --mode block --seed 7 --out " + path("a.json")), 0);
  ASSERT_EQ(run("gen --w 2 --d 4 --mode block --seed 7 --out " + path("b.json")), 0);
  EXPECT_EQ(read("a.json"), read("b.json"));
  ASSERT_EQ(run("gen --w 2 --d 4 --mode block --seed 8 --out " + path("c.json")), 0);
  EXPECT_NE(read("a.json"), read("c.json"));
}

TEST_F(Cli, GenAlgebraBasisShape) {
  ASSERT_EQ(run("gen --w 2 --d 4 --mode algebra --seed 3 --out " + path("a.json")), 0);
  const Instance inst = read_instance(path("a.json"));
  ASSERT_EQ(inst.algebra.basis.size(), 4u);
  for (const auto& m : inst.algebra.basis) {
    EXPECT_EQ(m.rows(), 4);
    EXPECT_EQ(m.cols(), 4);
  }
}

TEST_F(Cli, SolveTraceRoundTrip) {
  ASSERT_EQ(run("gen --w 2 --d 3 --mode full --seed 2 --out " + path("i.json")), 0);
  ASSERT_EQ(run("solve --instance " + path("i.json") + " --task trace --oracle w2 --seed 5 --cert " + path("c.json") +
                " --report " + path("r.json")),
            0);
  const auto report = nlohmann::json::parse(read("r.json"));
  EXPECT_EQ(report["verdict"], "certified");
  EXPECT_EQ(report["seed"], 5);
  EXPECT_GT(report["pit_trials"].get<long>(), 0);
  EXPECT_FALSE(report["gates_passed"].empty());
  EXPECT_EQ(run("verify --instance " + path("i.json") + " --cert " + path("c.json") + " --seed 99"), 0);
}

TEST_F(Cli, CorruptedCertificateFailsVerification) {
  ASSERT_EQ(run("gen --w 2 --d 3 --mode full --seed 4 --out " + path("i.json")), 0);
  ASSERT_EQ(run("solve --instance " + path("i.json") + " --cert " + path("c.json")), 0);
  Certificate cert = read_certificate(path("c.json"));
  {
    const ModulusScope scope(cert.modulus);
    cert.matrix(0, 0) += Fp(1);
  }
  write_certificate(path("bad.json"), cert);
  EXPECT_EQ(run("verify --instance " + path("i.json") + " --cert " + path("bad.json")), 1);
}

TEST_F(Cli, IdentityWitnessAndPerturbation) {
  Instance inst = generate_instance("block", 2, 3, 1, PrimeModulus());
  const ModulusScope scope(inst.modulus);
  for (auto& b : inst.blocks) b = MatrixFp::Identity(4, 4);
  inst.secret.reset();
  write_instance(path("i.json"), inst);
  Certificate cert{inst.modulus, CertificateKind::Tensor, 2, 3, {}, inst.blocks, {}};
  write_certificate(path("c.json"), cert);
  EXPECT_EQ(run("verify --instance " + path("i.json") + " --cert " + path("c.json")), 0);
  cert.blocks[1](2, 3) = Fp(5);
  write_certificate(path("p.json"), cert);
  EXPECT_EQ(run("verify --instance " + path("i.json") + " --cert " + path("p.json")), 1);
}

TEST_F(Cli, TensorTasks) {
  ASSERT_EQ(run("gen --w 2 --d 3 --mode tensor --seed 6 --out " + path("t.json")), 0);
  ASSERT_EQ(run("solve --instance " + path("t.json") + " --task tensor-iso --cert " + path("c.json")), 0);
  EXPECT_EQ(run("verify --instance " + path("t.json") + " --cert " + path("c.json") + " --seed 3"), 0);

  ASSERT_EQ(run("gen --w 2 --d 5 --mode block --seed 6 --out " + path("b.json")), 0);
  ASSERT_EQ(run("solve --instance " + path("b.json") + " --task degree-reduce --cert " + path("d.json")), 0);
  EXPECT_EQ(run("verify --instance " + path("b.json") + " --cert " + path("d.json") + " --seed 4"), 0);

  ASSERT_EQ(run("gen --w 2 --d 4 --mode random-tensor --seed 6 --out " + path("r.json")), 0);
  EXPECT_EQ(run("solve --instance " + path("r.json") + " --task degree-reduce"), 1);
}

TEST_F(Cli, PlantedOracleUsesSecret) {
  ASSERT_EQ(run("gen --w 3 --d 3 --mode full --seed 2 --out " + path("i.json")), 0);
  ASSERT_EQ(run("solve --instance " + path("i.json") + " --oracle planted --cert " + path("c.json")), 0);
  EXPECT_EQ(run("verify --instance " + path("i.json") + " --cert " + path("c.json") + " --seed 11"), 0);
}

TEST_F(Cli, FmaiTask) {
  ASSERT_EQ(run("gen --w 2 --d 4 --mode algebra --seed 9 --out " + path("a.json")), 0);
  ASSERT_EQ(run("solve --instance " + path("a.json") + " --task fmai --cert " + path("c.json")), 0);
  EXPECT_EQ(run("verify --instance " + path("a.json") + " --cert " + path("c.json")), 0);

  ASSERT_EQ(run("gen --w 2 --d 4 --mode diag-algebra --out " + path("d.json")), 0);
  EXPECT_EQ(run("solve --instance " + path("d.json") + " --task fmai --report " + path("r.json")), 1);
  const auto report = nlohmann::json::parse(read("r.json"));
  EXPECT_EQ(report["verdict"], "no");
  EXPECT_FALSE(report["gate"].get<std::string>().empty());
}

TEST_F(Cli, ErrorsExitWithTwo) {
  EXPECT_EQ(run("solve --instance " + path("missing.json")), 2);
  EXPECT_EQ(run("gen --w 2 --d 3 --mode nonsense --out " + path("x.json")), 2);
  ASSERT_EQ(run("gen --w 2 --d 4 --mode algebra --out " + path("a.json")), 0);
  EXPECT_EQ(run("solve --instance " + path("a.json") + " --task fmai --oracle planted"), 2);
  EXPECT_EQ(run("solve --instance " + path("a.json") + " --task trace"), 2);
  std::ofstream(path("junk.json")) << "{ not json";
  EXPECT_EQ(run("solve --instance " + path("junk.json")), 2);
}

TEST_F(Cli, SelftestSubset) {
  EXPECT_EQ(run("selftest --only 10 13"), 0);
  const std::string out = read("stdout.txt");
  EXPECT_NE(out.find("PASS criterion 10"), std::string::npos);
  EXPECT_NE(out.find("PASS criterion 13"), std::string::npos);
}

TEST(InstanceFormat, RoundTripsEveryKind) {
  for (const std::string mode : {"full", "block", "tensor", "algebra", "random-tensor"}) {
    const Instance inst = generate_instance(mode, 2, 4, 12, PrimeModulus());
    const std::string text = instance_to_text(inst);
    EXPECT_EQ(instance_to_text(instance_from_text(text)), text) << mode;
  }
}

TEST(InstanceFormat, SecretReproducesPlantedMatrix) {
  const PrimeModulus p;
  const ModulusScope scope(p);
  const Instance inst = instance_from_text(instance_to_text(generate_instance("full", 2, 3, 5, p)));
  EXPECT_EQ(secret_matrix(inst), inst.matrix);
  EXPECT_FALSE(instance_from_text(instance_to_text(inst), false).secret.has_value());
}

TEST(InstanceFormat, ExplicitTermsMatchPolynomial) {
  const PrimeModulus p;
  const ModulusScope scope(p);
  const Instance inst = generate_instance("random-tensor", 2, 3, 2, p);
  const Instance back = instance_from_text(instance_to_text(inst));
  EXPECT_TRUE(back.terms == inst.terms);
  EXPECT_EQ(back.terms.num_terms(), 64u);
}

TEST(InstanceFormat, SmallPrimeAndMalformedInput) {
  const PrimeModulus p(1000003);
  const Instance inst = generate_instance("algebra", 2, 4, 1, p);
  const Instance back = instance_from_text(instance_to_text(inst));
  EXPECT_EQ(back.modulus.value(), 1000003u);
  EXPECT_THROW(instance_from_text("{\"format_version\": 2}"), FormatError);
  std::string text = instance_to_text(inst);
  text.replace(text.find("\"m\": 4"), 6, "\"m\": 5");
  EXPECT_THROW(instance_from_text(text), FormatError);
}
