#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "prk/bounds.hpp"
#include "prk/instance_io.hpp"
#include "prk/measurement.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("prk_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static Outcome call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = prk::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
  }

  static std::string slurp(const std::string& p) { return prk::read_text_file(p); }

  static nlohmann::json load(const std::string& p) { return nlohmann::json::parse(slurp(p)); }

  std::string make_instance(std::size_t n, std::size_t m, const std::string& name = "inst.json") {
    const auto p = path(name);
    const auto r = call({"gen", "--n", std::to_string(n), "--m", std::to_string(m), "--seed", "1", "--out", p});
    EXPECT_EQ(r.code, 0) << r.err;
    return p;
  }

  fs::path dir_;
};

TEST_F(Cli, GenWritesUnitRows) {
  const auto p = make_instance(10, 200);
  const auto ms = prk::read_instance(p);
  EXPECT_EQ(ms.n(), 10u);
  EXPECT_EQ(ms.m(), 200u);
  EXPECT_LT((ms.rows().rowwise().norm().array() - 1.0).abs().maxCoeff(), 1e-12);
  EXPECT_TRUE(load(p).contains("provenance"));
}

TEST_F(Cli, GenIsDeterministic) {
  const auto a = make_instance(10, 200, "a.json");
  const auto b = make_instance(10, 200, "b.json");
  auto ja = load(a), jb = load(b);
  ja["provenance"]["config"].erase("out");
  jb["provenance"]["config"].erase("out");
  EXPECT_EQ(ja, jb);
}

TEST_F(Cli, ZeroMeasurementsIsValidationError) {
  const auto r = call({"gen", "--n", "4", "--m", "0", "--out", path("x.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--help"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("x.json")));
}

TEST_F(Cli, MissingSubcommandIsValidationError) { EXPECT_EQ(call({}).code, 2); }

TEST_F(Cli, HelpExitsZero) { EXPECT_EQ(call({"--help"}).code, 0); }

TEST_F(Cli, SolveWritesTraceAndSidecar) {
  const auto inst = make_instance(8, 160);
  const auto r = call({"solve", "--instance", inst, "--eps", "1e-4", "--seed", "2", "--out", path("run")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(path("run.csv"));
  EXPECT_EQ(csv.rfind("step,dist,angle,residual\n", 0), 0u);
  const auto meta = load(path("run.json"));
  for (const char* key : {"seed", "stream", "K", "n", "m", "selector", "provenance", "summary", "init"})
    EXPECT_TRUE(meta.contains(key)) << key;
  EXPECT_EQ(meta["K"], prk::theorem_iterations(1e-4, 0.05, 8));
}

TEST_F(Cli, ZeroIterationsSummaryEqualsInit) {
  const auto inst = make_instance(6, 120);
  ASSERT_EQ(call({"solve", "--instance", inst, "-K", "0", "--out", path("r")}).code, 0);
  const auto meta = load(path("r.json"));
  EXPECT_EQ(meta["summary"]["initial_dist"], meta["summary"]["final_dist"]);
  EXPECT_EQ(meta["final_iterate"], meta["init"]["x0"]);
}

TEST_F(Cli, GivenSignalStaysFixed) {
  const auto inst = make_instance(5, 60);
  const auto ms = prk::read_instance(inst);
  prk::write_text_file(path("x0.json"), prk::vector_to_json(ms.hidden_signal()->x()).dump());
  ASSERT_EQ(call({"solve", "--instance", inst, "--init", "given", "--x0", path("x0.json"), "-K", "50", "--out",
                  path("r")})
                .code,
            0);
  std::istringstream csv(slurp(path("r.csv")));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    const auto first = line.find(','), second = line.find(',', first + 1);
    EXPECT_LE(std::stod(line.substr(first + 1, second - first - 1)), 1e-12) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 51);
}

TEST_F(Cli, SolveWithoutSignalWarns) {
  const auto ms = prk::read_instance(make_instance(5, 60)).without_signal();
  prk::write_instance(path("blind.json"), ms);
  const auto r = call({"solve", "--instance", path("blind.json"), "-K", "20", "--out", path("r")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("metric-unavailable"), std::string::npos);
}

TEST_F(Cli, SingleTrialEnsembleEqualsSolve) {
  const auto inst = make_instance(8, 160);
  const std::vector<std::string> common = {"--instance", inst, "-K", "150", "--seed", "11", "--threads", "2"};
  auto solve = std::vector<std::string>{"solve"};
  solve.insert(solve.end(), common.begin(), common.end());
  solve.insert(solve.end(), {"--out", path("s")});
  auto ens = std::vector<std::string>{"ensemble", "-L", "1"};
  ens.insert(ens.end(), common.begin(), common.end());
  ens.insert(ens.end(), {"--out", path("e")});
  ASSERT_EQ(call(solve).code, 0);
  ASSERT_EQ(call(ens).code, 0);
  EXPECT_EQ(load(path("s.json"))["final_iterate"], load(path("e.json"))["estimate"]);
}

TEST_F(Cli, NoMajorityExitsThree) {
  const auto inst = make_instance(8, 160);
  const auto r = call({"ensemble", "--instance", inst, "-K", "3", "-L", "4", "--radius", "1e-12", "--out", path("e")});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(load(path("e.json"))["status"], "no-majority");
}

TEST_F(Cli, AuditRejectsZeroWedges) {
  const auto inst = make_instance(4, 40);
  EXPECT_EQ(call({"acw-audit", "--instance", inst, "--wedges", "0", "--out", path("a")}).code, 2);
}

TEST_F(Cli, AuditFailsOnDuplicateRows) {
  prk::RowMatrix rows = prk::RowMatrix::Zero(40, 3);
  rows.col(0).setOnes();
  prk::write_instance(path("dup.json"), prk::MeasurementSet(rows, prk::Vector::Zero(40)));
  ASSERT_EQ(call({"acw-audit", "--instance", path("dup.json"), "--wedges", "50", "--refine", "--out", path("a")}).code,
            0);
  const auto report = load(path("a.json"));
  EXPECT_FALSE(report["pass"].get<bool>());
  EXPECT_EQ(slurp(path("a.csv")).rfind("theta,mu_A,margin,refined\n", 0), 0u);
}

TEST_F(Cli, UnknownStudyIsValidationError) {
  EXPECT_EQ(call({"study", "no-such-study", "--out", path("s")}).code, 2);
}

TEST_F(Cli, StudyWritesTable) {
  ASSERT_EQ(call({"study", "escape-prob", "--n", "5", "--deltas", "0.05,0.1", "--trials", "20", "-K", "50", "--out",
                  path("s")})
                .code,
            0);
  const auto csv = slurp(path("s.csv"));
  EXPECT_EQ(csv.rfind("delta,n,trials,K,frequency,stderr,bound\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(load(path("s.json"))["config"]["deltas"].size(), 2u);
}

TEST_F(Cli, ConfigFileDefaultsAndOverride) {
  std::ofstream(path("cfg.json")) << R"({"n": 5, "m": 30, "seed": 4})";
  ASSERT_EQ(call({"gen", "--config", path("cfg.json"), "--out", path("a.json")}).code, 0);
  ASSERT_EQ(call({"gen", "--config", path("cfg.json"), "--m", "12", "--out", path("b.json")}).code, 0);
  EXPECT_EQ(prk::read_instance(path("a.json")).m(), 30u);
  EXPECT_EQ(prk::read_instance(path("b.json")).m(), 12u);
  EXPECT_EQ(load(path("a.json"))["seed"], 4);
}

TEST_F(Cli, MalformedConfigIsIoError) {
  std::ofstream(path("cfg.json")) << "{ not json";
  EXPECT_EQ(call({"gen", "--config", path("cfg.json"), "--out", path("a.json")}).code, 4);
}

TEST_F(Cli, MissingInstanceIsIoError) {
  EXPECT_EQ(call({"solve", "--instance", path("missing.json"), "--out", path("r")}).code, 4);
}

TEST_F(Cli, UnwritableOutputIsIoError) {
  EXPECT_EQ(call({"gen", "--n", "3", "--out", path("no/such/dir/x.json")}).code, 4);
}

TEST_F(Cli, SolveIsDeterministic) {
  const auto inst = make_instance(6, 120);
  ASSERT_EQ(call({"solve", "--instance", inst, "-K", "80", "--seed", "5", "--out", path("a")}).code, 0);
  ASSERT_EQ(call({"solve", "--instance", inst, "-K", "80", "--seed", "5", "--out", path("b")}).code, 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
}

}  // namespace
