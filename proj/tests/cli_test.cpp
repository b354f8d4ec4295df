#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include "pcc/io.hpp"
#include "support/oracles.hpp"

namespace pcc {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pcc_cli_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliRun run(const std::string& args) {
    const auto err_file = dir_ / "stderr.txt";
    const std::string cmd = std::string(PCC_CLI_PATH) + " " + args + " 2>" + err_file.string();
    CliRun result;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return result;
    std::array<char, 4096> buf{};
    for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), pipe)) > 0;) result.out.append(buf.data(), n);
    const int status = pclose(pipe);
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.err = read_text_file(err_file);
    return result;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string tiny1() const { return testing::data_path("tiny1.json").string(); }

  fs::path dir_;
};

TEST_F(CliTest, GenerateThenValidate) {
  const auto gen = run("generate --seed 3 --set num_candidates=20 --out " + path("i.json"));
  ASSERT_EQ(gen.code, 0) << gen.err;
  const auto val = run("validate --instance " + path("i.json"));
  EXPECT_EQ(val.code, 0) << val.err;
  EXPECT_EQ(Json::parse(val.out)["valid"], true);
}

TEST_F(CliTest, SameSeedGeneratesTheSameFile) {
  const auto a = run("generate --seed 9");
  const auto b = run("generate --seed 9");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, run("generate --seed 10").out);
}

TEST_F(CliTest, BadParamNamesTheField) {
  const auto r = run("generate --set stay_probability=2");
  EXPECT_EQ(r.code, 2);
  const auto err = Json::parse(r.err);
  EXPECT_NE(err["message"].get<std::string>().find("stay_probability"), std::string::npos);
  EXPECT_EQ(run("generate --set bogus=1").code, 2);
}

TEST_F(CliTest, SolveTinyOneExactly) {
  const auto r = run("solve --instance " + tiny1() + " --algo exact --out " + path("r.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "6\n");
  const auto result = Json::parse(read_text_file(path("r.json")));
  EXPECT_EQ(result["status"], "optimal");
  EXPECT_EQ(result["cost"]["total"], 6);
}

TEST_F(CliTest, SolveWithEveryHeuristic) {
  for (const char* algo : {"ppcc", "spba", "agw"}) {
    const auto r = run("solve --instance " + tiny1() + " --algo " + algo);
    EXPECT_EQ(r.code, 0) << algo << r.err;
    EXPECT_EQ(r.out, "6\n") << algo;
  }
}

TEST_F(CliTest, UnknownAlgorithmIsAUsageError) {
  EXPECT_EQ(run("solve --instance " + tiny1() + " --algo simplex").code, 2);
  EXPECT_EQ(run("solve --algo ppcc").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(CliTest, CorruptedInstanceFailsValidation) {
  auto text = read_text_file(tiny1());
  text.resize(text.size() / 2);
  write_text_file(path("bad.json"), text);
  const auto r = run("validate --instance " + path("bad.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(Json::parse(r.err).contains("error"));

  auto inst = testing::tiny1();
  inst.mobility.destinations[0].probability = 0.5;
  save_instance(path("deficit.json"), inst);
  const auto v = run("validate --instance " + path("deficit.json"));
  EXPECT_EQ(v.code, 2);
  EXPECT_EQ(Json::parse(v.out)["valid"], false);
}

TEST_F(CliTest, SaturatedInstanceReportsUnplacedFunctions) {
  auto inst = testing::tiny1();
  inst.node_resources[1] = make_resources(5, 4);
  inst.node_resources[2] = make_resources(5, 4);
  save_instance(path("full.json"), inst);
  const auto r = run("solve --instance " + path("full.json") + " --algo ppcc --out " + path("r.json"));
  EXPECT_EQ(r.code, 0) << r.err;
  const auto result = Json::parse(read_text_file(path("r.json")));
  ASSERT_EQ(result["unplaced"].size(), 1u);
  EXPECT_EQ(result["unplaced"][0]["request"], "r1");
  EXPECT_EQ(result["unplaced"][0]["position"], 1);
  EXPECT_EQ(result["unplaced"][0]["nf"], "f1");
}

TEST_F(CliTest, ExactBudgetExit) {
  const auto gen = run("generate --seed 4 --set num_candidates=3 --set batch_size=2 --set chain_length=2 "
                       "--set num_heads_per_request=2 --set num_destinations=1 --set catalog_size=3 "
                       "--out " + path("i.json"));
  ASSERT_EQ(gen.code, 0) << gen.err;
  EXPECT_EQ(run("solve --instance " + path("i.json") + " --algo exact --max-nodes 0").code, 4);
}

TEST_F(CliTest, ExportLp) {
  const auto r = run("export-lp --instance " + tiny1());
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("Minimize", 0), 0u);
}

TEST_F(CliTest, BenchWritesItsFiles) {
  const auto r = run("bench --sweep rho_o=0,1 --trials 2 --set num_candidates=20 --set batch_size=20 --out " +
                     path("out"));
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* name : {"results.csv", "results.json", "plot.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / name)) << name;
  }
  EXPECT_EQ(read_text_file(dir_ / "out" / "results.csv"), r.out);
}

}  // namespace
}  // namespace pcc
