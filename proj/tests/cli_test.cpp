#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "cockedhat/cli.hpp"

using namespace cockedhat;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Runs the installed binary; returns its exit status and stdout.
std::pair<int, std::string> run_binary(const std::string& args) {
  const std::string cmd = std::string(COCKEDHAT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string text;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) text.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, text};
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / name; }

const char* kEquilateral = "--points '0,1;-0.8660254037844386,-0.5;0.8660254037844386,-0.5' --target 0,0";

}  // namespace

TEST(Config, JsonRoundTrip) {
  cli::ExperimentConfig c;
  c.command = "simulate";
  c.points = "0,0;1,0;0,1";
  c.target = "0.2,0.2";
  c.model = "interval:5deg";
  c.formulation = "conditional";
  c.trials = 12345;
  c.seed = 0xFFFFFFFFFFFFULL;
  c.threads = 3;
  nlohmann::json j = c;
  const auto back = j.get<cli::ExperimentConfig>();
  EXPECT_EQ(back, c);
  EXPECT_EQ(nlohmann::json::parse(j.dump()).get<cli::ExperimentConfig>(), c);
}

TEST(Config, SaveThenReplay) {
  const auto cfg = temp_file("cockedhat_cli_cfg.json");
  const auto a = run({"--save-config", cfg.string(), "exact", "--points", "0,1;-0.8660254037844386,-0.5;0.8660254037844386,-0.5",
                      "--target", "0,0", "--model", "tworay:±10deg"});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto b = run({"--config", cfg.string()});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(a.out, b.out);
  fs::remove(cfg);
}

TEST(Commands, ExactReportsTwoEighths) {
  const auto r = run({"exact", "--points", "0,1;-0.8660254037844386,-0.5;0.8660254037844386,-0.5", "--target", "0,0",
                      "--model", "tworay:±10deg"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("2/8"), std::string::npos) << r.out;
}

TEST(Commands, CounterexamplesVerify) {
  for (const char* id : {"CE1", "CE2", "CE3"}) {
    const auto r = run({"counterexample", id});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("verified"), std::string::npos);
  }
}

TEST(Commands, RegionsOfConcurrentLines) {
  const auto r = run({"regions", "--lines", "0,0,0;0,1,90deg;1,1,45deg"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find('6'), std::string::npos) << r.out;
}

TEST(Commands, GenWritesReadableScenario) {
  const auto scn = temp_file("cockedhat_cli_gen.scn");
  ASSERT_EQ(run({"gen", "--n", "4", "--seed", "3", "--output", scn.string()}).code, 0);
  const auto r = run({"special", "--scenario", scn.string(), "--seed", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("8 of 16"), std::string::npos) << r.out;
  fs::remove(scn);
}

TEST(ExitCodes, BinaryReportsFailureClasses) {
  EXPECT_EQ(run_binary("exact " + std::string(kEquilateral) + " --model tworay:±10deg").first, 0);
  EXPECT_EQ(run_binary("exact " + std::string(kEquilateral) + " --model tworay:±80deg").first, 1);
  EXPECT_EQ(run_binary("exact --scenario /nonexistent/file.scn").first, 2);
  EXPECT_EQ(run_binary("frobnicate").first, 2);
  EXPECT_EQ(run_binary("simulate --trials notanumber").first, 2);
  EXPECT_EQ(run_binary("exact --points '0,0;1,0;2,0' --target 3,0 --model tworay:±1deg").first, 1);
}

TEST(Determinism, WorkerCountDoesNotChangeCsv) {
  const std::string base = "simulate " + std::string(kEquilateral) + " --model interval:10deg --trials 200000 --seed 5 --output -";
  const auto one = run_binary(base + " --threads 1");
  const auto eight = run_binary(base + " --threads 8");
  ASSERT_EQ(one.first, 0);
  ASSERT_EQ(eight.first, 0);
  EXPECT_FALSE(one.second.empty());
  EXPECT_EQ(one.second, eight.second);
}

TEST(Determinism, SeedChangesCsv) {
  const std::string base = "simulate " + std::string(kEquilateral) + " --model interval:10deg --trials 100000 --output -";
  EXPECT_NE(run_binary(base + " --seed 1").second, run_binary(base + " --seed 2").second);
}
