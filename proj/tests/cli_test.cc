#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include "parkassign/io.h"
#include "parkassign/scenario.h"
#include "support.h"

using namespace parkassign;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string output;
};

Result run(const std::string& args) {
  static int calls = 0;
  const fs::path log = fs::temp_directory_path() /
                       ("parkassign_cli_" + std::to_string(::getpid()) + "_" +
                        std::to_string(++calls) + ".log");
  const std::string cmd =
      std::string(PARKASSIGN_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  Result r{WEXITSTATUS(status), io::read_text(log)};
  fs::remove(log);
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("parkassign_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string small_scenario(int lots = 6, int capacity = 300) {
    const std::string p = path("small.json");
    const Result r = run("generate --lots " + std::to_string(lots) + " --capacity " +
                         std::to_string(capacity) + " --entries 4 --seed 3 --quiet -o " + p);
    EXPECT_EQ(r.code, 0) << r.output;
    return p;
  }

  fs::path dir_;
};

std::string read(const std::string& p) { return io::read_text(p); }

int rows(const std::string& p) {
  const std::string t = read(p);
  return static_cast<int>(std::count(t.begin(), t.end(), '\n')) - 1;
}

TEST_F(Cli, GeneratePaperScale) {
  const Result r = run("generate --lots 21 --capacity 3992 --entries 12 --seed 7 -o " +
                       path("b.json"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("21 lots, 3992 spaces, 12 entries"), std::string::npos);
  const Scenario s = load_scenario(path("b.json"));
  EXPECT_EQ(s.lots.size(), 21u);
  EXPECT_EQ(read(path("b.json")), read(test::bundled_scenario().string()));
}

TEST_F(Cli, GenerateMinimalAndRepeatable) {
  ASSERT_EQ(run("generate --lots 1 --capacity 1 --entries 1 --quiet -o " + path("a.json")).code, 0);
  ASSERT_EQ(run("generate --lots 1 --capacity 1 --entries 1 --quiet -o " + path("b.json")).code, 0);
  EXPECT_EQ(read(path("a.json")), read(path("b.json")));
  EXPECT_EQ(load_scenario(path("a.json")).vehicle_count, 1);
}

TEST_F(Cli, SolveMinimalAndBundled) {
  ASSERT_EQ(run("generate --lots 1 --capacity 1 --entries 1 --quiet -o " + path("m.json")).code, 0);
  Result r = run("solve --scenario " + path("m.json") + " --out " + path("m"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(rows(path("m/assignment.csv")), 1);

  const std::string bundled = test::bundled_scenario().string();
  r = run("solve --scenario " + bundled + " --out " + path("b1"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("optimal assignment: 3992 vehicles"), std::string::npos);
  EXPECT_EQ(rows(path("b1/assignment.csv")), 3992);
  ASSERT_EQ(run("solve --quiet --scenario " + bundled + " --out " + path("b2")).code, 0);
  EXPECT_EQ(read(path("b1/assignment.csv")), read(path("b2/assignment.csv")));
}

TEST_F(Cli, SimulateWritesEveryFile) {
  const std::string s = small_scenario();
  const Result r = run("simulate --scenario " + s + " --runs 1 --log --out " + path("o"));
  ASSERT_EQ(r.code, 0) << r.output;
  for (const char* f : {"rerouting.csv", "failures.csv", "convergence.csv",
                        "running_mean.csv", "failures_by_replication.csv", "report.json",
                        "profiles.csv", "arrivals.csv", "events_r1.csv"}) {
    EXPECT_TRUE(fs::exists(path("o") + "/" + f)) << f;
  }
  EXPECT_EQ(rows(path("o/rerouting.csv")), 300);
  EXPECT_EQ(rows(path("o/convergence.csv")), 1);
}

TEST_F(Cli, SimulatePrefixStable) {
  const std::string s = small_scenario();
  ASSERT_EQ(run("simulate --quiet --scenario " + s + " --runs 10 --out " + path("r10")).code, 0);
  ASSERT_EQ(run("simulate --quiet --scenario " + s + " --runs 20 --out " + path("r20")).code, 0);
  const std::string ten = read(path("r10/rerouting.csv"));
  const std::string twenty = read(path("r20/rerouting.csv"));
  EXPECT_EQ(twenty.substr(0, ten.size()), ten);
  const std::string c10 = read(path("r10/convergence.csv"));
  EXPECT_EQ(read(path("r20/convergence.csv")).substr(0, c10.size()), c10);
}

TEST_F(Cli, RandomFractionShowsInProfiles) {
  const std::string s = small_scenario(8, 2000);
  ASSERT_EQ(run("simulate --quiet --scenario " + s +
                " --runs 1 --random-fraction 0.2 --out " + path("o")).code, 0);
  std::istringstream in(read(path("o/profiles.csv")));
  std::string line;
  int random = 0, total = 0;
  std::getline(in, line);
  while (std::getline(in, line)) {
    ++total;
    random += line.find(",Random,") != std::string::npos;
  }
  EXPECT_EQ(total, 2000);
  EXPECT_NEAR(random, 400, 3 * std::sqrt(2000 * 0.2 * 0.8));
}

TEST_F(Cli, CompareMinimalRowsMatch) {
  ASSERT_EQ(run("generate --lots 1 --capacity 20 --entries 2 --quiet -o " + path("m.json")).code, 0);
  ASSERT_EQ(run("compare --quiet --runs 2 --scenario " + path("m.json") + " --out " + path("o")).code, 0);
  std::istringstream in(read(path("o/comparison.csv")));
  std::string header, a, b, c;
  std::getline(in, header);
  std::getline(in, a);
  std::getline(in, b);
  std::getline(in, c);
  EXPECT_EQ(header, "method,mean_rerouting_min,total_failures");
  auto tail = [](const std::string& l) { return l.substr(l.find(',')); };
  EXPECT_EQ(tail(a), tail(b));
  EXPECT_EQ(tail(b), tail(c));
}

TEST_F(Cli, EveryCommandIsByteIdenticalOnRerun) {
  const std::string s = small_scenario();
  for (const std::string cmd : {"solve", "simulate --log", "compare"}) {
    for (const char* out : {"x", "y"}) {
      const Result r = run(cmd + " --quiet --runs 3 --seed 77 --scenario " + s + " --out " + path(out));
      ASSERT_EQ(r.code, 0) << cmd << ": " << r.output;
    }
    for (const auto& e : fs::directory_iterator(path("x"))) {
      const auto other = fs::path(path("y")) / e.path().filename();
      ASSERT_TRUE(fs::exists(other));
      EXPECT_EQ(read(e.path().string()), read(other.string())) << e.path();
    }
    fs::remove_all(path("x"));
    fs::remove_all(path("y"));
  }
}

TEST_F(Cli, OverridesChangeResults) {
  const std::string s = small_scenario();
  ASSERT_EQ(run("simulate --quiet --runs 2 --scenario " + s + " --out " + path("a")).code, 0);
  ASSERT_EQ(run("simulate --quiet --runs 2 --mix 0,0,1,0 --arrival-mode uniform --scenario " +
                s + " --out " + path("b")).code, 0);
  EXPECT_NE(read(path("a/rerouting.csv")), read(path("b/rerouting.csv")));
  EXPECT_EQ(read(path("b/profiles.csv")).find(",G1,"), std::string::npos);
}

TEST_F(Cli, ErrorsExitNonZero) {
  EXPECT_NE(run("").code, 0);
  EXPECT_NE(run("solve").code, 0);  // no scenario
  EXPECT_NE(run("solve --scenario " + path("missing.json")).code, 0);
  const std::string s = small_scenario();
  EXPECT_NE(run("simulate --runs 0 --scenario " + s).code, 0);
  EXPECT_NE(run("simulate --mix 1,0 --scenario " + s + " --out " + path("o")).code, 0);
  EXPECT_NE(run("simulate --arrival-mode sometimes --scenario " + s).code, 0);
  EXPECT_NE(run("generate --lots 5 --capacity 3 -o " + path("g.json")).code, 0);

  Scenario over = load_scenario(s);
  over.vehicle_count = 301;
  io::write_text(path("over.json"), serialize_scenario(over));
  const Result r = run("solve --scenario " + path("over.json") + " --out " + path("o"));
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.output.find("301 vehicles, 300 spaces"), std::string::npos) << r.output;
}

TEST_F(Cli, HelpListsFlags) {
  const Result r = run("--help");
  EXPECT_EQ(r.code, 0);
  for (const char* flag : {"--scenario", "--seed", "--runs", "--out", "--arrival-mode",
                           "--mix", "--random-fraction", "--quiet", "generate", "solve",
                           "simulate", "compare"}) {
    EXPECT_NE(r.output.find(flag), std::string::npos) << flag;
  }
}

}  // namespace
