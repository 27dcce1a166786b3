#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fclock/cli.hpp"
#include "fclock/format.hpp"

namespace fs = std::filesystem;
using fclock::cli::kExitOk;
using fclock::cli::kExitUsage;
using fclock::cli::kExitValidation;

namespace {

const std::string kData = FCLOCK_TEST_DATA;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = fclock::cli::main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fclock_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, ValidateChainReportsNoCyclesAndWritesNothing) {
  const auto r = cli({"validate", "--scenario", kData + "/chain.scn"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("0 cycles"), std::string::npos);
  EXPECT_TRUE(fs::is_empty(dir_));
}

TEST_F(CliTest, ValidateReportsCyclesSenAndSuperluminal) {
  const auto r = cli({"validate", "--scenario", kData + "/feedback.scn"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("1 cycles\ncycle A B C\n"), std::string::npos);
  EXPECT_NE(r.out.find("sen main lifetime"), std::string::npos);
  EXPECT_NE(r.out.find("superluminal cd ratio 20"), std::string::npos);
}

TEST_F(CliTest, ValidateFailureNamesLine) {
  std::ofstream(dir_ / "bad.scn") << "units mode=natural\nclock id=A gamma=0\n";
  const auto r = cli({"validate", "--scenario", (dir_ / "bad.scn").string()});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  EXPECT_NE(r.err.find("gamma must be positive"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({"run", "--scenario", kData + "/chain.scn"}).code, kExitUsage);
  const auto bad_mode = cli({"run", "--scenario", kData + "/chain.scn", "--out", dir_.string(), "--mode", "fast"});
  EXPECT_EQ(bad_mode.code, kExitUsage);
  EXPECT_NE(bad_mode.err.find("--mode"), std::string::npos);
  const auto missing = cli({"validate", "--scenario", (dir_ / "nope.scn").string()});
  EXPECT_EQ(missing.code, kExitUsage);
  EXPECT_NE(missing.err.find("--scenario"), std::string::npos);
  EXPECT_EQ(cli({"bigbang", "--k", "0"}).code, kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST_F(CliTest, RunWritesAllOutputsDeterministically) {
  for (const auto* mode : {"det", "stoch"}) {
    const auto a = dir_ / (std::string(mode) + "-a");
    const auto b = dir_ / (std::string(mode) + "-b");
    for (const auto& d : {a, b}) {
      const auto r = cli({"run", "--scenario", kData + "/feedback.scn", "--mode", mode, "--seed", "0", "--out", d.string()});
      ASSERT_EQ(r.code, kExitOk) << r.err;
    }
    for (const auto* f : {"events.tsv", "timeline.tsv", "arrows.tsv", "summary.txt"}) {
      ASSERT_TRUE(fs::exists(a / f));
      EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
  }
  EXPECT_NE(slurp(dir_ / "det-a" / "events.tsv"), slurp(dir_ / "stoch-a" / "events.tsv"));
}

TEST_F(CliTest, FlagsOverrideScenario) {
  const auto r = cli({"run", "--scenario", kData + "/feedback.scn", "--mode", "det", "--max-events", "7", "--seed",
                      "42", "--out", dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto events = slurp(dir_ / "events.tsv");
  EXPECT_NE(events.find("seed=42 mode=deterministic units=natural"), std::string::npos);
  EXPECT_NE(events.find("termination=max-events"), std::string::npos);
  EXPECT_NE(events.find("\n6\t"), std::string::npos);
  EXPECT_EQ(events.find("\n7\t"), std::string::npos);

  const auto h = cli({"run", "--scenario", kData + "/chain.scn", "--until", "1.5", "--units", "si", "--out",
                      (dir_ / "h").string()});
  ASSERT_EQ(h.code, kExitOk) << h.err;
  EXPECT_NE(slurp(dir_ / "h" / "events.tsv").find("units=si"), std::string::npos);
}

TEST_F(CliTest, Replicas) {
  const auto r = cli({"run", "--scenario", kData + "/feedback.scn", "--replicas", "3", "--seed", "10", "--out",
                      dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto table = slurp(dir_ / "replicas.tsv");
  EXPECT_EQ(table.rfind("seed\tevents\ttermination\tviolations\n10\t", 0), 0u);
  EXPECT_NE(table.find("\n11\t"), std::string::npos);
  EXPECT_NE(table.find("\n12\t"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "seed-12" / "summary.txt"));
  const auto single = dir_ / "single";
  ASSERT_EQ(cli({"run", "--scenario", kData + "/feedback.scn", "--seed", "11", "--out", single.string()}).code, kExitOk);
  EXPECT_EQ(slurp(single / "events.tsv"), slurp(dir_ / "seed-11" / "events.tsv"));
}

TEST_F(CliTest, BigBangThenRun) {
  const auto scn = dir_ / "bb.scn";
  ASSERT_EQ(cli({"bigbang", "--k", "4", "--units", "si", "--out", scn.string()}).code, kExitOk);
  const auto r = cli({"run", "--scenario", scn.string(), "--out", (dir_ / "out").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto events = slurp(dir_ / "out" / "events.tsv");
  EXPECT_NE(events.find("\t" + fclock::format_real(5.39056e-44) + "\tdecay\tU\t"), std::string::npos);
  const auto printed = cli({"bigbang", "--k", "4", "--units", "si"});
  EXPECT_EQ(printed.out, slurp(scn));
}

TEST_F(CliTest, Unify) {
  const auto r = cli({"unify", "--strong", "1e-23", "--em", "2", "--weak", "4", "--grav", "8", "--tau-u", "8"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("em\t2\t4\t8\n"), std::string::npos);
  EXPECT_NE(r.out.find("weak\t4\t2\t8\n"), std::string::npos);
  EXPECT_NE(r.out.find("grav\t8\t1\t8\n"), std::string::npos);
  const auto bad = cli({"unify", "--strong", "0", "--em", "2", "--weak", "4", "--grav", "8", "--tau-u", "8"});
  EXPECT_EQ(bad.code, kExitValidation);
  EXPECT_NE(bad.err.find("--strong"), std::string::npos);
  EXPECT_EQ(cli({"unify", "--strong", "1"}).code, kExitUsage);
}
