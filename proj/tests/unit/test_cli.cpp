#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/cli.hpp"

namespace {

namespace fs = std::filesystem;
using pcyl::cli::run;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir() {
  const fs::path p = fs::temp_directory_path() / "pcyl_cli_tests";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

TEST(Cli, HelpAndExact) {
  EXPECT_EQ(call({"--help"}).code, 0);
  EXPECT_EQ(call({"experiment", "vacant-reach", "--help"}).code, 0);
  const Result r = call({"mu", "--d", "3", "--r", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("estimate,mu_exact,3,0,1,0,0,12.56637061"), std::string::npos) << r.out;
}

TEST(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"mu", "--bogus"}).code, 2);
  EXPECT_EQ(call({"mu", "--mode", "mc"}).code, 2);  // stochastic mode without a seed
  EXPECT_EQ(call({"sample", "--d", "3"}).code, 2);
  EXPECT_EQ(call({"experiment", "nope", "--seed", "1"}).code, 2);
  EXPECT_EQ(call({"mu", "--d", "11"}).code, 2);
  const fs::path cfg = temp_dir() / "bad.cfg";
  std::ofstream(cfg) << "d=3\nnot_an_option=1\n";
  EXPECT_EQ(call({"--config", cfg.string(), "mu"}).code, 2);
  std::ofstream(cfg) << "no equals sign\n";
  EXPECT_EQ(call({"--config", cfg.string(), "mu"}).code, 2);
}

TEST(Cli, PreconditionErrorsExitThree) {
  EXPECT_EQ(call({"slice", "--eps", "0.7", "--seed", "1", "--out", (temp_dir() / "x").string()}).code, 3);
  EXPECT_EQ(call({"check", "--in", (temp_dir() / "missing.txt").string()}).code, 3);
  EXPECT_EQ(call({"mu", "--mode", "joint", "--alpha", "3", "--seed", "1"}).code, 3);
  EXPECT_EQ(call({"experiment", "covariance-decay", "--separations", "1", "--seed", "1"}).code, 3);
}

TEST(Cli, ParseErrorInFileExitsTwo) {
  const fs::path p = temp_dir() / "garbage.txt";
  std::ofstream(p) << "hello\n";
  EXPECT_EQ(call({"check", "--in", p.string()}).code, 2);
}

TEST(Cli, SampleCheckDescribe) {
  const fs::path p = temp_dir() / "lines.txt";
  ASSERT_EQ(call({"sample", "--d", "3", "--R", "3", "--u", "1", "--seed", "4", "--out", p.string()}).code, 0);
  const Result c = call({"check", "--in", p.string()});
  EXPECT_EQ(c.code, 0);
  EXPECT_NE(c.out.find("violations=0"), std::string::npos);
  const Result d = call({"describe", "--lines", p.string()});
  EXPECT_EQ(d.code, 0);
  EXPECT_NE(d.out.find("master_seed=4"), std::string::npos);
  std::ofstream(p, std::ios::app) << "3 0 1 0 9 0 0\n";
  EXPECT_NE(call({"check", "--in", p.string()}).code, 0);
}

TEST(Cli, ConfigFileAndPrecedence) {
  const fs::path cfg = temp_dir() / "ok.cfg";
  std::ofstream(cfg) << "# comment\nd = 4\nu=0.5\nR=2\nthreads=2\n";
  const Result a = call({"--config", cfg.string(), "sample", "--seed", "3"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("d=4 u=0.5 R=2"), std::string::npos);
  const Result b = call({"--config", cfg.string(), "sample", "--seed", "3", "--d", "3"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(b.out.find("d=3 u=0.5 R=2"), std::string::npos);
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  const std::vector<std::string> cmd = {"experiment", "occupied-crossing", "--d", "3", "--u", "0.3",
                                        "--scales", "10,14", "--reps", "30", "--seed", "2"};
  auto with = [&](const char* t) {
    std::vector<std::string> v{"--threads", t};
    v.insert(v.end(), cmd.begin(), cmd.end());
    return call(v);
  };
  const Result a = with("1"), b = with("3");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, SliceFiles) {
  const fs::path prefix = temp_dir() / "slice";
  const Result r = call({"slice", "--d", "3", "--u", "0.5", "--half", "4", "--eps", "0.1", "--seed", "5",
                         "--out", prefix.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string pgm = slurp(prefix.string() + ".pgm");
  EXPECT_EQ(pgm.rfind("P5\n80 80\n1\n", 0), 0u);
  EXPECT_EQ(pgm.size(), std::string("P5\n80 80\n1\n").size() + 6400);
  const Result d = call({"describe", "--header", prefix.string() + ".hdr"});
  EXPECT_NE(d.out.find("epsilon=0.1"), std::string::npos);
}

TEST(Cli, GoldenReports) {
  const fs::path golden = PCYL_GOLDEN_DIR;
  const Result a = call({"mu", "--mode", "joint", "--estimator", "two-point", "--n", "20000", "--seed", "1"});
  EXPECT_EQ(a.out, slurp(golden / "mu_joint.csv"));
  const Result b = call({"experiment", "mu-scaling", "--n", "20000", "--seed", "1"});
  EXPECT_EQ(b.out, slurp(golden / "mu_scaling.csv"));
  const Result c = call({"describe", "--csv", (golden / "mu_scaling.csv").string()});
  EXPECT_NE(c.out.find("kind.estimate=4"), std::string::npos) << c.out;
}

}  // namespace
