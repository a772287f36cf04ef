#include <gtest/gtest.h>

#include <sstream>

#include "common.hpp"
#include "weq/cli.hpp"

using namespace weq;
using weq::testing::corpus_path;
using weq::testing::read_file;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_cmd(const std::string& command, const std::string& file, int max_len = 4, std::uint64_t seed = 1) {
  RunConfig cfg;
  cfg.command = command;
  cfg.input = corpus_path(file);
  cfg.max_len = max_len;
  cfg.seed = seed;
  std::ostringstream out, err;
  int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, SatExitCodes) {
  auto sat = run_cmd("sat", "fm_commute_a.weq");
  EXPECT_EQ(sat.code, 0);
  EXPECT_EQ(sat.out, "SAT\n");
  auto unsat = run_cmd("sat", "fm_xx_a.weq");
  EXPECT_EQ(unsat.code, 1);
  EXPECT_EQ(unsat.out, "UNSAT\n");
}

TEST(Cli, ClassifyFiniteSolutionSet) {
  auto r = run_cmd("classify", "fm_x_ab.weq", 6);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "finite\n");
}

TEST(Cli, EnumerateMatchesOracleBytes) {
  for (const char* f : {"fm_commute_a.weq", "fg_square.weq", "fp_z2z3_commute.weq", "fm_even.weq"}) {
    auto e = run_cmd("enumerate", f);
    auto o = run_cmd("oracle", f);
    EXPECT_EQ(e.code, 0) << f << e.err;
    EXPECT_EQ(e.out, o.out) << f;
  }
}

TEST(Cli, FixedSeedIsReproducible) {
  auto a = run_cmd("solve", "fg_word.weq", 6, 5);
  auto b = run_cmd("solve", "fg_word.weq", 6, 5);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty());
}

TEST(Cli, TraceReportsCounters) {
  auto r = run_cmd("trace", "fm_x_ab.weq", 3);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("# mode free-monoid"), std::string::npos);
  EXPECT_NE(r.out.find("forward failures 0, structural violations 0"), std::string::npos);
  EXPECT_NE(r.out.find("forward=ok"), std::string::npos);
  EXPECT_EQ(r.out.find("forward=FAIL"), std::string::npos);
}

TEST(Cli, ExportIsDot) {
  auto r = run_cmd("export", "fm_x_ab.weq", 3);
  EXPECT_EQ(r.out.rfind("digraph", 0), 0u);
}

TEST(Cli, BadConfigurationExitsTwo) {
  RunConfig cfg;
  cfg.command = "enumerate";
  cfg.kappa = 0;
  EXPECT_NE(validate(cfg), "");
  std::ostringstream out, err;
  EXPECT_EQ(run_text(cfg, read_file(corpus_path("fm_x_ab.weq")), out, err), 2);
  cfg.kappa = 100;
  cfg.format = "svg";
  EXPECT_EQ(run_text(cfg, "", out, err), 2);
  cfg.format = "text";
  cfg.command = "frobnicate";
  EXPECT_EQ(run_text(cfg, "", out, err), 2);
  cfg.command = "sat";
  EXPECT_EQ(run_text(cfg, "mode free-group\nvars X\neq X = q\n", out, err), 2);
  EXPECT_NE(err.str().find("error:"), std::string::npos);
  cfg.input = "/nonexistent/file.weq";
  EXPECT_EQ(run(cfg, out, err), 2);
}

TEST(Cli, ModeOverride) {
  RunConfig cfg;
  cfg.command = "oracle";
  cfg.max_len = 2;
  cfg.mode = "free-group";
  std::ostringstream out, err;
  EXPECT_EQ(run_text(cfg, "mode free-monoid\nfactor free-group a\nvars X\neq X a = a X\n", out, err), 0) << err.str();
  EXPECT_EQ(out.str(), "1\na\na'\naa\na'a'\n");
}
