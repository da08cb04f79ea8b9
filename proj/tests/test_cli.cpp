#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include "support/helpers.hpp"
#include "wum/formats.hpp"

#ifndef WUM_CLI_PATH
#error "WUM_CLI_PATH must point at the wum executable"
#endif

namespace {

int run(const std::string& args, const std::filesystem::path& log) {
  const std::string cmd = std::string(WUM_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) { return wum::io::read_file(p); }

}  // namespace

TEST(Cli, StagewiseCommandsChain) {
  testing_util::TempDir dir("cli");
  const auto d = dir.path().string();
  const auto log = dir / "out.txt";
  ASSERT_EQ(run("gen-fixture --kind corpus --seed 4 --output " + d + "/access.log", log), 0) << slurp(log);
  ASSERT_EQ(run("clean --input " + d + "/access.log --output " + d + "/c --strip-query", log), 0) << slurp(log);
  EXPECT_NE(slurp(log).find("kept\t"), std::string::npos);
  ASSERT_EQ(run("sessionize --input " + d + "/c/cleaned.tsv --output " + d + "/s --heuristic toh2 --beta-seconds 1200",
                log),
            0)
      << slurp(log);
  ASSERT_EQ(run("compare-heuristics --input " + d + "/c/cleaned.tsv --betas 300,1800 --output " + d + "/h.csv",
                log),
            0)
      << slurp(log);
  EXPECT_EQ(slurp(dir / "h.csv").substr(0, 38), "beta_seconds,toh1_sessions,toh2_sessio");
  ASSERT_EQ(run("features --input " + d + "/s/sessions.txt --url-map " + d + "/c/url_map.tsv --output " + d +
                    "/f --scheme binary --lb 1 --ub 6",
                log),
            0)
      << slurp(log);
  ASSERT_EQ(run("cluster --input " + d + "/f/matrix.txt --catalog " + d + "/f/catalog.tsv --rows " + d +
                    "/f/rows.tsv --output " + d + "/k --c 3 --q 1.5 --seed 9",
                log),
            0)
      << slurp(log);
  EXPECT_TRUE(std::filesystem::exists(dir / "k" / "model.json"));
  EXPECT_NE(slurp(dir / "k" / "profiles.txt").find("http://"), std::string::npos);
  ASSERT_EQ(run("sweep --input " + d + "/f/matrix.txt --output " + d + "/w --c-min 2 --c-max 4 --restarts 2", log),
            0)
      << slurp(log);
  EXPECT_EQ(slurp(dir / "w" / "validity.csv").substr(0, 6), "c,J,S\n");
  ASSERT_EQ(run("compare-weighting --input " + d + "/f/matrix.txt --output " + d +
                    "/cw --c-min 2 --c-max 4 --restarts 2 --q 1.5",
                log),
            0)
      << slurp(log);
  for (const char* name : {"validity_weighted.csv", "validity_unweighted.csv", "perf_index_vs_c.csv",
                           "validity_vs_c.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "cw" / name)) << name;
  }
}

TEST(Cli, PipelineWithConfigAndOverridesThenReport) {
  testing_util::TempDir dir("clipipe");
  const auto d = dir.path().string();
  const auto log = dir / "out.txt";
  ASSERT_EQ(run("gen-fixture --output " + d + "/access.log --seed 8", log), 0);
  wum::io::write_file(dir / "run.cfg", "c_min = 2\nc_max = 9\nrestarts = 2\nseed = 3\n");
  ASSERT_EQ(run("pipeline --config " + d + "/run.cfg --c-max 4 --input " + d + "/access.log --output " + d +
                    "/run",
                log),
            0)
      << slurp(log);
  EXPECT_NE(slurp(dir / "run" / "config.txt").find("c_max = 4"), std::string::npos);
  ASSERT_EQ(run("report --input " + d + "/run/run_report.json --output " + d + "/rep", log), 0) << slurp(log);
  for (const char* name : {"url_access_hist.csv", "url_session_support.csv", "session_size_hist.csv",
                           "perf_index_vs_c.csv", "validity_vs_c.csv", "summary.txt"}) {
    EXPECT_EQ(slurp(dir / "rep" / name), slurp(dir / "run" / name)) << name;
  }
}

TEST(Cli, ExitCodes) {
  testing_util::TempDir dir("codes");
  const auto d = dir.path().string();
  const auto log = dir / "out.txt";
  EXPECT_EQ(run("", log), 1);
  EXPECT_EQ(run("no-such-command", log), 1);
  EXPECT_EQ(run("--help", log), 0);
  EXPECT_EQ(run("clean --input " + d + "/missing.log --output " + d + "/c", log), 3);

  ASSERT_EQ(run("gen-fixture --output " + d + "/access.log", log), 0);
  EXPECT_EQ(run("pipeline --input " + d + "/access.log --output " + d + "/bad --lb 6 --ub 6", log), 1);
  EXPECT_NE(slurp(log).find("UB > LB"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(dir / "bad" / "cleaned.tsv"));

  EXPECT_EQ(run("pipeline --input " + d + "/access.log --output " + d + "/big --c-min 3000 --c-max 3001", log), 2);
  EXPECT_NE(slurp(dir / "big" / "FAILED").find("stage: cluster"), std::string::npos);

  EXPECT_EQ(run("pipeline --input " + d + "/nothere.log --output " + d + "/io", log), 3);
  EXPECT_TRUE(std::filesystem::exists(dir / "io" / "FAILED"));

  wum::io::write_file(dir / "bad.cfg", "mystery = 1\n");
  EXPECT_EQ(run("pipeline --config " + d + "/bad.cfg --input " + d + "/access.log --output " + d + "/x", log), 1);

  wum::io::write_file(dir / "matrix.txt", "2 3 binary\n1\t9:1\n");
  EXPECT_EQ(run("cluster --input " + d + "/matrix.txt --output " + d + "/k", log), 1);
  EXPECT_EQ(run("cluster --input " + d + "/matrix.txt --output " + d + "/k --q 1", log), 1);
}

TEST(Cli, CleaningFixtureCounts) {
  testing_util::TempDir dir("fixture");
  const auto d = dir.path().string();
  const auto log = dir / "out.txt";
  ASSERT_EQ(run("gen-fixture --kind cleaning --output " + d + "/fixture.log", log), 0);
  ASSERT_EQ(run("clean --input " + d + "/fixture.log --output " + d + "/c", log), 0);
  EXPECT_EQ(slurp(dir / "c" / "clean_stats.tsv"),
            "input_lines\t20\nparse_errors\t1\ndropped_suffix\t6\ndropped_robot\t3\ndropped_status\t0\nkept\t10\n");
}
