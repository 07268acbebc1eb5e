// Runs the fcdl binary as a subprocess.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <string>

#include "test_support.hpp"

namespace {

using fcdl::testing::read_file;
using fcdl::testing::source_path;

struct Run {
  int code;
  std::string err;
};

Run run(const std::string& args) {
  auto dir = std::filesystem::temp_directory_path();
  auto err_path = dir / ("fcdl_cli_err_" + std::to_string(::getpid()));
  std::string cmd = std::string(FCDL_CLI) + " " + args + " >/dev/null 2>" + err_path.string();
  int status = std::system(cmd.c_str());
  Run r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_file(err_path)};
  std::filesystem::remove(err_path);
  return r;
}

std::string sample(const std::string& rel) { return source_path("data/sample/" + rel).string(); }

TEST(Cli, BuildMatchesGoldenInEveryFormat) {
  auto dir = fcdl::testing::scratch_dir("cli");
  for (std::string fmt : {"json", "graphml", "dot"}) {
    auto out = (dir / ("g." + fmt)).string();
    auto r = run("build --text " + sample("requirement.txt") + " --dl-base " + sample("leaves.json") +
                 " --delta 0.95 --tau 0.8 --format " + fmt + " --out " + out);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(read_file(out), read_file(source_path("tests/golden/graph." + fmt))) << fmt;
  }
  std::filesystem::remove_all(dir);
}

TEST(Cli, ExportConvertsStoredGraph) {
  auto dir = fcdl::testing::scratch_dir("cli_export");
  auto out = (dir / "g.graphml").string();
  auto r = run("export " + source_path("tests/golden/graph.json").string() + " --format graphml --out " + out);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_file(out), read_file(source_path("tests/golden/graph.graphml")));
  std::filesystem::remove_all(dir);
}

TEST(Cli, MissingFileIsDataError) {
  auto r = run("build --text /nonexistent/req.txt --dl-base " + sample("leaves.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("fcdl: IoError:", 0), 0u) << r.err;
}

TEST(Cli, MalformedBaseIsParseError) {
  auto dir = fcdl::testing::scratch_dir("cli_bad");
  { std::ofstream(dir / "bad.json") << "[{"; }
  auto r = run("build --text " + sample("requirement.txt") + " --dl-base " + (dir / "bad.json").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("fcdl: ParseError:", 0), 0u) << r.err;
  std::filesystem::remove_all(dir);
}

TEST(Cli, UsageErrors) {
  auto base = " --text " + sample("requirement.txt") + " --dl-base " + sample("leaves.json");
  EXPECT_EQ(run("build" + base + " --format xml").code, 2);
  EXPECT_EQ(run("build" + base + " --delta abc").code, 2);
  EXPECT_EQ(run("build --text x").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("build" + base + " --format xml").err.rfind("fcdl: UsageError:", 0), 0u);
}

TEST(Cli, OutOfRangeParameterIsUsageError) {
  auto r = run("build --text " + sample("requirement.txt") + " --dl-base " + sample("leaves.json") + " --tau 1.5");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("fcdl: UsageError:", 0), 0u) << r.err;
}

TEST(Cli, EmptyTextIsDataError) {
  auto dir = fcdl::testing::scratch_dir("cli_empty");
  { std::ofstream(dir / "t.txt") << "  \n"; }
  auto r = run("build --text " + (dir / "t.txt").string() + " --dl-base " + sample("leaves.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("fcdl: EmptyText:", 0), 0u) << r.err;
  std::filesystem::remove_all(dir);
}

}  // namespace
