#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gallerysheaf/cli.hpp"

using namespace gallerysheaf;

namespace {

struct Outcome {
  int status;
  std::string out, err;
};

Outcome run_job(const std::string& text) {
  std::ostringstream out, err;
  int status = kExitConfig;
  try {
    status = run(parse_config(text), out, err);
  } catch (const ConfigError& e) {
    err << e.what();
  }
  return {status, out.str(), err.str()};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) { return std::filesystem::temp_directory_path() / ("gallerysheaf_cli_" + name); }

// Runs the built binary; skipped when the test runs outside ctest.
int run_binary(const std::string& args) {
  const char* exe = std::getenv("GALLERYSHEAF_CLI");
  if (!exe) return -1;
  const int rc = std::system((std::string(exe) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Config, ParsesKeyValueLines) {
  const auto c = parse_config("# job\ntype = B\nrank=2\nword=1,2,1\ncmd=decompose\nmax-degree=3\nseed=7  # trailing\n");
  EXPECT_EQ(c.type, "B");
  EXPECT_EQ(c.rank, 2);
  EXPECT_EQ(c.word, "1,2,1");
  EXPECT_EQ(c.command, "decompose");
  EXPECT_EQ(c.max_degree, 3);
  EXPECT_EQ(c.seed, 7u);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse_config("colour=blue\n"), ConfigError);
  EXPECT_THROW(parse_config("rank=two\n"), ConfigError);
  EXPECT_THROW(parse_config("seed=-1\n"), ConfigError);
  EXPECT_THROW(parse_config("just words\n"), ConfigError);
}

TEST(Run, GalleriesTable) {
  const auto r = run_job("type=A\nrank=1\nword=1,1\ncmd=galleries\n");
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_EQ(r.out,
            "word (1,1) in A1, r = 2\n"
            "4 galleries\n"
            "gallery J               D               end\n"
            "bb      {}              {}              e\n"
            "bc      {2}             {}              s1\n"
            "cc      {1}             {2}             e\n"
            "cb      {1,2}           {2}             s1\n");
}

TEST(Run, DecomposeReport) {
  const auto r = run_job("type=A\nrank=2\nword=1,2,1\ncmd=decompose\n");
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_NE(r.out.find("decomposition: B(w0) ⊕ B(s1)⟨1⟩\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("residual: zero"), std::string::npos);
}

TEST(Run, PropertyCommandsPass) {
  for (const char* cmd : {"stats", "sl2", "gkm-check", "fibre-basis", "sheaf", "purity"}) {
    const std::string type = std::string(cmd) == "sl2" ? "type=A\nrank=1\nword=1,1,1\n" : "type=B\nrank=2\nword=1,2,1\n";
    const auto r = run_job(type + "cmd=" + cmd + "\n");
    EXPECT_EQ(r.status, kExitOk) << cmd << "\n" << r.out << r.err;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << cmd;
  }
}

TEST(Run, SheafSummary) {
  const auto r = run_job("type=A\nrank=2\nword=1,2\ncmd=sheaf\n");
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_NE(r.out.find("support: e s1 s2 s1s2\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("global sections: rank 4, 1q^0 + 2q^1 + 1q^2\n"), std::string::npos) << r.out;
}

TEST(Run, OutputIsDeterministic) {
  const std::string job = "type=A\nrank=2\nword=1,2,1,2\ncmd=gkm-check\nseed=11\n";
  const auto a = run_job(job), b = run_job(job);
  EXPECT_EQ(a.status, kExitOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("seed: 11"), std::string::npos);
}

TEST(Run, ConfigurationErrorsExitTwo) {
  EXPECT_EQ(run_job("cmd=dance\n").status, kExitConfig);
  EXPECT_EQ(run_job("type=A\nrank=2\nword=1,3\ncmd=stats\n").status, kExitConfig);
  EXPECT_EQ(run_job("type=E\nrank=8\nword=1\ncmd=stats\n").status, kExitConfig);
  EXPECT_EQ(run_job("type=B\nrank=2\nword=1,2\ncmd=sl2\n").status, kExitConfig);
  EXPECT_EQ(run_job("type=A\nrank=1\nword=1,1,1,1,1,1,1,1,1\ncmd=sl2\n").status, kExitConfig);
  EXPECT_EQ(run_job("type=A\nrank=1\nword=1,1,1,1,1,1,1,1,1,1,1,1,1\ncmd=sheaf\n").status, kExitConfig);
  EXPECT_EQ(run_job("type=A\nrank=1\nword=1\ncmd=selftest\nscope=some\n").status, kExitConfig);
  const auto r = run_job("type=A\nrank=2\nword=1,3\ncmd=stats\n");
  EXPECT_NE(r.err.find("configuration error"), std::string::npos);
}

TEST(Run, EnumerationAllowsLongerWordsThanSheaves) {
  const auto r = run_job("type=A\nrank=1\nword=1,1,1,1,1,1,1,1,1,1,1,1,1\ncmd=stats\n");
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_NE(r.out.find("galleries: 8192"), std::string::npos);
}

TEST(Run, QuickSelftestPasses) {
  const auto r = run_job("type=A\nrank=1\nword=1\ncmd=selftest\nscope=quick\n");
  EXPECT_EQ(r.status, kExitOk) << r.out;
  std::size_t passes = 0;
  for (std::size_t p = r.out.find("PASS criterion"); p != std::string::npos; p = r.out.find("PASS criterion", p + 1)) ++passes;
  EXPECT_EQ(passes, 8u);
  EXPECT_EQ(r.out.find(" s]"), std::string::npos);  // no timings in the deterministic report
}

TEST(Binary, FlagsConfigFilesAndOutputs) {
  if (!std::getenv("GALLERYSHEAF_CLI")) GTEST_SKIP() << "GALLERYSHEAF_CLI not set";
  const auto cfg = scratch("job.cfg"), out = scratch("report.txt"), dot = scratch("graph.dot");
  {
    std::ofstream f(cfg);
    f << "type=A\nrank=2\nword=1,2,1\ncmd=galleries\n";
  }
  EXPECT_EQ(run_binary("--config " + cfg.string() + " --cmd decompose --out " + out.string()), kExitOk);
  EXPECT_NE(read_file(out).find("B(w0) ⊕ B(s1)⟨1⟩"), std::string::npos);
  EXPECT_EQ(run_binary("--type A --rank 2 --word 1,2,1 --cmd sheaf --graph " + dot.string()), kExitOk);
  const std::string g = read_file(dot);
  EXPECT_EQ(g.rfind("digraph bruhat {", 0), 0u);
  EXPECT_NE(g.find("label=\"e\\nrank 2\""), std::string::npos);
  EXPECT_EQ(run_binary("--type A --rank 2 --word 1,5 --cmd stats"), kExitConfig);
  EXPECT_EQ(run_binary("--cmd nonsense"), kExitConfig);
  EXPECT_EQ(run_binary("--type A --rank 1 --word 1"), kExitConfig);
  EXPECT_EQ(run_binary("--config /nonexistent/job.cfg --cmd stats"), kExitConfig);
  EXPECT_EQ(run_binary("--type A --rank 1 --word 1 --cmd selftest --scope quick"), kExitOk);
  std::filesystem::remove(cfg);
  std::filesystem::remove(out);
  std::filesystem::remove(dot);
}
