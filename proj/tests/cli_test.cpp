#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "chromplane/cnf.hpp"
#include "chromplane/coloring.hpp"

namespace chromplane {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
  std::map<std::string, std::string> fields;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " CHROMPLANE_CLI " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::istringstream is(r.out);
  std::string line;
  while (std::getline(is, line)) {
    const auto colon = line.find(": ");
    if (colon != std::string::npos) r.fields[line.substr(0, colon)] = line.substr(colon + 2);
  }
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("chromplane_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(Cli, BuildIsByteIdentical) {
  for (const char* fmt : {"lattice", "general", "edges"}) {
    ASSERT_EQ(run(std::string("build G --format ") + fmt + " --out " + path("a")).code, 0);
    ASSERT_EQ(run(std::string("build G --format ") + fmt + " --out " + path("b")).code, 0);
    EXPECT_EQ(slurp(path("a")), slurp(path("b"))) << fmt;
  }
}

TEST_F(Cli, BuildKReportsCounts) {
  auto r = run("build K --format edges --out " + path("k.edges"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.fields["vertices"], "426");
  EXPECT_EQ(r.fields["unit_edges"], "2009");
  EXPECT_EQ(r.fields["distance2_edges"], "892");
  std::ifstream is(path("k.edges"));
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "426 2009 892");
  EXPECT_EQ(run("build K --format lattice --out " + path("k.lat")).code, 2);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("color G --shard 3/3").code, 2);
  EXPECT_EQ(run("color G --shard 1").code, 2);
  EXPECT_EQ(run("color Q").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("color G --resume").code, 2);
}

TEST_F(Cli, ExportCnfHeaderAndDeterminism) {
  ASSERT_EQ(run("export-cnf K --out " + path("a.cnf")).code, 0);
  ASSERT_EQ(run("export-cnf K --out " + path("b.cnf")).code, 0);
  const std::string a = slurp(path("a.cnf"));
  EXPECT_EQ(a, slurp(path("b.cnf")));
  EXPECT_NE(a.find("\np cnf 2130 "), std::string::npos);
}

TEST_F(Cli, EnvironmentMirrorsFlagsAndFlagsWin) {
  ASSERT_EQ(run("export-cnf G --out " + path("env.cnf"), "CHROMPLANE_K=4").code, 0);
  EXPECT_NE(slurp(path("env.cnf")).find("\np cnf 820 "), std::string::npos);
  ASSERT_EQ(run("export-cnf G --k 5 --out " + path("flag.cnf"), "CHROMPLANE_K=4").code, 0);
  EXPECT_NE(slurp(path("flag.cnf")).find("\np cnf 1025 "), std::string::npos);
}

TEST_F(Cli, CheckModelRejectsMonochromatic) {
  TwoDistGraph g = build_G();
  std::ofstream os(path("mono.model"));
  CanonicalColoring mono{std::vector<std::uint8_t>(g.num_vertices(), 0)};
  os << "s SATISFIABLE\nv";
  for (int lit : encode_coloring(mono, 5)) os << ' ' << lit;
  os << " 0\n";
  os.close();
  EXPECT_EQ(run("check-model G " + path("mono.model")).code, 1);
  std::ofstream bad(path("bad.model"));
  bad << "v 1 2 x\n";
  bad.close();
  EXPECT_NE(run("check-model G " + path("bad.model")).code, 0);
  EXPECT_EQ(run("check-model G " + path("missing.model")).code, 3);
}

TEST_F(Cli, FaultInjectionFlipsVerdict) {
  for (const char* f : {"drop-vertex", "perturb-coordinate", "remove-edge"}) {
    auto r = run(std::string("verify --inject-fault ") + f);
    EXPECT_EQ(r.code, 1) << f;
    EXPECT_EQ(r.fields["verdict"], "FAIL") << f;
    EXPECT_FALSE(r.fields["first_failure"].empty()) << f;
  }
  EXPECT_EQ(run("verify --inject-fault nonsense").code, 2);
}

using CliLong = Cli;

TEST_F(CliLong, InterruptedRunExitsFourAndResumes) {
  const std::string cp = path("g.ckpt");
  auto first = run("color G --threads 1 --node-limit 300000 --checkpoint " + cp);
  ASSERT_EQ(first.code, 4) << first.out;
  EXPECT_EQ(first.fields["status"], "interrupted");
  ASSERT_TRUE(fs::exists(cp));
  auto rest = run("color G --threads 1 --resume --checkpoint " + cp + " --out " + path("g.txt"));
  ASSERT_EQ(rest.code, 0) << rest.out;
  EXPECT_EQ(rest.fields["count"], "18");
}

TEST_F(CliLong, ShardsOfGSumTo18) {
  std::uint64_t total = 0;
  std::vector<CanonicalColoring> all;
  for (int i = 0; i < 3; ++i) {
    const std::string out = path("g" + std::to_string(i) + ".txt");
    auto r = run("color G --shard " + std::to_string(i) + "/3 --out " + out);
    ASSERT_EQ(r.code, 0) << r.out;
    total += std::stoull(r.fields["count"]);
    std::ifstream is(out);
    auto f = read_colorings(is);
    all.insert(all.end(), f.colorings.begin(), f.colorings.end());
  }
  EXPECT_EQ(total, 18u);
  std::sort(all.begin(), all.end());
  EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());

  // A proper coloring from the run is accepted as a SAT model.
  std::ofstream os(path("good.model"));
  for (int lit : encode_coloring(all.front(), 5)) os << lit << ' ';
  os << "0\n";
  os.close();
  EXPECT_EQ(run("check-model G " + path("good.model")).code, 0);
}

}  // namespace
}  // namespace chromplane
