#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sfnet/experiment.hpp"
#include "sfnet/graph.hpp"

#ifndef SFNET_CLI_PATH
#error "SFNET_CLI_PATH must point at the sfnet executable"
#endif

namespace fs = std::filesystem;

namespace {

struct run_result {
  int code = -1;
  std::string out;
};

run_result run(const std::string& args) {
  const std::string cmd = std::string(SFNET_CLI_PATH) + " " + args + " 2>/dev/null";
  run_result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sfnet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenerateWritesEdgeList) {
  auto r = run("generate --n 100 --m 2 --gamma 2.5 --seed 4 -o " + path("g.txt"));
  ASSERT_EQ(r.code, 0);
  auto g = sfnet::parse_edge_list(read("g.txt"));
  EXPECT_EQ(g.node_count(), 100u);
  EXPECT_EQ(g.edge_count(), 3u + 2u * 97u);
  EXPECT_EQ(sfnet::to_edge_list(g), read("g.txt"));
  // stdout and file agree; same seed is reproducible
  EXPECT_EQ(run("generate --n 100 --m 2 --gamma 2.5 --seed 4").out, read("g.txt"));
  EXPECT_NE(run("generate --n 100 --m 2 --gamma 2.5 --seed 5").out, read("g.txt"));
}

TEST_F(Cli, AttackTrace) {
  write("k3.txt", "# nodes=3 edges=3\n0 1\n0 2\n1 2\n");
  auto r = run("attack " + path("k3.txt") + " --strategy degree");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "t,removed_node,lcc_size\n1,0,2\n2,1,1\n3,2,0\n");
  for (const char* s : {"betweenness", "bp"}) {
    auto t = run("attack " + path("k3.txt") + " --strategy " + s + " --bp-x 5");
    EXPECT_EQ(t.code, 0) << s;
    EXPECT_EQ(std::count(t.out.begin(), t.out.end(), '\n'), 4) << s;
  }
}

TEST_F(Cli, LoopsCsv) {
  write("c5.txt", "# nodes=5 edges=5\n0 1\n0 4\n1 2\n2 3\n3 4\n");
  auto r = run("loops " + path("c5.txt"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "l,count,probability\n5,5,1.000000\n# mean_l=5.000000 bridges=0\n");
  write("p4.txt", "# nodes=4 edges=3\n0 1\n1 2\n2 3\n");
  auto p = run("loops " + path("p4.txt"));
  EXPECT_EQ(p.code, 0);
  EXPECT_EQ(p.out, "l,count,probability\n# mean_l=nan bridges=3\n");
}

TEST_F(Cli, StatsJson) {
  write("star.txt", "# nodes=5 edges=4\n0 1\n0 2\n0 3\n0 4\n");
  auto r = run("stats " + path("star.txt"));
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("k_max"), 4);
  EXPECT_DOUBLE_EQ(j.at("mean_degree").get<double>(), 1.6);
  EXPECT_NEAR(j.at("variance").get<double>(), 1.44, 1e-12);
  EXPECT_EQ(j.at("histogram").size(), 2u);
}

TEST_F(Cli, ExperimentAndCellAgree) {
  write("cfg.json", R"({"n": 40, "gamma_start": 2.1, "gamma_stop": 2.3, "realizations": 2})");
  auto r = run("--config " + path("cfg.json") + " --out " + path("out") +
               " --seed 9 --threads 2 experiment --dump-cells -q");
  ASSERT_EQ(r.code, 0);
  const std::string cells = read("out/cells.csv");
  auto snapshot = nlohmann::json::parse(read("out/config.json"));
  EXPECT_EQ(snapshot.at("base_seed"), 9);
  EXPECT_EQ(snapshot.at("n"), 40);
  EXPECT_EQ(snapshot.at("threads"), 2);

  auto c = run("--config " + path("cfg.json") + " --seed 9 cell --gamma 2.2 --realization 1");
  ASSERT_EQ(c.code, 0);
  const std::string header = sfnet::cells_header();
  ASSERT_EQ(c.out.rfind(header, 0), 0u);
  const std::string row = c.out.substr(header.size());
  EXPECT_NE(cells.find(row), std::string::npos) << row;

  auto by_index = run("--config " + path("cfg.json") + " --seed 9 cell --gamma-index 1 --realization 1");
  EXPECT_EQ(by_index.out, c.out);
}

TEST_F(Cli, FlagsOverrideConfigFile) {
  write("cfg.json", R"({"n": 40, "gamma_start": 3.0, "gamma_stop": 3.0, "realizations": 1})");
  auto r = run("--config " + path("cfg.json") + " --out " + path("out") +
               " experiment --n 30 --attacks degree,bp -q");
  ASSERT_EQ(r.code, 0);
  auto snapshot = nlohmann::json::parse(read("out/config.json"));
  EXPECT_EQ(snapshot.at("n"), 30);
  EXPECT_EQ(snapshot.at("attacks"), nlohmann::json({"degree", "bp"}));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "curves_bp_3.0.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "out" / "curves_betweenness_3.0.csv"));
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("bogus").code, 2);
  EXPECT_EQ(run("generate --gamma 1.5").code, 2);
  EXPECT_EQ(run("generate --n notanumber").code, 2);
  EXPECT_EQ(run("--config " + path("nope.json") + " experiment").code, 2);
  write("bad.json", "{ broken");
  EXPECT_EQ(run("--config " + path("bad.json") + " experiment -q").code, 2);
  EXPECT_EQ(run("experiment --gamma-step 0 -q").code, 2);
  EXPECT_EQ(run("experiment --attacks random -q").code, 2);
  EXPECT_EQ(run("attack " + path("missing.txt")).code, 3);
  write("garbage.txt", "hello\n");
  EXPECT_EQ(run("loops " + path("garbage.txt")).code, 3);
  write("g.txt", "# nodes=2 edges=1\n0 1\n");
  EXPECT_EQ(run("attack " + path("g.txt") + " --bp-damping 2").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}
