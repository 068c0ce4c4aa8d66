#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "cmremoval/graph.hpp"
#include "cmremoval/json_io.hpp"

namespace {

struct Result {
  int status = -1;
  std::string out;
};

Result run_cli(const std::string& args) {
  const std::string cmd = std::string(CMREMOVAL_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string cfg(const std::string& name) { return std::string(CMREMOVAL_CFG_DIR) + "/" + name; }

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cmremoval_cli_" + name);
}

}  // namespace

TEST(Cli, TheoryWritesFullPrecision) {
  auto r = run_cli("theory " + cfg("theory_cubic_uniform.json"));
  ASSERT_EQ(r.status, 0);
  auto j = cmr::Json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["eta"].get<double>(), 1.0 / 9.0);
  EXPECT_NEAR(j["rho"].get<double>(), 0.9 * (1.0 - 1.0 / 729.0), 1e-12);
  EXPECT_NEAR(j["e"].get<double>(), 1.21481481, 1e-8);
  EXPECT_NE(r.out.find("0.11111111111111"), std::string::npos);
}

TEST(Cli, TheoryWithDerivative) {
  auto r = run_cli("theory " + cfg("theory_derivative.json"));
  ASSERT_EQ(r.status, 0);
  auto j = cmr::Json::parse(r.out);
  EXPECT_LT(j["derivative"]["deta"].get<double>(), 0.0);
  EXPECT_GT(j["derivative"]["drho"].get<double>(), 0.0);
}

TEST(Cli, CriticalAlpha) {
  auto r = run_cli("critical-alpha " + cfg("critical_top.json"));
  ASSERT_EQ(r.status, 0);
  auto j = cmr::Json::parse(r.out);
  EXPECT_NEAR(j["alpha_c"].get<double>(), 1.0 / 6.0, 1e-6);
  EXPECT_EQ(j["mode"], "top");
}

TEST(Cli, SimulateIsReproducible) {
  auto a = run_cli("--threads 2 simulate " + cfg("simulate_cubic.json"));
  auto b = run_cli("simulate " + cfg("simulate_cubic.json"));
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("n,alpha,seed,K,v_giant,e_giant\n", 0), 0u);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 7);
}

TEST(Cli, OutFlag) {
  const auto path = temp_path("critical.json");
  std::filesystem::remove(path);
  auto r = run_cli("--out " + path.string() + " critical-alpha " + cfg("critical_top.json"));
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  EXPECT_NEAR(cmr::Json::parse(in)["alpha_c"].get<double>(), 1.0 / 6.0, 1e-6);
}

TEST(Cli, CompareAssertsOrdering) {
  auto r = run_cli("compare " + cfg("compare_modes.json"));
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("index,alpha,rho,e,v_mean,e_mean\n0,", 0), 0u);
}

TEST(Cli, DecomposeReplays) {
  auto r = run_cli("decompose " + cfg("decompose_pair.json"));
  ASSERT_EQ(r.status, 0);
  auto j = cmr::Json::parse(r.out);
  EXPECT_FALSE(j["transforms"].empty());
  EXPECT_LE(j["replay_error"].get<double>(), 1e-12);
  EXPECT_TRUE(j["rho_monotone"].get<bool>());
}

TEST(Cli, PagerankKillWithConsistencyCheck) {
  auto r = run_cli("pagerank-kill --c 0.85 --radius 2 --threshold 0.5 --consistency-sample 2000 " +
                   cfg("graph_mixed.json"));
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("n,alpha,seed,K,v_giant,e_giant\n5000,", 0), 0u);
  EXPECT_NE(run_cli("pagerank-kill " + cfg("graph_mixed.json")).status, 0);  // --threshold is required
}

TEST(Cli, LocalLimit) {
  auto r = run_cli("local-limit " + cfg("local_limit_threshold.json"));
  ASSERT_EQ(r.status, 0);
  auto j = cmr::Json::parse(r.out);
  EXPECT_GT(j["zeta"].get<double>(), 0.1);
  EXPECT_EQ(j["M"].get<int>(), 2000);
  EXPECT_EQ(j["samples"].get<int>(), 20000);
  EXPECT_TRUE(j["stderr"].contains("zeta"));
}

TEST(Cli, ComponentsDumpRoundTrip) {
  const auto path = temp_path("dump.txt");
  auto r = run_cli("components --dump " + path.string() + " " + cfg("components_top.json"));
  ASSERT_EQ(r.status, 0);
  std::ifstream in(path);
  auto g = cmr::read_dump(in);
  auto s = cmr::components(g);
  const auto row = r.out.substr(r.out.find('\n') + 1);
  EXPECT_EQ(row.rfind("2000,", 0), 0u);
  EXPECT_NEAR(std::stod(row.substr(5)), 0.1, 1e-12);
  EXPECT_NE(r.out.find("," + std::to_string(s.component_count) + "," + std::to_string(s.giant_vertices) + "," +
                       std::to_string(s.giant_edges) + "\n"),
            std::string::npos);
}

TEST(Cli, BadInputsFail) {
  const auto path = temp_path("bad.json");
  {
    std::ofstream os(path);
    os << R"({"p": {"1": 0.5, "3": 0.4}})";
  }
  EXPECT_EQ(run_cli("theory " + path.string()).status, 2);
  {
    std::ofstream os(path);
    os << "{not json";
  }
  EXPECT_EQ(run_cli("theory " + path.string()).status, 2);
  EXPECT_NE(run_cli("theory /nonexistent.json").status, 0);
  EXPECT_NE(run_cli("").status, 0);
}
