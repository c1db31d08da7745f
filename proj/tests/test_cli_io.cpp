#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "fbo2d/cli.hpp"
#include "fbo2d/random_fields.hpp"

using namespace fbo2d;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(FBO2D_CLI_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 512> buf{};
  while (fgets(buf.data(), buf.size(), p)) r.output += buf.data();
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("fbo2d_cli_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const auto p = dir / "config.json";
  std::ofstream(p) << body;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::string& header) {
  std::ifstream is(p);
  std::getline(is, header);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    std::vector<double> r;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) r.push_back(std::stod(cell));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST(Snapshot, RoundTripIsBitExact) {
  GridSpec g(32, 16, 7.5, 3.25);
  const auto u = inverse_transform(random_band_limited(g, 4, {5, 5}));
  const auto d = scratch("snap");
  write_snapshot((d / "u.fbo2").string(), {u, 0.625, 0.3});
  const auto back = read_snapshot((d / "u.fbo2").string());
  EXPECT_EQ(back.field.grid, g);
  EXPECT_EQ(back.t, 0.625);
  EXPECT_EQ(back.alpha, 0.3);
  ASSERT_EQ(back.field.values.size(), u.values.size());
  EXPECT_EQ(std::memcmp(back.field.values.data(), u.values.data(), u.values.size() * sizeof(double)), 0);
}

TEST(Cli, EmptyConfigExitsOne) {
  const auto d = scratch("empty");
  const auto r = run_cli("simulate --config " + write_config(d, "{}").string() + " --out " + (d / "o").string());
  EXPECT_EQ(r.code, 1);
  const auto r2 = run_cli("simulate --config " + write_config(d, "").string() + " --out " + (d / "o").string());
  EXPECT_EQ(r2.code, 1);
}

TEST(Cli, InadmissibleEpsNamesBound) {
  const auto d = scratch("eps");
  const auto cfg = write_config(d, R"({"experiment": "illposed", "alpha": 0.5, "eps": 0.3})");
  const auto r = run_cli("illposed --config " + cfg.string() + " --out " + (d / "o").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("eps"), std::string::npos);
  EXPECT_NE(r.output.find("8/15 - 7*alpha/15"), std::string::npos);
}

TEST(Cli, RangeErrorsNameTheKey) {
  const auto d = scratch("range");
  auto r = run_cli("simulate --config " +
                   write_config(d, R"({"experiment": "simulate", "alpha": 1.5})").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("'alpha'"), std::string::npos);
  r = run_cli("simulate --config " + write_config(d, R"({"experiment": "simulate", "nx": 48})").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("'nx'"), std::string::npos);
  r = run_cli("strichartz --config " + write_config(d, R"({"experiment": "strichartz", "ensemble": 10})").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("'ensemble'"), std::string::npos);
  r = run_cli("simulate --config " + write_config(d, R"({"experiment": "simulate", "dtt": 0.1})").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("'dtt'"), std::string::npos);
  r = run_cli("decay --config " + write_config(d, R"({"experiment": "simulate"})").string());
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, UnknownExperimentExitsOne) {
  const auto d = scratch("unknown");
  const auto r = run_cli("teleport --config " + write_config(d, R"({"experiment": "teleport"})").string());
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, SimulateCsvTimeMonotoneMeanFlat) {
  const auto d = scratch("sim");
  const auto cfg = write_config(
      d, R"({"experiment": "simulate", "nx": 64, "ny": 64, "alpha": 1.0, "T": 1.0, "dt": 0.02, "write_snapshots": true})");
  const auto r = run_cli("simulate --config " + cfg.string() + " --out " + (d / "o").string());
  ASSERT_EQ(r.code, 0) << r.output;
  std::string header;
  const auto rows = read_csv(d / "o" / "simulate.csv", header);
  EXPECT_EQ(header, "t,integral,l2,linf,grad_linf,hs");
  ASSERT_EQ(rows.size(), 51u);
  EXPECT_EQ(rows.front()[0], 0.0);
  EXPECT_EQ(rows.back()[0], 1.0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GT(rows[i][0], rows[i - 1][0]);
    EXPECT_LE(std::abs(rows[i][1] - rows[0][1]), 1e-10 * std::max(1.0, std::abs(rows[0][1])));
  }
  // snapshots every step here (T / (64 dt) < 1) and readable
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(d / "o" / "snapshots")) {
    (void)e;
    ++n;
  }
  EXPECT_EQ(n, 51u);
  const auto s = read_snapshot((d / "o" / "snapshots" / "u_00050.fbo2").string());
  EXPECT_EQ(s.t, 1.0);
  // the sidecar has the verdicts and the timestamp
  const auto j = nlohmann::json::parse(slurp(d / "o" / "simulate.json"));
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_TRUE(j.contains("generated_utc"));
}

TEST(Cli, IdenticalConfigGivesIdenticalCsv) {
  const auto d = scratch("repro");
  const auto cfg = write_config(d, R"({"experiment": "strichartz", "nx": 16, "kmax": 2, "seed": 99})");
  ASSERT_EQ(run_cli("strichartz --config " + cfg.string() + " --out " + (d / "a").string()).code, 0);
  ASSERT_EQ(run_cli("strichartz --config " + cfg.string() + " --out " + (d / "b").string() + " --threads 3").code, 0);
  EXPECT_EQ(slurp(d / "a" / "strichartz.csv"), slurp(d / "b" / "strichartz.csv"));
  EXPECT_FALSE(slurp(d / "a" / "strichartz.csv").empty());
}

TEST(Plotdata, Headers) {
  const auto d = scratch("plots");
  auto r = run_cli("illposed --config " + std::string(FBO2D_CONFIG_DIR) + "/illposed.json --out " + (d / "ill").string());
  ASSERT_EQ(r.code, 0) << r.output;
  std::string h;
  auto rows = read_csv(d / "ill" / "illposed_plot.csv", h);
  EXPECT_EQ(h, "logN,logF3Norm");
  EXPECT_EQ(rows.size(), 5u);
  const auto fit = nlohmann::json::parse(slurp(d / "ill" / "illposed_plot_fit.json"));
  EXPECT_TRUE(fit.contains("slope") && fit.contains("intercept") && fit.contains("r2"));

  r = run_cli("decay --config " + std::string(FBO2D_CONFIG_DIR) + "/decay.json --out " + (d / "dec").string());
  ASSERT_EQ(r.code, 0) << r.output;
  read_csv(d / "dec" / "decay_plot.csv", h);
  EXPECT_EQ(h, "t,ratio");

  r = run_cli("convergence --config " + std::string(FBO2D_CONFIG_DIR) + "/convergence.json --out " + (d / "conv").string());
  ASSERT_EQ(r.code, 0) << r.output;
  read_csv(d / "conv" / "convergence_plot.csv", h);
  EXPECT_EQ(h, "n,supErr");
}

TEST(Report, FormattingAndVerdicts) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  NormReport r;
  EXPECT_FALSE(r.pass());  // no verdicts is not a pass
  r.columns = {"x"};
  r.add_row({1.0});
  EXPECT_THROW(r.add_row({1.0, 2.0}), std::logic_error);
  r.verdict("a", true, "rule");
  EXPECT_TRUE(r.pass());
  r.add_row({std::nan("")});
  EXPECT_FALSE(r.all_finite());
}

TEST(Cli, VerdictFailureExitsTwo) {
  // large data on a coarse step: L2 is not conserved (or the run blows up), either way exit 2
  const auto d = scratch("fail");
  const auto cfg = write_config(d, R"({"experiment": "simulate", "nx": 32, "T": 0.5, "dt": 0.25, "amplitude": 50.0})");
  const auto r = run_cli("simulate --config " + cfg.string() + " --out " + (d / "o").string());
  EXPECT_EQ(r.code, 2) << r.output;
}
