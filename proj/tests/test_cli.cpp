#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "lsgd/io.hpp"
#include "lsgd/optimizers.hpp"
#include "lsgd/quadratic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run_cli(const std::string& args) {
  const std::string cmd = std::string(LSGD_CLI_PATH) + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return o;
  std::array<char, 4096> buf{};
  while (std::size_t got = fread(buf.data(), 1, buf.size(), p)) o.out.append(buf.data(), got);
  const int status = pclose(p);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string run_stderr(const std::string& args) {
  const std::string cmd = std::string(LSGD_CLI_PATH) + " " + args + " 2>&1 1>/dev/null";
  std::string err;
  FILE* p = popen(cmd.c_str(), "r");
  std::array<char, 4096> buf{};
  while (std::size_t got = fread(buf.data(), 1, buf.size(), p)) err.append(buf.data(), got);
  pclose(p);
  return err;
}

std::vector<double> lines_as_doubles(const std::string& text) {
  std::vector<double> v;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) v.push_back(lsgd::io::parse_double(line));
  return v;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lsgd_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& content) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SmoothSigmaZeroEchoesInput) {
  const auto in = file("y.txt", "1.5\n-2\n3.25\n");
  const auto o = run_cli("smooth --sigma 0 --input " + in + " --method dft");
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(lines_as_doubles(o.out), (std::vector<double>{1.5, -2.0, 3.25}));
}

TEST_F(CliTest, SmoothUnitVectorAllMethods) {
  const auto in = file("e1.txt", "1\n0\n0\n0\n");
  const std::vector<double> want{7.0 / 15.0, 1.0 / 5.0, 2.0 / 15.0, 1.0 / 5.0};
  for (const char* m : {"dft", "thomas", "dense"}) {
    const auto o = run_cli("smooth --n 4 --sigma 1 --input " + in + " --method " + m);
    ASSERT_EQ(o.code, 0) << m;
    const auto got = lines_as_doubles(o.out);
    ASSERT_EQ(got.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(got[i], want[i], 1e-14) << m << " " << i;
  }
}

TEST_F(CliTest, SmoothDftMatchesThomas) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::string text;
  for (int i = 0; i < 37; ++i) text += lsgd::io::format_double(g(rng)) + "\n";
  const auto in = file("r.txt", text);
  const auto a = lines_as_doubles(run_cli("smooth --sigma 3.5 --input " + in + " --method dft").out);
  const auto b = lines_as_doubles(run_cli("smooth --sigma 3.5 --input " + in + " --method thomas").out);
  ASSERT_EQ(a.size(), 37u);
  ASSERT_EQ(b.size(), 37u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9 * std::max(1.0, std::abs(a[i])));
}

TEST_F(CliTest, SmoothLengthMismatchIsUsageError) {
  const auto in = file("y.txt", "1\n2\n3\n");
  EXPECT_EQ(run_cli("smooth --n 4 --sigma 1 --input " + in).code, 1);
  EXPECT_EQ(run_cli("smooth --sigma -1 --input " + in).code, 1);
  EXPECT_EQ(run_cli("smooth --sigma 1 --input " + in + " --method lu").code, 1);
}

TEST_F(CliTest, DiagnosticsAreSingleLine) {
  const std::string err = run_stderr("smooth --n 4 --sigma 1 --input " + file("y.txt", "1\n2\n"));
  ASSERT_FALSE(err.empty());
  EXPECT_EQ(err.find('\n'), err.size() - 1);
  EXPECT_NE(err.find("--input"), std::string::npos);
}

TEST_F(CliTest, MissingInputIsIoError) {
  EXPECT_EQ(run_cli("smooth --sigma 1 --input " + path("absent.txt")).code, 3);
}

TEST_F(CliTest, MalformedInputIsDomainError) {
  EXPECT_EQ(run_cli("smooth --sigma 1 --input " + file("bad.txt", "1\nabc\n")).code, 2);
}

TEST_F(CliTest, NoSubcommandIsUsageError) { EXPECT_EQ(run_cli("").code, 1); }

TEST_F(CliTest, OptimizeGdGeometricDecay) {
  const auto x0 = file("x0.txt", "1\n0\n");
  const auto o = run_cli("optimize --n 2 --c 2 --x0 " + x0 + " --schedule gd --eta 0.1 --iters 100");
  ASSERT_EQ(o.code, 0);
  const auto j = json::parse(o.out);
  EXPECT_EQ(j["status"], "MaxIters");
  EXPECT_EQ(j["iterations_used"], 100);
  // (1 - 0.1 * 2)^100
  EXPECT_NEAR(j["final_distance"].get<double>(), std::pow(0.8, 100), 1e-22);
}

TEST_F(CliTest, OptimizeMatchesLibraryRun) {
  const double th = 166.8522 * std::numbers::pi / 180.0;
  const lsgd::Vector start(std::vector<double>{0.1 * std::cos(th), 0.1 * std::sin(th)});
  const auto x0 = file("x0.txt", lsgd::io::format_double(start[0]) + "\n" + lsgd::io::format_double(start[1]) + "\n");
  const auto o = run_cli("optimize --n 2 --c 2 --x0 " + x0 + " --schedule ratio --schedule-offset 1 --iters 100");
  ASSERT_EQ(o.code, 0);
  const auto j = json::parse(o.out);

  lsgd::RunConfig cfg;
  cfg.max_iters = 100;
  const auto ref = lsgd::run(lsgd::canonical_objective(2, 2.0), lsgd::Vector(lsgd::io::read_vector_file(x0)), cfg,
                             lsgd::SigmaSchedule::ratio(1));
  EXPECT_EQ(j["final_distance"].get<double>(), ref.final_point.norm());
  EXPECT_EQ(j["schedule"], "ratio (offset 1)");
}

TEST_F(CliTest, OptimizeLargeEpsStopsImmediately) {
  const auto x0 = file("x0.txt", "0.3\n0.4\n0\n");
  const auto o = run_cli("optimize --n 3 --x0 " + x0 + " --eps 10");
  ASSERT_EQ(o.code, 0);
  const auto j = json::parse(o.out);
  EXPECT_EQ(j["status"], "ReachedStationary");
  EXPECT_EQ(j["iterations_used"], 0);
}

TEST_F(CliTest, OptimizeWritesTrajectory) {
  const auto x0 = file("x0.txt", "0.3\n0.4\n0\n");
  const auto traj = path("t.csv");
  ASSERT_EQ(run_cli("optimize --n 3 --x0 " + x0 + " --iters 5 --trajectory " + traj).code, 0);
  std::istringstream in(lsgd::io::read_file(traj));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,x_0,x_1,x_2,grad_norm");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
}

TEST_F(CliTest, OptimizeRejectsBadFlags) {
  const auto x0 = file("x0.txt", "0.3\n0.4\n");
  EXPECT_EQ(run_cli("optimize --n 3 --x0 " + x0).code, 1);
  EXPECT_EQ(run_cli("optimize --n 2 --x0 " + x0 + " --schedule wobble").code, 1);
  EXPECT_EQ(run_cli("optimize --n 2 --x0 " + x0 + " --eta 0").code, 1);
  EXPECT_EQ(run_cli("optimize --objective matrix-file --x0 " + x0).code, 1);
}

TEST_F(CliTest, AnalyzeDimensions) {
  auto dim = [&](const std::string& args) {
    const auto o = run_cli("analyze " + args);
    EXPECT_EQ(o.code, 0) << args;
    return json::parse(o.out);
  };
  const auto five = dim("--n 5");
  EXPECT_EQ(five["dim_W"], 2);
  EXPECT_TRUE(five["sigma_independent"].get<bool>());
  EXPECT_EQ(five["per_sigma"].size(), 4u);
  EXPECT_EQ(dim("--n 2")["dim_W"], 0);
  const auto swap = file("swap.txt", "2\n0 1\n1 0\n");
  const auto j = dim("--objective matrix-file --matrix " + swap);
  EXPECT_EQ(j["dim_W"], 1);
  EXPECT_TRUE(j["sigma_independent"].get<bool>());
}

TEST_F(CliTest, AnalyzeReportsDegeneracy) {
  const auto m = file("deg.txt", "3\n1 0 0\n0 -1 0\n0 0 0\n");
  const auto report = path("r.json");
  ASSERT_EQ(run_cli("analyze --objective matrix-file --matrix " + m + " --sigma-list 1 --report " + report).code, 0);
  const auto j = json::parse(lsgd::io::read_file(report));
  EXPECT_TRUE(j["degenerate"].get<bool>());
  ASSERT_EQ(j["degenerate_check"].size(), 1u);
  EXPECT_TRUE(j["degenerate_check"][0]["fixed_under_mlsgd"].get<bool>());
}

TEST_F(CliTest, SweepCustomWritesFiles) {
  const auto m = file("b.txt", "2\n1 0\n0 -1\n");
  const auto out = path("f.csv");
  const auto coarse = path("c.csv");
  const auto summary = path("s.json");
  const auto o = run_cli("sweep --example custom --matrix " + m +
                         " --optimizer gd --r-min 0.5 --r-max 1 --r-step 0.5 --coarse-theta-step 10"
                         " --fine-theta-step 1 --refine-halfwidth 5 --threads 2 --out " +
                         out + " --coarse-out " + coarse + " --summary " + summary);
  ASSERT_EQ(o.code, 0);
  const auto j = json::parse(lsgd::io::read_file(summary));
  for (const char* k : {"min_distance", "argmin_r", "argmin_theta_deg", "max_distance", "failed_cells"})
    EXPECT_TRUE(j.contains(k)) << k;
  // GD on diag(1,-1): only theta = 0 / 180 starts shrink.
  EXPECT_NEAR(j["argmin_theta_deg"].get<double>(), -180.0, 1e-9);
  EXPECT_NEAR(j["min_distance"].get<double>(), 0.5 * std::pow(0.9, 100), 1e-12);
  EXPECT_TRUE(fs::exists(out));
  EXPECT_TRUE(fs::exists(coarse));
  EXPECT_FALSE(fs::exists(out + ".tmp"));
}

TEST_F(CliTest, SweepExampleTwoGdFindsAttractionLine) {
  const auto o = run_cli(
      "sweep --example 2 --optimizer gd --r-min 0.1 --r-max 0.1 --coarse-theta-step 0.01 --fine-theta-step 1e-5");
  ASSERT_EQ(o.code, 0);
  const auto j = json::parse(o.out);
  const double line = std::atan(6.0 / (std::sqrt(37.0) - 1.0)) * 180.0 / std::numbers::pi;
  // The antipodal start gives the same distance; the earlier grid angle wins.
  EXPECT_NEAR(j["argmin_theta_deg"].get<double>(), line - 180.0, 1e-5);
  // Off the line the unstable factor 1.308^100 dominates.
  EXPECT_LT(j["min_distance"].get<double>(), 1e-3 * j["max_distance"].get<double>());
}

TEST_F(CliTest, SweepUnwritableOutputIsIoErrorWithoutPartialFile) {
  const auto m = file("b.txt", "2\n1 0\n0 -1\n");
  const std::string out = path("missing_dir/f.csv");
  const auto o = run_cli("sweep --example custom --matrix " + m +
                         " --r-min 1 --r-max 1 --coarse-theta-step 30 --fine-theta-step 10 --out " + out);
  EXPECT_EQ(o.code, 3);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_FALSE(fs::exists(out + ".tmp"));
}

TEST_F(CliTest, SweepRejectsBadGrid) {
  EXPECT_EQ(run_cli("sweep --example 1 --coarse-theta-step 0").code, 1);
  EXPECT_EQ(run_cli("sweep --example 1 --r-min 2 --r-max 1").code, 1);
  EXPECT_EQ(run_cli("sweep --example custom").code, 1);
}

TEST_F(CliTest, ConfigFileSuppliesFlags) {
  const auto in = file("e1.txt", "1\n0\n0\n0\n");
  const auto cfg = file("c.toml", "[smooth]\nsigma = 1\nmethod = \"dft\"\ninput = \"" + in + "\"\n");
  const auto o = run_cli("--config " + cfg + " smooth");
  ASSERT_EQ(o.code, 0);
  const auto got = lines_as_doubles(o.out);
  ASSERT_EQ(got.size(), 4u);
  EXPECT_NEAR(got[0], 7.0 / 15.0, 1e-14);
}

class HelpGolden : public ::testing::TestWithParam<std::string> {};

TEST_P(HelpGolden, MatchesGoldenFile) {
  const std::string sub = GetParam();
  const auto o = run_cli((sub == "main" ? std::string() : sub + " ") + "--help");
  ASSERT_EQ(o.code, 0);
  const fs::path golden = fs::path(LSGD_GOLDEN_DIR) / ("help_" + sub + ".txt");
  ASSERT_TRUE(fs::exists(golden)) << golden;
  EXPECT_EQ(o.out, lsgd::io::read_file(golden));
}

INSTANTIATE_TEST_SUITE_P(Cli, HelpGolden, ::testing::Values("main", "smooth", "optimize", "analyze", "sweep"));
