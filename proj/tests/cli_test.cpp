#include "rsa/analytic.hpp"
#include "rsa/records.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

namespace {

struct Run {
  int code;
  std::string out;
};

// Captures stdout and stderr of the CLI binary.
Run rsa_cli(const std::string& args) {
  const std::string cmd = std::string(RSA_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, {}};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<rsa::io::OutputRecord> records(const std::string& args) {
  const auto run = rsa_cli(args);
  EXPECT_EQ(run.code, 0) << run.out;
  return rsa::io::from_csv(run.out);
}

std::string temp_file(const std::string& name, const std::string& body) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << body;
  return path;
}

TEST(Cli, ExactDensityAtUnitTime) {
  const auto recs = records("density --t 1.0 --source exact");
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].value, 0.43233235838169365);
  EXPECT_EQ(recs[0].source, rsa::io::Source::exact);
  EXPECT_FALSE(recs[0].std_error.has_value());
}

TEST(Cli, ZeroTimeGivesZeros) {
  for (const auto& r : records("density --t 0 --source exact")) EXPECT_EQ(r.value, 0.0);
  const auto corr = records("correlation --t 0 --s-max 4 --source exact");
  ASSERT_EQ(corr.size(), 5u);
  for (const auto& r : corr) EXPECT_EQ(r.value, 0.0);
}

TEST(Cli, OracleDensityWithinWindowBound) {
  const auto recs = records("density --t 0.3 --source oracle --radius 4");
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_LT(std::fabs(recs[0].value - rsa::analytic::density_exact(0.3)), 4.1e-5);
}

TEST(Cli, ExactCorrelationAtUnitTime) {
  const auto recs = records("correlation --t 1.0 --s-max 2 --source exact");
  ASSERT_EQ(recs.size(), 3u);
  const double e2 = std::exp(-2.0);
  EXPECT_NEAR(recs[1].value, -0.25 * (1.0 - e2) * (1.0 - e2), 1e-12);
  EXPECT_NEAR(recs[1].value, -0.1869119, 1e-6);
  EXPECT_NEAR(recs[2].value, 0.1100862, 1e-6);
}

TEST(Cli, MonteCarloCorrelationAgreesWithExact) {
  const auto recs = records("correlation --t 1.0 --s-max 2 --source mc --sites 1000000 --replicas 32 --seed 42");
  ASSERT_EQ(recs.size(), 3u);
  for (const auto& r : recs) {
    ASSERT_TRUE(r.std_error.has_value());
    const double exact = rsa::analytic::correlation_exact(*r.s, r.t).value;
    EXPECT_LT(std::fabs(r.value - exact), 4.0 * *r.std_error) << "s=" << *r.s;
  }
}

TEST(Cli, GridSyntaxes) {
  const auto a = records("density --t 0:1:5");
  ASSERT_EQ(a.size(), 5u);
  EXPECT_EQ(a[2].t, 0.5);
  EXPECT_EQ(records("density --t 0.1,0.2,0.9").size(), 3u);
}

TEST(Cli, JsonMatchesCsv) {
  const auto run = rsa_cli("correlation --t 0.5,1 --s-max 3 --format json");
  ASSERT_EQ(run.code, 0);
  EXPECT_EQ(rsa::io::from_json(run.out), records("correlation --t 0.5,1 --s-max 3"));
}

TEST(Cli, WritesOutputFile) {
  const std::string path = ::testing::TempDir() + "rsa_cli_out.csv";
  ASSERT_EQ(rsa_cli("density --t 1 --out " + path).code, 0);
  std::ifstream in(path);
  const std::string body{std::istreambuf_iterator<char>(in), {}};
  EXPECT_EQ(rsa::io::from_csv(body), records("density --t 1"));
}

TEST(Cli, ConfigFileFlagsWin) {
  const auto cfg = temp_file("rsa_cfg.json", R"({"t": [0.5], "correlation": {"s-max": 1}, "density": {"t": "0.25"}})");
  const auto d = records("--config " + cfg + " density");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].t, 0.25);  // nested key beats top-level key
  const auto c = records("--config " + cfg + " correlation");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].t, 0.5);
  const auto f = records("--config " + cfg + " density --t 1");
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].t, 1.0);  // flag beats config
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(rsa_cli("").code, 2);
  EXPECT_EQ(rsa_cli("density --bogus").code, 2);
  EXPECT_EQ(rsa_cli("density --t 1.5").code, 2);
  EXPECT_EQ(rsa_cli("density --source nowhere").code, 2);
  EXPECT_EQ(rsa_cli("gamma --s 3").code, 2);
  EXPECT_EQ(rsa_cli("density --source mc --replicas 1").code, 2);
  EXPECT_EQ(rsa_cli("--config " + temp_file("rsa_bad.json", R"({"nope": 1})") + " density").code, 2);
  EXPECT_EQ(rsa_cli("--help").code, 0);
}

TEST(Cli, ResourceGuardExitsThree) {
  const auto run = rsa_cli("density --source mc --sites 100000000 --replicas 64 --memory-budget-gib 0.1");
  EXPECT_EQ(run.code, 3) << run.out;
}

TEST(Cli, VerifyQuickPasses) {
  const auto run = rsa_cli("verify --level quick");
  EXPECT_EQ(run.code, 0) << run.out;
  EXPECT_EQ(run.out.find("FAIL"), std::string::npos);
}

TEST(Cli, VerifyReportsCorruptedCheck) {
  const auto run = rsa_cli("verify --level quick --corrupt gamma.assembly");
  EXPECT_EQ(run.code, 1);
  EXPECT_NE(run.out.find("FAIL  gamma.assembly"), std::string::npos) << run.out;
  EXPECT_EQ(run.out.find("FAIL", run.out.find("FAIL") + 1), std::string::npos) << run.out;
}

TEST(Cli, SweepCoversAllQuantities) {
  const auto recs = records("sweep --t 0:1:3 --s-max 4 --sources exact,oracle --radius 3");
  std::size_t density = 0, corr = 0, gamma = 0;
  for (const auto& r : recs) {
    density += r.quantity == rsa::io::Quantity::density;
    corr += r.quantity == rsa::io::Quantity::correlation;
    gamma += r.quantity == rsa::io::Quantity::gamma;
  }
  EXPECT_EQ(density, 2u * 3u);
  EXPECT_EQ(corr, 2u * 3u * 5u);
  EXPECT_EQ(gamma, 2u * 3u * 2u);
}

}  // namespace
