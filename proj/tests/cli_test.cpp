#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "harrod/csv.hpp"
#include "proc.hpp"

namespace fs = std::filesystem;
using testutil::make_temp_dir;
using testutil::read_file;
using testutil::report_value;
using testutil::run_command;
using testutil::write_file;

namespace {

const std::string kCli = HARROD_CLI_PATH;
const fs::path kGoldenDir = HARROD_GOLDEN_DIR;
const fs::path kScenarioDir = HARROD_SCENARIO_DIR;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(make_temp_dir(tag)) {}
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST_CASE("run executes the baseline scenario and writes its artifacts") {
  TempDir dir("run");
  const auto result = run_command(
      kCli + " run " + (kScenarioDir / "continuous_baseline.cfg").string() +
      " --out-dir " + dir.path.string());
  CHECK(result.status == 0);  // crisis at 20 lies outside the horizon 19
  CHECK(result.output.find("crisis: tau = 20") != std::string::npos);

  const std::string csv = read_file(dir.path / "trajectory.csv");
  const harrod::Trajectory t = harrod::parse_trajectory_csv(csv);
  CHECK(t.grid.back() == 19.0);
  CHECK(t.capital.back() == Catch::Approx(20.0).epsilon(1e-7));

  const std::string machine = read_file(dir.path / "report.kv");
  CHECK(report_value(machine, "crisis_time") == "2.000000000000e+01");
  CHECK(report_value(machine, "crisis_within_horizon") == "0");
  CHECK(report_value(machine, "crisis_method") == "analytic");
  CHECK(fs::exists(dir.path / "report.txt"));
  CHECK(!fs::exists(dir.path / "plot.svg"));  // svg not requested
}

TEST_CASE("a horizon past the crisis yields exit code 2") {
  TempDir dir("crisis");
  write_file(dir.path / "scenario.cfg",
             "variant = continuous\nmu = 0.5\nnu = 10\nk0 = 1\n"
             "horizon = 25\noutputs = report\n");
  const auto result =
      run_command(kCli + " run " + (dir.path / "scenario.cfg").string() +
                  " --out-dir " + dir.path.string());
  CHECK(result.status == 2);
  const std::string machine = read_file(dir.path / "report.kv");
  CHECK(report_value(machine, "crisis_within_horizon") == "1");
  CHECK(report_value(machine, "stop_reason") == "guard-tripped");

  const auto crisis_only = run_command(
      kCli + " crisis " + (dir.path / "scenario.cfg").string());
  CHECK(crisis_only.status == 2);
  CHECK(crisis_only.output.find("inside horizon") != std::string::npos);
}

TEST_CASE("discrete scenario emits one row per year and never a crisis") {
  TempDir dir("discrete");
  write_file(dir.path / "scenario.cfg",
             "variant = discrete\nmu = 0.5\nnu = 10\nk0 = 1\nhorizon = 20\n");
  const auto result =
      run_command(kCli + " run " + (dir.path / "scenario.cfg").string() +
                  " --out-dir " + dir.path.string());
  CHECK(result.status == 0);
  const harrod::Trajectory t =
      harrod::parse_trajectory_csv(read_file(dir.path / "trajectory.csv"));
  CHECK(t.size() == 21);
  CHECK(t.capital.back() == Catch::Approx(2.653298).epsilon(1e-6));
  const std::string machine = read_file(dir.path / "report.kv");
  CHECK(report_value(machine, "crisis_time") == "none");
}

TEST_CASE("help is a success, not an error") {
  CHECK(run_command(kCli + " --help").status == 0);
  CHECK(run_command(kCli + " run --help").status == 0);
  CHECK(run_command(kCli + " calibrate --help").status == 0);
}

TEST_CASE("errors surface as exit code 1") {
  TempDir dir("bad");
  write_file(dir.path / "broken.cfg", "variant = continuous\nmu = 2\n");
  CHECK(run_command(kCli + " run " + (dir.path / "broken.cfg").string())
            .status == 1);
  CHECK(run_command(kCli + " run " + (dir.path / "missing.cfg").string())
            .status == 1);
  CHECK(run_command(kCli + " frobnicate").status == 1);
  CHECK(run_command(kCli).status == 1);
}

TEST_CASE("golden CSV and SVG artifacts are byte stable") {
  TempDir dir("golden");
  const auto result = run_command(
      kCli + " run " + (kGoldenDir / "golden_small.cfg").string() +
      " --out-dir " + dir.path.string());
  CHECK(result.status == 0);
  CHECK(read_file(dir.path / "trajectory.csv") ==
        read_file(kGoldenDir / "trajectory.csv.golden"));
  CHECK(read_file(dir.path / "plot.svg") ==
        read_file(kGoldenDir / "plot.svg.golden"));
}

TEST_CASE("audit reports the divergence of the three interpretations") {
  TempDir dir("audit");
  write_file(dir.path / "scenario.cfg",
             "variant = continuous\nmu = 0.5\nnu = 10\nk0 = 1\n");
  const auto result =
      run_command(kCli + " audit " + (dir.path / "scenario.cfg").string());
  REQUIRE(result.status == 0);
  CHECK(report_value(result.output, "divergence.n") == "20");
  CHECK(std::stod(report_value(result.output, "divergence.discrete_exact")) ==
        Catch::Approx(2.653298).epsilon(1e-6));
  CHECK(std::stod(report_value(result.output, "divergence.discrete_approx")) ==
        Catch::Approx(2.718282).epsilon(1e-6));
  CHECK(report_value(result.output, "divergence.continuous") == "singular");
  const double residual = std::stod(report_value(
      result.output, "contradiction.compound.current-capital.n20.residual"));
  CHECK(residual == Catch::Approx(-0.082665).margin(1e-6));
  const double telescoped = std::stod(report_value(
      result.output, "contradiction.compound.prior-capital.n20.residual"));
  CHECK(std::abs(telescoped) <= 1e-12);
}

TEST_CASE("calibrate fits observed capital and extrapolates the crisis") {
  TempDir dir("calibrate");
  std::string csv = "tau,value\n";
  for (int i = 1; i <= 10; ++i) {
    const double tau = i;
    const double f = tau - 0.01 * tau * tau;
    csv += harrod::format_sci(tau) + "," +
           harrod::format_sci(1.0 / (1.0 - 0.05 * f)) + "\n";
  }
  write_file(dir.path / "observed.csv", csv);
  const auto result = run_command(
      kCli + " calibrate " + (dir.path / "observed.csv").string() +
      " --sigma 0.05 --k0 1 --degree 2");
  REQUIRE(result.status == 0);
  CHECK(std::stod(report_value(result.output, "law.a2")) ==
        Catch::Approx(-0.01).margin(1e-7));
  CHECK(std::stod(report_value(result.output, "crisis_time")) ==
        Catch::Approx(50.0 - 10.0 * std::sqrt(5.0)).epsilon(1e-4));
  CHECK(report_value(result.output, "extrapolated") == "1");
}
