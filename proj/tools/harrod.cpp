// Command-line front end: scenario execution, crisis reporting, growth-law
// calibration from observed capital, and model audits.
//
// Exit codes: 0 success, 1 error, 2 crisis inside the horizon.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "harrod/harrod.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw harrod::error("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw harrod::error("cannot write file: " + path.string());
  out << content;
}

int run_command(const std::string& config_path, const std::string& out_dir) {
  const harrod::ScenarioConfig config =
      harrod::parse_scenario(read_file(config_path));
  const harrod::RunOutputs outputs = harrod::run_scenario(config);

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  if (config.wants(harrod::OutputKind::Csv))
    write_file(dir / "trajectory.csv", outputs.trajectory_csv);
  if (config.wants(harrod::OutputKind::Report)) {
    write_file(dir / "report.txt", outputs.report_text);
    write_file(dir / "report.kv", outputs.report_machine);
  }
  if (outputs.plot_svg) write_file(dir / "plot.svg", *outputs.plot_svg);

  std::cout << outputs.report_text;
  return outputs.exit_status;
}

int crisis_command(const std::string& config_path) {
  const harrod::ScenarioConfig config =
      harrod::parse_scenario(read_file(config_path));
  const harrod::RunOutputs outputs = harrod::run_scenario(config);
  std::cout << outputs.report_text;
  return outputs.exit_status;
}

int calibrate_command(const std::string& observations_path, double sigma,
                      double k0, int degree) {
  const auto samples =
      harrod::parse_observations_csv(read_file(observations_path));
  const harrod::ObservedSeries observed =
      harrod::make_observed(samples, harrod::SeriesKind::Capital);
  const harrod::GrowthLaw law =
      harrod::fit_growth_law(observed, sigma, k0, degree);
  const harrod::CrisisReport crisis = harrod::extrapolate_crisis(law, sigma);

  std::vector<std::pair<double, double>> transformed;
  for (const auto& [tau, capital] : observed.samples)
    transformed.emplace_back(tau, (1.0 - k0 / capital) / sigma);

  std::string out;
  harrod::detail::kv(out, "law.degree", std::to_string(law.degree()));
  const auto& coeffs = law.higher_coefficients();
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    harrod::detail::kv(out, "law.a" + std::to_string(i + 2), coeffs[i]);
  harrod::detail::kv(out, "fit.residual_rms",
                     harrod::fit_residual_rms(law, transformed));
  if (crisis.crisis_time)
    harrod::detail::kv(out, "crisis_time", *crisis.crisis_time);
  else
    harrod::detail::kv(out, "crisis_time", std::string("none"));
  harrod::detail::kv(out, "crisis_method",
                     std::string(crisis_method_name(crisis.method)));
  harrod::detail::kv(out, "extrapolated", std::string("1"));
  std::cout << out;
  return harrod::kExitSuccess;
}

int audit_command(const std::string& config_path) {
  const harrod::ScenarioConfig config =
      harrod::parse_scenario(read_file(config_path));
  std::cout << harrod::audit_scenario(config);
  return harrod::kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Growth-model simulation and crisis forecasting"};
  app.require_subcommand(1);

  std::string run_config, out_dir = ".";
  CLI::App* run_cmd =
      app.add_subcommand("run", "execute a scenario and write its artifacts");
  run_cmd->add_option("config", run_config, "scenario file")->required();
  run_cmd->add_option("--out-dir", out_dir, "output directory");

  std::string crisis_config;
  CLI::App* crisis_cmd =
      app.add_subcommand("crisis", "report crisis detection only");
  crisis_cmd->add_option("config", crisis_config, "scenario file")->required();

  std::string observations_path;
  double sigma = 0.0, k0 = 0.0;
  int degree = 2;
  CLI::App* calibrate_cmd = app.add_subcommand(
      "calibrate", "fit a growth law from observed capital and "
                   "extrapolate the crisis time");
  calibrate_cmd->add_option("observations", observations_path,
                            "CSV with header tau,value")
      ->required();
  calibrate_cmd->add_option("--sigma", sigma, "growth rate mu/nu")->required();
  calibrate_cmd->add_option("--k0", k0, "initial capital")->required();
  calibrate_cmd->add_option("--degree", degree, "polynomial degree")
      ->required();

  std::string audit_config;
  CLI::App* audit_cmd =
      app.add_subcommand("audit", "consistency and dimensional audits");
  audit_cmd->add_option("config", audit_config, "scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return harrod::kExitError;
  }

  try {
    if (run_cmd->parsed()) return run_command(run_config, out_dir);
    if (crisis_cmd->parsed()) return crisis_command(crisis_config);
    if (calibrate_cmd->parsed())
      return calibrate_command(observations_path, sigma, k0, degree);
    if (audit_cmd->parsed()) return audit_command(audit_config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return harrod::kExitError;
  }
  return harrod::kExitError;
}
