// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits non-zero when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "harrod/harrod.hpp"
#include "proc.hpp"

namespace fs = std::filesystem;
using namespace harrod;

namespace {

int failures = 0;

void criterion(int id, const std::string& label,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", id,
              label.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

int main() {
  const auto suite_start = std::chrono::steady_clock::now();
  const std::string cli = HARROD_CLI_PATH;
  const fs::path golden_dir = HARROD_GOLDEN_DIR;

  criterion(1, "baseline crisis at tau = 20 with the guard past 19.9",
            [&](std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const ModelParams p = make_params(0.5, 10.0, 1.0);
    const SimulationResult sim = simulate(p, 25.0);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    detail = "crisis_time = " + format_brief(*sim.crisis.crisis_time) +
             ", last safe tau = " + format_brief(sim.trajectory.grid.back()) +
             ", runtime = " + format_brief(elapsed) + " s";
    return *sim.crisis.crisis_time == 20.0 &&
           sim.stop == StopReason::GuardTripped &&
           sim.trajectory.grid.back() > 19.9 &&
           sim.trajectory.grid.back() < 20.0 && elapsed < 1.0;
  });

  criterion(2, "nu-boundary identities to 1e-12 on a 3x3 grid",
            [&](std::string& detail) {
    double worst = 0.0;
    for (double mu : {0.2, 0.5, 0.8}) {
      for (double nu : {2.0, 10.0, 40.0}) {
        const ModelParams p = make_params(mu, nu, 1.0);
        const ContinuousState s = closed_form_state(p, p.nu);
        const double om = 1.0 - mu;
        worst = std::max(worst, std::abs(s.capital - p.k0 / om) / s.capital);
        worst = std::max(worst,
                         std::abs(s.investment - p.i0 / (om * om)) / s.investment);
        worst = std::max(worst, std::abs(s.income - p.y0 / (om * om)) / s.income);
      }
    }
    detail = "worst relative error = " + format_brief(worst);
    return worst <= 1e-12;
  });

  criterion(3, "milestone identities by quadrature to 1e-9",
            [&](std::string& detail) {
    const ModelParams p = make_params(0.5, 10.0, 1.0);
    const double quad_y = quadrature(
        [&](double eta) { return closed_form_state(p, eta).income; }, 0.0,
        p.nu, 1e-11);
    const double quad_c = quadrature(
        [&](double eta) { return closed_form_state(p, eta).consumption; }, 0.0,
        p.nu, 1e-11);
    const double k_at_nu = closed_form_state(p, p.nu).capital;
    const RealizedFlows anti = realized_flows(p, p.nu);
    const double gap_balance = std::abs(quad_y - k_at_nu);
    const double gap_reformat = std::abs(quad_c - p.k0);
    const double gap_paths_y = std::abs(quad_y - anti.realized_income);
    const double gap_paths_c = std::abs(quad_c - anti.realized_consumption);
    detail = "Y_R(nu)-K(nu) = " + format_brief(gap_balance) +
             ", C_R(nu)-K0 = " + format_brief(gap_reformat) +
             ", path gaps = " + format_brief(gap_paths_y) + "/" +
             format_brief(gap_paths_c);
    return gap_balance <= 1e-9 && gap_reformat <= 1e-9 &&
           gap_paths_y <= 1e-9 && gap_paths_c <= 1e-9;
  });

  criterion(4, "ODE within 1e-8 of the closed form and fourth-order scaling",
            [&](std::string& detail) {
    double worst = 0.0;
    for (double sigma : {0.025, 0.05, 0.1}) {
      const ModelParams p = make_params(0.5, 0.5 / sigma, 1.0);
      const double tau_end = 0.95 / sigma;
      const SimulationResult sim = simulate(p, tau_end);
      const double expected = p.k0 / (1.0 - sigma * tau_end);
      worst = std::max(
          worst, std::abs(sim.trajectory.capital.back() - expected) / expected);
    }

    RateFunction constant_rate;
    constant_rate.rate = [](double) { return 0.05; };
    OdeControls coarse;
    coarse.max_step = 0.5;
    coarse.rel_tol = 1e-2;
    OdeControls fine = coarse;
    fine.max_step = 0.25;
    const double exact = std::exp(0.5);
    const double err_coarse = std::abs(
        integrate_linear_ode(constant_rate, 1.0, 10.0, coarse).capital.back() -
        exact);
    const double err_fine = std::abs(
        integrate_linear_ode(constant_rate, 1.0, 10.0, fine).capital.back() -
        exact);
    const double factor = err_coarse / err_fine;
    detail = "worst ODE error = " + format_brief(worst) +
             ", halving factor = " + format_brief(factor);
    return worst <= 1e-8 && factor >= 12.0;
  });

  criterion(5, "audit command reports the three interpretations at n = 20",
            [&](std::string& detail) {
    const auto dir = testutil::make_temp_dir("acceptance_audit");
    testutil::write_file(dir / "scenario.cfg",
                         "variant = continuous\nmu = 0.5\nnu = 10\nk0 = 1\n");
    const auto result =
        testutil::run_command(cli + " audit " + (dir / "scenario.cfg").string());
    fs::remove_all(dir);
    if (result.status != 0) {
      detail = "audit exit status " + std::to_string(result.status);
      return false;
    }
    const double exact =
        std::stod(testutil::report_value(result.output, "divergence.discrete_exact"));
    const double approx =
        std::stod(testutil::report_value(result.output, "divergence.discrete_approx"));
    const std::string continuous =
        testutil::report_value(result.output, "divergence.continuous");
    // oracles: recurrence rollout and the exponential
    const ModelParams p = make_params(0.5, 10.0, 1.0);
    const double rolled =
        recurrence_simulate(p, 20, InvestmentTiming::FromPriorCapital)
            .capital[20];
    detail = "exact = " + format_brief(exact) + ", approx = " +
             format_brief(approx) + ", continuous = " + continuous;
    return close_rel(exact, rolled, 1e-12) && close_rel(exact, 2.653298, 1e-6) &&
           close_rel(approx, std::exp(1.0), 1e-12) &&
           close_rel(approx, 2.718282, 1e-6) && continuous == "singular";
  });

  criterion(6, "capital-forming residuals match their closed form to 1e-12",
            [&](std::string& detail) {
    const ModelParams p = make_params(0.5, 10.0, 1.0);
    double worst_current = 0.0, worst_prior = 0.0;
    for (int n : {1, 10, 20}) {
      const ConsistencyAudit current = consistency_audit(
          p, n, DiscreteSolution::CompoundGrowth,
          InvestmentTiming::FromCurrentCapital);
      const double closed =
          -p.sigma * p.k0 * (std::pow(1.0 + p.sigma, n) - 1.0);
      worst_current = std::max(worst_current,
                               std::abs(current.residual - closed));
      const ConsistencyAudit prior = consistency_audit(
          p, n, DiscreteSolution::CompoundGrowth,
          InvestmentTiming::FromPriorCapital);
      worst_prior = std::max(worst_prior, std::abs(prior.residual));
    }
    detail = "current-capital gap = " + format_brief(worst_current) +
             ", prior-capital residual = " + format_brief(worst_prior);
    return worst_current <= 1e-12 && worst_prior <= 1e-12;
  });

  criterion(7, "extension crises: cumulative 10.0, amortized 10.0, monotone rho",
            [&](std::string& detail) {
    const ModelParams p = make_params(0.5, 10.0, 1.0);
    const CrisisReport cumulative = cumulative_crisis(p, 0.1, 1e-9);
    const double root = find_root(
        [&](double t) { return 1.0 - p.sigma * t - p.sigma * 0.1 * t * t; },
        0.0, 40.0, 1e-9);
    const ExtensionOutcome hard = amortized_simulate(p, 0.1, 9.5);
    const ExtensionOutcome soft = amortized_simulate(p, 0.02, 19.0);
    bool monotone = true;
    double previous = std::numeric_limits<double>::infinity();
    for (double rho : {0.01, 0.05, 0.1, 0.2}) {
      const double t = *cumulative_crisis(p, rho).crisis_time;
      monotone = monotone && t < previous;
      previous = t;
    }
    detail = "cumulative = " + format_brief(*cumulative.crisis_time) +
             ", |formula - root| = " +
             format_brief(std::abs(*cumulative.crisis_time - root)) +
             ", amortized = " + format_brief(*hard.crisis.crisis_time) +
             ", ODE gap = " + format_brief(*soft.closed_form_discrepancy);
    return std::abs(*cumulative.crisis_time - 10.0) <= 1e-9 &&
           std::abs(*cumulative.crisis_time - root) <= 1e-9 &&
           *hard.crisis.crisis_time == 10.0 &&
           *soft.crisis.crisis_time == 20.0 &&
           *soft.closed_form_discrepancy <= 1e-8 &&
           *hard.closed_form_discrepancy <= 1e-8 && monotone;
  });

  criterion(8, "generalized law crises: deceleration to 27.6393, identity 20",
            [&](std::string& detail) {
    const ModelParams p = make_params(0.5, 10.0, 1.0);
    const double oracle = 50.0 - 10.0 * std::sqrt(5.0);
    const CrisisReport slow = generalized_crisis(p, GrowthLaw({-0.01}), 1e-9);
    const CrisisReport identity = generalized_crisis(p, GrowthLaw{}, 1e-9);
    detail = "decelerated = " + format_brief(*slow.crisis_time) +
             ", identity = " + format_brief(*identity.crisis_time);
    return std::abs(*slow.crisis_time - oracle) <= 1e-6 &&
           std::abs(*slow.crisis_time - 27.6393) <= 1e-4 &&
           *identity.crisis_time == 20.0;
  });

  criterion(9, "calibration round trip, noisy extrapolation, nu recovery",
            [&](std::string& detail) {
    const GrowthLaw planted({-0.01});
    const double oracle = 50.0 - 10.0 * std::sqrt(5.0);

    std::vector<std::pair<double, double>> clean;
    for (int i = 1; i <= 10; ++i) {
      const double tau = i;
      clean.emplace_back(tau, 1.0 / (1.0 - 0.05 * planted(tau)));
    }
    const GrowthLaw fitted = fit_growth_law(
        make_observed(clean, SeriesKind::Capital), 0.05, 1.0, 2);
    const double a2_gap = std::abs(fitted.higher_coefficients()[0] + 0.01);
    const double clean_crisis = *extrapolate_crisis(fitted, 0.05).crisis_time;

    std::vector<std::pair<double, double>> noisy;
    for (int i = 1; i <= 20; ++i) {
      const double tau = 0.5 * i;
      noisy.emplace_back(tau, 1.0 / (1.0 - 0.05 * planted(tau)));
    }
    std::mt19937 rng(12345);  // fixed recorded seed
    std::normal_distribution<double> noise(0.0, 0.01);
    for (auto& [tau, value] : noisy) value *= 1.0 + noise(rng);
    const GrowthLaw noisy_fit = fit_growth_law(
        make_observed(noisy, SeriesKind::Capital), 0.05, 1.0, 2);
    const double noisy_crisis = *extrapolate_crisis(noisy_fit, 0.05).crisis_time;

    const ModelParams p = make_params(0.5, 10.0, 1.0);
    std::vector<std::pair<double, double>> income;
    const double step = 0.25;
    for (double tau = step; tau <= 14.0 + 1e-12; tau += step) {
      const double den = 1.0 - p.sigma * tau;
      income.emplace_back(tau, p.y0 / (den * den));
    }
    const double nu_estimate =
        estimate_nu(make_observed(income, SeriesKind::Income), p.mu, p.y0);

    detail = "a2 gap = " + format_brief(a2_gap) + ", clean crisis = " +
             format_brief(clean_crisis) + ", noisy crisis = " +
             format_brief(noisy_crisis) + ", nu = " + format_brief(nu_estimate);
    return a2_gap <= 1e-8 &&
           std::abs(clean_crisis - oracle) <= 0.01 * oracle &&
           std::abs(noisy_crisis - oracle) <= 0.05 * oracle &&
           std::abs(nu_estimate - 10.0) <= step;
  });

  criterion(10, "CLI goldens are byte stable and exit codes follow the crisis",
            [&](std::string& detail) {
    const auto dir = testutil::make_temp_dir("acceptance_cli");
    const auto golden_run = testutil::run_command(
        cli + " run " + (golden_dir / "golden_small.cfg").string() +
        " --out-dir " + dir.string());
    const std::string csv = testutil::read_file(dir / "trajectory.csv");
    const bool csv_ok =
        csv == testutil::read_file(golden_dir / "trajectory.csv.golden") &&
        csv.rfind("tau,K,I,Y,C,Y_R,K_R,C_R\n", 0) == 0;
    const bool svg_ok = testutil::read_file(dir / "plot.svg") ==
                        testutil::read_file(golden_dir / "plot.svg.golden");

    testutil::write_file(dir / "past.cfg",
                         "variant = continuous\nmu = 0.5\nnu = 10\nk0 = 1\n"
                         "horizon = 21\noutputs = report\n");
    testutil::write_file(dir / "at.cfg",
                         "variant = continuous\nmu = 0.5\nnu = 10\nk0 = 1\n"
                         "horizon = 20\noutputs = report\n");
    testutil::write_file(dir / "before.cfg",
                         "variant = continuous\nmu = 0.5\nnu = 10\nk0 = 1\n"
                         "horizon = 19\noutputs = report\n");
    const int past = testutil::run_command(
        cli + " run " + (dir / "past.cfg").string() + " --out-dir " +
        dir.string()).status;
    const int at = testutil::run_command(
        cli + " run " + (dir / "at.cfg").string() + " --out-dir " +
        dir.string()).status;
    const int before = testutil::run_command(
        cli + " run " + (dir / "before.cfg").string() + " --out-dir " +
        dir.string()).status;
    fs::remove_all(dir);

    const double elapsed = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - suite_start)
                               .count();
    detail = "golden csv/svg = " + std::string(csv_ok ? "ok" : "MISMATCH") +
             "/" + std::string(svg_ok ? "ok" : "MISMATCH") +
             ", exit codes = " + std::to_string(before) + "/" +
             std::to_string(at) + "/" + std::to_string(past) +
             ", suite time = " + format_brief(elapsed) + " s";
    return golden_run.status == 0 && csv_ok && svg_ok && before == 0 &&
           at == 2 && past == 2 && elapsed < 30.0;
  });

  if (failures == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", failures);
  return 1;
}
