#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "harrod/calibration.hpp"
#include "harrod/continuous.hpp"
#include "harrod/csv.hpp"
#include "harrod/discrete.hpp"
#include "harrod/domain.hpp"
#include "harrod/extensions.hpp"
#include "harrod/format.hpp"
#include "harrod/scenario.hpp"
#include "harrod/svg.hpp"

// Scenario execution: dispatches a ScenarioConfig to the model modules,
// renders the requested artifacts (CSV trajectory, human report, machine
// report, SVG plot) and classifies the outcome for the exit code contract:
// 0 success, 1 error, 2 crisis inside the horizon.

namespace harrod {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCrisisWithinHorizon = 2;

struct RunOutputs {
  std::string trajectory_csv;
  std::string report_text;
  std::string report_machine;
  std::optional<std::string> plot_svg;
  Trajectory trajectory;
  CrisisReport crisis;
  std::optional<Milestones> milestones;
  int exit_status = kExitSuccess;
};

inline bool crisis_within_horizon(const CrisisReport& crisis, double horizon) {
  return crisis.crisis_time && *crisis.crisis_time <= horizon;
}

namespace detail {

/// Maps a yearly series onto the trajectory layout; realized columns are the
/// running sums of the yearly flows starting with year 1, mirroring the
/// capital-forming sum K_n = K_0 + sum_{j=1}^{n} I_j.
inline Trajectory trajectory_from_discrete(const DiscreteSeries& s) {
  Trajectory t;
  const std::size_t n = s.capital.size();
  t.grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.grid.push_back(static_cast<double>(i));
  t.capital = s.capital;
  t.income = s.income;
  t.investment = s.investment;
  t.consumption = s.consumption;
  t.realized_income.assign(n, 0.0);
  t.realized_capital.assign(n, 0.0);
  t.realized_consumption.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    t.realized_income[i] = t.realized_income[i - 1] + s.income[i];
    t.realized_capital[i] = t.realized_capital[i - 1] + s.investment[i];
    t.realized_consumption[i] =
        t.realized_consumption[i - 1] + s.consumption[i];
  }
  t.realized_investment = t.realized_capital;
  return t;
}

inline void kv(std::string& out, const std::string& key,
               const std::string& value) {
  out += key + " = " + value + "\n";
}

inline void kv(std::string& out, const std::string& key, double value) {
  kv(out, key, format_sci(value));
}

}  // namespace detail

inline RunOutputs run_scenario(const ScenarioConfig& config) {
  OdeControls controls;
  controls.rel_tol = config.tolerances.ode_rel;
  controls.max_step = config.max_step;

  const ModelParams& p = config.params;
  const double horizon = config.horizon;
  const double root_abs = config.tolerances.root_abs;

  RunOutputs out;
  std::optional<ExtensionOutcome> extension;
  std::optional<StopReason> stop;

  switch (config.variant) {
    case Variant::LegacyExponential: {
      out.trajectory = legacy_exponential(p, horizon, config.max_step);
      out.crisis.variant = config.variant;
      out.crisis.searched_up_to = horizon;
      break;
    }
    case Variant::Discrete: {
      const int n_max = static_cast<int>(std::floor(horizon + 1e-9));
      out.trajectory = detail::trajectory_from_discrete(discrete_exact(p, n_max));
      out.crisis.variant = config.variant;
      out.crisis.searched_up_to = static_cast<double>(n_max);
      break;
    }
    case Variant::Continuous: {
      SimulationResult sim = simulate(p, horizon, controls);
      out.trajectory = std::move(sim.trajectory);
      out.crisis = sim.crisis;
      stop = sim.stop;
      out.milestones = milestones(p, root_abs);
      break;
    }
    case Variant::Generalized:
      extension = generalized_simulate(p, *config.growth_law, horizon, controls,
                                       root_abs);
      break;
    case Variant::VariableMu:
      extension = variable_mu_simulate(p, *config.mu_schedule, horizon,
                                       controls, root_abs);
      break;
    case Variant::Amortized:
      extension = amortized_simulate(p, *config.alpha, horizon, controls);
      break;
    case Variant::Cumulative:
      extension = cumulative_simulate(p, *config.rho, horizon, controls,
                                      root_abs);
      break;
  }
  if (extension) {
    out.trajectory = std::move(extension->trajectory);
    out.crisis = extension->crisis;
    stop = extension->stop;
  }

  const bool crisis_inside = crisis_within_horizon(out.crisis, horizon);
  out.exit_status = crisis_inside ? kExitCrisisWithinHorizon : kExitSuccess;

  // human-readable report
  {
    std::string& r = out.report_text;
    r += "variant: " + std::string(variant_name(config.variant)) + "\n";
    r += "params: mu = " + format_brief(p.mu) + ", nu = " + format_brief(p.nu) +
         ", k0 = " + format_brief(p.k0) + ", sigma = " + format_brief(p.sigma) +
         "\n";
    r += "horizon = " + format_brief(horizon) +
         ", max_step = " + format_brief(config.max_step) + "\n";
    if (out.crisis.crisis_time) {
      r += "crisis: tau = " + format_brief(*out.crisis.crisis_time) + " (" +
           std::string(crisis_method_name(out.crisis.method)) + "), " +
           (crisis_inside ? "inside horizon" : "outside horizon") + "\n";
    } else {
      r += "crisis: none within horizon";
      if (out.crisis.searched_up_to)
        r += " (searched up to tau = " +
             format_brief(*out.crisis.searched_up_to) + ")";
      r += "\n";
    }
    if (out.crisis.denominator_margin)
      r += "denominator margin at last grid point = " +
           format_brief(*out.crisis.denominator_margin) + "\n";
    if (out.milestones) {
      r += "milestones: balance time = " +
           format_brief(out.milestones->balance_time) +
           ", reformat time = " + format_brief(out.milestones->reformat_time) +
           ", crisis = " + format_brief(out.milestones->crisis_time) + "\n";
      r += "boundary at nu: K = " + format_brief(out.milestones->checks.capital) +
           ", I = " + format_brief(out.milestones->checks.investment) +
           ", Y = " + format_brief(out.milestones->checks.income) + "\n";
    }
    if (extension && extension->closed_form_discrepancy)
      r += std::string("closed form: ") +
           (extension->closed_form_available ? "trusted" : "reference only") +
           ", max relative gap to ODE = " +
           format_brief(*extension->closed_form_discrepancy) + "\n";
    if (!out.trajectory.empty())
      r += "final state: tau = " + format_brief(out.trajectory.grid.back()) +
           ", K = " + format_brief(out.trajectory.capital.back()) + "\n";
  }

  // machine-readable report
  {
    std::string& m = out.report_machine;
    detail::kv(m, "variant", std::string(variant_name(config.variant)));
    detail::kv(m, "mu", p.mu);
    detail::kv(m, "nu", p.nu);
    detail::kv(m, "k0", p.k0);
    detail::kv(m, "sigma", p.sigma);
    detail::kv(m, "horizon", horizon);
    if (out.crisis.crisis_time)
      detail::kv(m, "crisis_time", *out.crisis.crisis_time);
    else
      detail::kv(m, "crisis_time", std::string("none"));
    detail::kv(m, "crisis_method",
               std::string(crisis_method_name(out.crisis.method)));
    detail::kv(m, "crisis_within_horizon",
               std::string(crisis_inside ? "1" : "0"));
    if (out.crisis.denominator_margin)
      detail::kv(m, "denominator_margin", *out.crisis.denominator_margin);
    if (out.crisis.searched_up_to)
      detail::kv(m, "searched_up_to", *out.crisis.searched_up_to);
    if (stop)
      detail::kv(m, "stop_reason",
                 std::string(*stop == StopReason::GuardTripped
                                 ? "guard-tripped"
                                 : "reached-horizon"));
    if (out.milestones) {
      detail::kv(m, "milestone.balance_time", out.milestones->balance_time);
      detail::kv(m, "milestone.reformat_time", out.milestones->reformat_time);
      detail::kv(m, "milestone.crisis_time", out.milestones->crisis_time);
      detail::kv(m, "boundary.capital", out.milestones->checks.capital);
      detail::kv(m, "boundary.investment", out.milestones->checks.investment);
      detail::kv(m, "boundary.income", out.milestones->checks.income);
    }
    if (extension) {
      detail::kv(m, "closed_form_available",
                 std::string(extension->closed_form_available ? "1" : "0"));
      if (extension->closed_form_discrepancy)
        detail::kv(m, "closed_form_discrepancy",
                   *extension->closed_form_discrepancy);
    }
    if (!out.trajectory.empty()) {
      detail::kv(m, "final.tau", out.trajectory.grid.back());
      detail::kv(m, "final.capital", out.trajectory.capital.back());
    }
  }

  if (config.wants(OutputKind::Csv))
    out.trajectory_csv = trajectory_csv(out.trajectory);
  if (config.wants(OutputKind::Svg)) {
    PlotOptions plot;
    plot.title = variant_name(config.variant);
    out.plot_svg = emit_plot(out.trajectory,
                             {PlotChannel::Capital, PlotChannel::Investment,
                              PlotChannel::Income, PlotChannel::Consumption},
                             plot);
  }
  return out;
}

/// Consistency and dimensionality audits for the configured parameters,
/// rendered as machine-parsable key = value lines with comment headers:
/// the discrete/continuous divergence at n = round(1/sigma), the
/// capital-forming residuals for both closed forms under both investment
/// timings, and the period-balance identity checked by quadrature.
inline std::string audit_scenario(const ScenarioConfig& config) {
  const ModelParams& p = config.params;
  std::string out;

  out += "# model parameters\n";
  detail::kv(out, "params.mu", p.mu);
  detail::kv(out, "params.nu", p.nu);
  detail::kv(out, "params.k0", p.k0);
  detail::kv(out, "params.sigma", p.sigma);

  const double crisis = 1.0 / p.sigma;
  const int n_star = std::max(1, static_cast<int>(std::lround(crisis)));

  out += "# yearly closed forms vs the continuous model at n = round(1/sigma)\n";
  detail::kv(out, "divergence.n", std::to_string(n_star));
  const double exact_n = p.k0 * std::pow(1.0 + p.sigma, n_star);
  const double approx_n = p.k0 * std::exp(p.sigma * n_star);
  detail::kv(out, "divergence.discrete_exact", exact_n);
  detail::kv(out, "divergence.discrete_approx", approx_n);
  detail::kv(out, "divergence.approx_over_exact", approx_n / exact_n);
  if (static_cast<double>(n_star) >= crisis)
    detail::kv(out, "divergence.continuous", std::string("singular"));
  else
    detail::kv(out, "divergence.continuous",
               closed_form_state(p, n_star).capital);

  out += "# capital-forming residuals K_n - K0 - sum I_j\n";
  const int mid = std::max(1, n_star / 2);
  int years[3] = {1, mid, n_star};
  for (int n : years) {
    for (DiscreteSolution sol :
         {DiscreteSolution::CompoundGrowth, DiscreteSolution::ExponentialApprox}) {
      for (InvestmentTiming timing : {InvestmentTiming::FromCurrentCapital,
                                      InvestmentTiming::FromPriorCapital}) {
        const ConsistencyAudit audit = consistency_audit(p, n, sol, timing);
        const std::string prefix =
            "contradiction." + std::string(discrete_solution_name(sol)) + "." +
            std::string(investment_timing_name(timing)) + ".n" +
            std::to_string(n);
        detail::kv(out, prefix + ".accumulated", audit.accumulated_investment);
        detail::kv(out, prefix + ".capital_minus_k0", audit.capital_minus_k0);
        detail::kv(out, prefix + ".residual", audit.residual);
        if (sol == DiscreteSolution::CompoundGrowth &&
            timing == InvestmentTiming::FromCurrentCapital) {
          const double closed =
              -p.sigma * p.k0 * (std::pow(1.0 + p.sigma, n) - 1.0);
          detail::kv(out, prefix + ".closed_form_residual", closed);
        }
      }
    }
  }

  out += "# period balance K(tau) vs (nu/tau) * integral of Y\n";
  const double taus[4] = {0.0, 0.5 * p.nu, p.nu,
                          std::min(0.95 * crisis, 1.9 * p.nu)};
  for (double tau : taus) {
    const DimensionalAudit audit = dimensional_audit(p, tau);
    const std::string prefix = "dimensional.tau" + format_brief(tau);
    detail::kv(out, prefix + ".capital", audit.capital);
    detail::kv(out, prefix + ".scaled_integral", audit.scaled_integral);
    detail::kv(out, prefix + ".relative_mismatch", audit.relative_mismatch);
  }
  return out;
}

}  // namespace harrod
