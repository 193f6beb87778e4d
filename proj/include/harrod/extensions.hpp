#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "harrod/continuous.hpp"
#include "harrod/domain.hpp"
#include "harrod/numerics.hpp"

// Extensions of the continuous model: a generalized accumulation law f(tau),
// a time-dependent investment share mu(tau), linear amortization of the
// capital stock, and cumulative weighting of past investments. Every variant
// keeps the same finite-time blow-up structure; what changes is the
// denominator whose vanishing marks the crisis.

namespace harrod {

struct ExtensionOutcome {
  Trajectory trajectory;
  CrisisReport crisis;
  StopReason stop = StopReason::ReachedHorizon;
  bool closed_form_available = false;
  /// Largest relative gap between the reference closed form and the ODE
  /// solution over the trajectory (up to 0.95 * crisis time). Infinite when
  /// the reference expression fails to evaluate.
  std::optional<double> closed_form_discrepancy;
};

namespace detail {

/// First positive zero of f'(tau), i.e. the end of the interval on which the
/// law describes monotone growth. Empty when the slope stays positive.
inline std::optional<double> first_slope_root(const GrowthLaw& law) {
  const auto& a = law.higher_coefficients();
  int lead = static_cast<int>(a.size()) - 1;
  while (lead >= 0 && a[lead] == 0.0) --lead;
  if (lead < 0) return std::nullopt;  // identity law

  // Cauchy bound for the roots of f' = 1 + sum_{n>=2} n a_n tau^{n-1}
  const double lead_coeff = static_cast<double>(lead + 2) * a[lead];
  double bound = 1.0 / std::abs(lead_coeff);
  for (int j = 0; j < lead; ++j)
    bound = std::max(bound, std::abs(static_cast<double>(j + 2) * a[j] /
                                     lead_coeff));
  bound += 1.0;

  const int cells = 8192;
  double prev = 0.0;
  for (int i = 1; i <= cells; ++i) {
    const double tau = bound * static_cast<double>(i) / cells;
    if (law.slope(tau) <= 0.0) {
      if (law.slope(tau) == 0.0) return tau;
      return find_root([&](double x) { return law.slope(x); }, prev, tau,
                       1e-12 * bound);
    }
    prev = tau;
  }
  return std::nullopt;  // slope positive on the whole root-bounded range
}

inline std::optional<double> max_relative_gap(
    const Trajectory& t, const std::function<double(double)>& reference,
    double tau_cap) {
  double worst = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    if (t.grid[i] > tau_cap) break;
    const double ref = reference(t.grid[i]);
    if (!std::isfinite(ref))
      return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(t.capital[i] - ref) /
                                std::max(std::abs(ref), 1e-300));
    any = true;
  }
  if (!any) return std::nullopt;
  return worst;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Generalized accumulation law
// ---------------------------------------------------------------------------

/// Capital under the generalized law: K = K0 / (1 - sigma f(tau)).
/// Requires f monotone on [0, tau] and sigma f(tau) < 1.
inline double generalized_capital(const ModelParams& p, const GrowthLaw& law,
                                  double tau) {
  detail::check_tau(tau);
  if (const auto limit = detail::first_slope_root(law); limit && tau > *limit)
    throw validation_error("tau", "growth law is not monotone up to tau");
  const double den = 1.0 - p.sigma * law(tau);
  if (den <= 0.0) {
    const double root = find_root(
        [&](double x) { return p.sigma * law(x) - 1.0; }, 0.0, tau, 1e-12);
    throw past_crisis_error(root, "evaluation at or past the crisis of the "
                                  "generalized law");
  }
  return p.k0 / den;
}

namespace detail {

inline CrisisReport generalized_crisis_for_sigma(double sigma,
                                                 const GrowthLaw& law,
                                                 double root_abs) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw validation_error("sigma", "growth rate must be positive");
  CrisisReport report;
  report.variant = Variant::Generalized;
  report.method = CrisisMethod::PolynomialRoot;

  const double target = 1.0 / sigma;
  const std::optional<double> limit = first_slope_root(law);

  double hi;
  if (limit) {
    hi = *limit;
    if (law(hi) < target) {
      // the law never accumulates enough before growth stalls
      report.searched_up_to = hi;
      report.denominator_margin = 1.0 - sigma * law(hi);
      return report;
    }
  } else {
    hi = 2.0 * target;
    int expansions = 0;
    while (law(hi) < target && expansions++ < 70) hi *= 2.0;
    if (law(hi) < target) {
      report.searched_up_to = hi;
      report.denominator_margin = 1.0 - sigma * law(hi);
      return report;
    }
  }

  report.crisis_time = find_root(
      [&](double tau) { return law(tau) - target; }, 0.0, hi, root_abs,
      [&](double tau) { return law.slope(tau); });
  return report;
}

}  // namespace detail

/// Smallest positive solution of f(tau) = 1/sigma within the monotone
/// validity interval of the law. Reports none (with the searched endpoint)
/// when growth stalls before the accumulation target is reached.
inline CrisisReport generalized_crisis(const ModelParams& p,
                                       const GrowthLaw& law,
                                       double root_abs = 1e-9) {
  return detail::generalized_crisis_for_sigma(p.sigma, law, root_abs);
}

/// Trajectory of the generalized model via the ODE
/// dK/dtau = sigma f'(tau) / (1 - sigma f(tau)) K. Integration is capped at
/// the law's monotone validity limit.
inline ExtensionOutcome generalized_simulate(const ModelParams& p,
                                             const GrowthLaw& law,
                                             double horizon,
                                             const OdeControls& controls = {},
                                             double root_abs = 1e-9) {
  const double sigma = p.sigma;
  RateFunction rf;
  rf.rate = [sigma, law](double tau) {
    return sigma * law.slope(tau) / (1.0 - sigma * law(tau));
  };
  rf.denominator = [sigma, law](double tau) { return 1.0 - sigma * law(tau); };

  double effective_horizon = horizon;
  if (const auto limit = detail::first_slope_root(law))
    effective_horizon = std::min(horizon, *limit);

  const OdeSolution ode =
      integrate_linear_ode(rf, p.k0, effective_horizon, controls);

  ExtensionOutcome out;
  out.stop = ode.stop;
  out.trajectory.grid = ode.grid;
  out.trajectory.capital = ode.capital;

  detail::IntensityModel model;
  model.invest_weight = rf.rate;
  model.mu_of_tau = [mu = p.mu](double) { return mu; };
  detail::fill_trajectory(out.trajectory, rf.rate, model);

  out.crisis = generalized_crisis(p, law, root_abs);
  out.crisis.denominator_margin = ode.last_denominator;
  if (!out.crisis.crisis_time && !out.crisis.searched_up_to)
    out.crisis.searched_up_to = effective_horizon;

  out.closed_form_available = true;
  const double cap = out.crisis.crisis_time
                         ? 0.95 * *out.crisis.crisis_time
                         : effective_horizon;
  out.closed_form_discrepancy = detail::max_relative_gap(
      out.trajectory,
      [&](double tau) { return p.k0 / (1.0 - sigma * law(tau)); }, cap);
  return out;
}

// ---------------------------------------------------------------------------
// Time-dependent investment share
// ---------------------------------------------------------------------------

/// Trajectory under a time-dependent share mu(tau):
/// dK/dtau = mu(tau) / (nu - tau mu(tau)) K. The crisis is the first
/// vanishing of nu - tau mu(tau): analytic for a constant schedule, a root
/// of the denominator for a polynomial schedule, and the integrator guard
/// for piecewise tables.
inline ExtensionOutcome variable_mu_simulate(const ModelParams& p,
                                             const MuSchedule& schedule,
                                             double horizon,
                                             const OdeControls& controls = {},
                                             double root_abs = 1e-9) {
  const double nu = p.nu;
  const auto denominator = [nu, schedule](double tau) {
    return nu - tau * schedule(tau);
  };
  RateFunction rf;
  rf.rate = [schedule, denominator](double tau) {
    return schedule(tau) / denominator(tau);
  };
  rf.denominator = denominator;

  const OdeSolution ode = integrate_linear_ode(rf, p.k0, horizon, controls);

  ExtensionOutcome out;
  out.stop = ode.stop;
  out.trajectory.grid = ode.grid;
  out.trajectory.capital = ode.capital;

  detail::IntensityModel model;
  model.invest_weight = rf.rate;
  model.mu_of_tau = [schedule](double tau) { return schedule(tau); };
  detail::fill_trajectory(out.trajectory, rf.rate, model);

  out.crisis.variant = Variant::VariableMu;
  out.crisis.denominator_margin = ode.last_denominator;
  switch (schedule.kind()) {
    case MuSchedule::Kind::Constant:
      out.crisis.crisis_time = nu / schedule.constant_value();
      out.crisis.method = CrisisMethod::Analytic;
      break;
    case MuSchedule::Kind::Polynomial: {
      double hi = std::max(horizon, 2.0 * nu / schedule(0.0));
      int expansions = 0;
      while (denominator(hi) > 0.0 && expansions++ < 70) hi *= 2.0;
      out.crisis.crisis_time = find_root(denominator, 0.0, hi, root_abs);
      out.crisis.method = CrisisMethod::PolynomialRoot;
      break;
    }
    case MuSchedule::Kind::Piecewise:
      out.crisis.method = CrisisMethod::IntegratorGuard;
      if (ode.stop == StopReason::GuardTripped)
        out.crisis.crisis_time = ode.last_safe_tau;
      else
        out.crisis.searched_up_to = horizon;
      break;
  }

  if (schedule.kind() == MuSchedule::Kind::Constant) {
    out.closed_form_available = true;
    const double sigma_eff = schedule.constant_value() / nu;
    const double cap = 0.95 / sigma_eff;
    out.closed_form_discrepancy = detail::max_relative_gap(
        out.trajectory,
        [&](double tau) { return p.k0 / (1.0 - sigma_eff * tau); }, cap);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Amortization
// ---------------------------------------------------------------------------

/// Trajectory with linear depreciation: the balance relation holds for
/// (1 - alpha tau) K(tau), which yields
/// dK/dtau = (alpha + sigma - 2 alpha sigma tau) /
///           ((1 - alpha tau)(1 - sigma tau)) K
/// with the closed form K0 / ((1 - alpha tau)(1 - sigma tau)) and an
/// analytic crisis at min(1/alpha, 1/sigma).
inline ExtensionOutcome amortized_simulate(const ModelParams& p, double alpha,
                                           double horizon,
                                           const OdeControls& controls = {}) {
  if (!std::isfinite(alpha) || alpha < 0.0)
    throw validation_error("alpha", "amortization rate must be non-negative");

  const double sigma = p.sigma;
  const auto denominator = [alpha, sigma](double tau) {
    return (1.0 - alpha * tau) * (1.0 - sigma * tau);
  };
  RateFunction rf;
  rf.rate = [alpha, sigma, denominator](double tau) {
    return (alpha + sigma - 2.0 * alpha * sigma * tau) / denominator(tau);
  };
  rf.denominator = denominator;

  const OdeSolution ode = integrate_linear_ode(rf, p.k0, horizon, controls);

  ExtensionOutcome out;
  out.stop = ode.stop;
  out.trajectory.grid = ode.grid;
  out.trajectory.capital = ode.capital;

  detail::IntensityModel model;
  // investment is the derivative of the depreciated stock (1 - alpha tau) K
  model.invest_weight = [alpha, sigma](double tau) {
    return sigma * (1.0 - alpha * tau) / (1.0 - sigma * tau);
  };
  model.mu_of_tau = [mu = p.mu](double) { return mu; };
  detail::fill_trajectory(out.trajectory, rf.rate, model);

  const double crisis =
      alpha > 0.0 ? std::min(1.0 / alpha, 1.0 / sigma) : 1.0 / sigma;
  out.crisis.variant = Variant::Amortized;
  out.crisis.crisis_time = crisis;
  out.crisis.method = CrisisMethod::Analytic;
  out.crisis.denominator_margin = ode.last_denominator;

  out.closed_form_available = true;
  out.closed_form_discrepancy = detail::max_relative_gap(
      out.trajectory, [&](double tau) { return p.k0 / denominator(tau); },
      0.95 * crisis);
  return out;
}

// ---------------------------------------------------------------------------
// Cumulative effect
// ---------------------------------------------------------------------------

/// Crisis time of the cumulative model: the positive root of
/// 1 - sigma tau - sigma rho tau^2, algebraically equal to
/// -1/(2 rho) + sqrt(1/(4 rho^2) + 1/(sigma rho)). The rearranged form
/// below avoids the cancellation that the direct expression suffers for
/// small rho; below rho = 1e-12 the baseline 1/sigma branch applies.
inline CrisisReport cumulative_crisis(const ModelParams& p, double rho,
                                      double root_abs = 1e-9) {
  if (!std::isfinite(rho) || rho < 0.0)
    throw validation_error("rho", "cumulative coefficient must be non-negative");

  CrisisReport report;
  report.variant = Variant::Cumulative;
  report.method = CrisisMethod::Analytic;
  if (rho < 1e-12) {
    report.crisis_time = 1.0 / p.sigma;
    return report;
  }

  const double sigma = p.sigma;
  const double crisis =
      2.0 / (sigma * (1.0 + std::sqrt(1.0 + 4.0 * rho / sigma)));
  report.crisis_time = crisis;

  // the formula must coincide with the denominator root
  const double root = find_root(
      [sigma, rho](double tau) {
        return 1.0 - sigma * tau - sigma * rho * tau * tau;
      },
      0.0, 2.0 * crisis + 1.0, root_abs,
      [sigma, rho](double tau) { return -sigma - 2.0 * sigma * rho * tau; });
  if (std::abs(root - crisis) > std::max(root_abs, 1e-12 * crisis))
    throw numeric_error("cumulative_crisis: closed-form crisis time does not "
                        "match the denominator root");
  return report;
}

/// Literal evaluation of the reference closed-form expression for the
/// cumulative model. It does not satisfy K(0) = K0, so the ODE solution is
/// authoritative; this is kept only so the mismatch can be reported.
inline double cumulative_reference_capital(const ModelParams& p, double rho,
                                           double tau) {
  const double sigma = p.sigma;
  const double s = std::sqrt(4.0 * sigma * rho + sigma * sigma);
  const double den = 1.0 - sigma * tau - sigma * rho * tau * tau;
  const double first = 1.0 / std::sqrt(den);
  const double base =
      (-2.0 * sigma * tau - sigma - s) / (-2.0 * sigma * tau - sigma + s);
  const double expo = sigma / (2.0 * s);
  return p.k0 * (first + std::pow(base, expo));
}

/// Trajectory with cumulative weighting of past investments:
/// dK/dtau = sigma (1 + rho tau) / (1 - sigma tau - sigma rho tau^2) K.
/// The investment intensity is dK/dtau / (1 + rho tau).
inline ExtensionOutcome cumulative_simulate(const ModelParams& p, double rho,
                                            double horizon,
                                            const OdeControls& controls = {},
                                            double root_abs = 1e-9) {
  if (!std::isfinite(rho) || rho < 0.0)
    throw validation_error("rho", "cumulative coefficient must be non-negative");

  const double sigma = p.sigma;
  const auto denominator = [sigma, rho](double tau) {
    return 1.0 - sigma * tau - sigma * rho * tau * tau;
  };
  RateFunction rf;
  rf.rate = [sigma, rho, denominator](double tau) {
    return sigma * (1.0 + rho * tau) / denominator(tau);
  };
  rf.denominator = denominator;

  const OdeSolution ode = integrate_linear_ode(rf, p.k0, horizon, controls);

  ExtensionOutcome out;
  out.stop = ode.stop;
  out.trajectory.grid = ode.grid;
  out.trajectory.capital = ode.capital;

  detail::IntensityModel model;
  model.invest_weight = [sigma, denominator](double tau) {
    return sigma / denominator(tau);
  };
  model.mu_of_tau = [mu = p.mu](double) { return mu; };
  detail::fill_trajectory(out.trajectory, rf.rate, model);

  out.crisis = cumulative_crisis(p, rho, root_abs);
  out.crisis.denominator_margin = ode.last_denominator;

  out.closed_form_available = false;
  out.closed_form_discrepancy = detail::max_relative_gap(
      out.trajectory,
      [&](double tau) { return cumulative_reference_capital(p, rho, tau); },
      0.95 * *out.crisis.crisis_time);
  return out;
}

}  // namespace harrod
