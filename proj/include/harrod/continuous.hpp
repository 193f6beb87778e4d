#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "harrod/domain.hpp"
#include "harrod/numerics.hpp"

// The corrected continuous model. Balancing capital against income realized
// over a period (instead of against the instantaneous income flow) turns the
// constant-coefficient law into dK/dtau = sigma/(1 - sigma tau) K, whose
// solution K0/(1 - sigma tau) blows up at tau = 1/sigma. This header holds
// the closed forms, the ODE simulation with singularity guard, the milestone
// analysis at tau = nu, and the legacy exponential solution kept as the
// comparison baseline.

namespace harrod {

struct ContinuousState {
  double capital = 0.0;
  double investment = 0.0;
  double income = 0.0;
  double consumption = 0.0;
};

struct RealizedFlows {
  double realized_income = 0.0;
  double realized_capital = 0.0;
  double realized_consumption = 0.0;
  double realized_investment = 0.0;
};

namespace detail {

inline void check_tau(double tau) {
  if (!std::isfinite(tau) || tau < 0.0)
    throw validation_error("tau", "time must be non-negative");
}

inline void check_pre_crisis(const ModelParams& p, double tau) {
  check_tau(tau);
  if (p.sigma * tau >= 1.0)
    throw past_crisis_error(1.0 / p.sigma,
                            "evaluation at or past the crisis at tau = 1/sigma");
}

}  // namespace detail

/// State intensities at tau: K = K0/(1-sigma tau), I = I0/(1-sigma tau)^2,
/// Y = I/mu, C = (1-mu) Y. Throws past_crisis_error once sigma*tau >= 1.
inline ContinuousState closed_form_state(const ModelParams& p, double tau) {
  detail::check_pre_crisis(p, tau);
  const double den = 1.0 - p.sigma * tau;
  ContinuousState s;
  s.capital = p.k0 / den;
  s.investment = p.i0 / (den * den);
  s.income = s.investment / p.mu;
  s.consumption = (1.0 - p.mu) * s.income;
  return s;
}

/// Running integrals of the intensities from 0 to tau:
/// Y_R = (K0/mu)((1-sigma tau)^{-1} - 1), K_R = I_R = mu Y_R,
/// C_R = (1-mu) Y_R.
inline RealizedFlows realized_flows(const ModelParams& p, double tau) {
  detail::check_pre_crisis(p, tau);
  const double den = 1.0 - p.sigma * tau;
  RealizedFlows r;
  r.realized_income = (p.k0 / p.mu) * (1.0 / den - 1.0);
  r.realized_capital = p.mu * r.realized_income;
  r.realized_investment = r.realized_capital;
  r.realized_consumption = (1.0 - p.mu) * r.realized_income;
  return r;
}

namespace detail {

/// How intensities derive from the capital along a trajectory:
/// I(tau) = invest_weight(tau) * K(tau), Y = I / mu(tau), C = Y - I.
struct IntensityModel {
  std::function<double(double)> invest_weight;
  std::function<double(double)> mu_of_tau;
};

/// Fills intensity and realized series of a trajectory whose grid and
/// capital came from the ODE engine. Realized series are running Simpson
/// integrals per grid interval; the midpoint capital is reconstructed with a
/// cubic Hermite interpolant from the node values and slopes, which keeps
/// the running integrals at the same order as the integrator.
inline void fill_trajectory(Trajectory& t,
                            const std::function<double(double)>& rate,
                            const IntensityModel& model) {
  const std::size_t n = t.grid.size();
  t.investment.resize(n);
  t.income.resize(n);
  t.consumption.resize(n);
  t.realized_income.assign(n, 0.0);
  t.realized_capital.assign(n, 0.0);
  t.realized_consumption.assign(n, 0.0);
  t.realized_investment.assign(n, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    const double tau = t.grid[i];
    const double invest = model.invest_weight(tau) * t.capital[i];
    const double income = invest / model.mu_of_tau(tau);
    t.investment[i] = invest;
    t.income[i] = income;
    t.consumption[i] = income - invest;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = t.grid[i];
    const double b = t.grid[i + 1];
    const double h = b - a;
    const double mid = a + 0.5 * h;
    const double ka = t.capital[i];
    const double kb = t.capital[i + 1];
    const double da = rate(a) * ka;
    const double db = rate(b) * kb;
    const double kmid = 0.5 * (ka + kb) + 0.125 * h * (da - db);

    const double invest_mid = model.invest_weight(mid) * kmid;
    const double income_mid = invest_mid / model.mu_of_tau(mid);
    const double consumption_mid = income_mid - invest_mid;

    const double w = h / 6.0;
    t.realized_investment[i + 1] =
        t.realized_investment[i] +
        w * (t.investment[i] + 4.0 * invest_mid + t.investment[i + 1]);
    t.realized_income[i + 1] =
        t.realized_income[i] +
        w * (t.income[i] + 4.0 * income_mid + t.income[i + 1]);
    t.realized_consumption[i + 1] =
        t.realized_consumption[i] +
        w * (t.consumption[i] + 4.0 * consumption_mid + t.consumption[i + 1]);
  }
  t.realized_capital = t.realized_investment;
}

}  // namespace detail

struct SimulationResult {
  Trajectory trajectory;
  CrisisReport crisis;
  StopReason stop = StopReason::ReachedHorizon;
};

/// Integrates the continuous model up to the horizon. The crisis time is
/// always the analytic 1/sigma; the integrator guard is the cross-check and
/// is reflected in the report's method when it trips inside the horizon.
inline SimulationResult simulate(const ModelParams& p, double horizon,
                                 const OdeControls& controls = {}) {
  const double sigma = p.sigma;
  RateFunction rf;
  rf.rate = [sigma](double tau) { return sigma / (1.0 - sigma * tau); };
  rf.denominator = [sigma](double tau) { return 1.0 - sigma * tau; };

  const OdeSolution ode = integrate_linear_ode(rf, p.k0, horizon, controls);

  SimulationResult result;
  result.stop = ode.stop;
  result.trajectory.grid = ode.grid;
  result.trajectory.capital = ode.capital;

  detail::IntensityModel model;
  model.invest_weight = rf.rate;  // I = dK/dtau for the baseline model
  model.mu_of_tau = [mu = p.mu](double) { return mu; };
  detail::fill_trajectory(result.trajectory, rf.rate, model);

  result.crisis.variant = Variant::Continuous;
  result.crisis.crisis_time = 1.0 / sigma;
  result.crisis.method = ode.stop == StopReason::GuardTripped
                             ? CrisisMethod::IntegratorGuard
                             : CrisisMethod::Analytic;
  result.crisis.denominator_margin = ode.last_denominator;
  return result;
}

struct NuBoundary {
  double capital = 0.0;     // K0 / (1 - mu)
  double investment = 0.0;  // I0 / (1 - mu)^2
  double income = 0.0;      // Y0 / (1 - mu)^2
};

struct Milestones {
  double balance_time = 0.0;   // Y_R(tau) = K(tau), analytically nu
  double reformat_time = 0.0;  // C_R(tau) = K0, analytically nu
  double crisis_time = 0.0;    // 1 / sigma
  NuBoundary checks;
};

/// Locates the milestone times numerically with find_root and cross-checks
/// them against the analytic value nu. The reformat time is the natural
/// renewal criterion: realized consumption has used up the initial capital.
inline Milestones milestones(const ModelParams& p, double root_abs = 1e-9) {
  Milestones m;
  m.crisis_time = 1.0 / p.sigma;

  const double hi = (1.0 - 1e-9) / p.sigma;
  const auto consumption = [&](double tau) {
    return closed_form_state(p, tau).consumption;
  };

  m.balance_time = find_root(
      [&](double tau) {
        return realized_flows(p, tau).realized_income -
               closed_form_state(p, tau).capital;
      },
      0.0, hi, root_abs, consumption);
  m.reformat_time = find_root(
      [&](double tau) {
        return realized_flows(p, tau).realized_consumption - p.k0;
      },
      0.0, hi, root_abs, consumption);

  const double check_tol = std::max(1e-6, 1e3 * root_abs) * p.nu;
  if (std::abs(m.balance_time - p.nu) > check_tol ||
      std::abs(m.reformat_time - p.nu) > check_tol)
    throw numeric_error("milestones: numeric roots deviate from the analytic "
                        "value nu");

  const ContinuousState at_nu = closed_form_state(p, p.nu);
  m.checks.capital = at_nu.capital;
  m.checks.investment = at_nu.investment;
  m.checks.income = at_nu.income;
  return m;
}

/// Classical exponential solution K = K0 e^{sigma tau}, kept only as the
/// comparison baseline; it never develops a crisis.
inline Trajectory legacy_exponential(const ModelParams& p, double horizon,
                                     double step = 0.01) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw validation_error("horizon", "horizon must be positive");
  if (!(step > 0.0)) throw validation_error("step", "step must be positive");

  Trajectory t;
  const auto push = [&](double tau) {
    const double factor = std::exp(p.sigma * tau);
    t.grid.push_back(tau);
    t.capital.push_back(p.k0 * factor);
    t.investment.push_back(p.i0 * factor);
    t.income.push_back(p.y0 * factor);
    t.consumption.push_back(t.income.back() - t.investment.back());
    const double growth = factor - 1.0;
    t.realized_capital.push_back(p.k0 * growth);
    t.realized_investment.push_back(p.k0 * growth);
    t.realized_income.push_back(p.k0 / p.mu * growth);
    t.realized_consumption.push_back((1.0 - p.mu) * p.k0 / p.mu * growth);
  };
  double tau = 0.0;
  while (tau < horizon) {
    push(tau);
    tau += step;
  }
  push(horizon);
  return t;
}

struct DimensionalAudit {
  double capital = 0.0;           // closed-form K(tau)
  double scaled_integral = 0.0;   // (nu / tau) * integral of Y over [0, tau]
  double relative_mismatch = 0.0;
};

/// Evaluates both sides of the period-balance relation
/// K(tau) = (nu / tau) * integral_0^tau Y by independent paths (closed form
/// vs quadrature). At tau = 0 the limiting value nu * Y0 = K0 applies.
inline DimensionalAudit dimensional_audit(const ModelParams& p, double tau,
                                          double quad_tol = 1e-12) {
  detail::check_pre_crisis(p, tau);
  DimensionalAudit a;
  if (tau == 0.0) {
    a.capital = p.k0;
    a.scaled_integral = p.nu * p.y0;
  } else {
    a.capital = closed_form_state(p, tau).capital;
    const double integral = quadrature(
        [&](double eta) { return closed_form_state(p, eta).income; }, 0.0, tau,
        quad_tol);
    a.scaled_integral = p.nu / tau * integral;
  }
  a.relative_mismatch =
      std::abs(a.capital - a.scaled_integral) / std::abs(a.capital);
  return a;
}

}  // namespace harrod
