#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "harrod/domain.hpp"
#include "harrod/extensions.hpp"
#include "harrod/numerics.hpp"

// Parameter identification from observed series: nu estimation at its
// boundary signature, growth-law fitting from capital observations, and
// crisis extrapolation from the fitted law.

namespace harrod {

enum class SeriesKind { Capital, Income };

/// Observed (tau, value) samples with strictly increasing tau > 0 and
/// positive values; at least three samples.
struct ObservedSeries {
  std::vector<std::pair<double, double>> samples;
  SeriesKind kind = SeriesKind::Capital;
};

inline ObservedSeries make_observed(
    std::vector<std::pair<double, double>> samples, SeriesKind kind) {
  if (samples.size() < 3)
    throw validation_error("samples", "need at least 3 observations");
  double prev_tau = 0.0;
  for (const auto& [tau, value] : samples) {
    if (!std::isfinite(tau) || tau <= prev_tau)
      throw validation_error("samples",
                             "times must be strictly increasing and positive");
    if (!std::isfinite(value) || value <= 0.0)
      throw validation_error("samples", "values must be positive");
    prev_tau = tau;
  }
  return ObservedSeries{std::move(samples), kind};
}

/// Estimates nu as the first time the observed income crosses the boundary
/// level Y0 / (1 - mu)^2, locating the crossing by linear interpolation
/// between the bracketing samples. A sample exactly on the threshold returns
/// its own time.
inline double estimate_nu(const ObservedSeries& observed, double mu,
                          double y0) {
  if (observed.kind != SeriesKind::Income)
    throw validation_error("observed", "nu estimation needs an income series");
  if (!std::isfinite(mu) || mu <= 0.0 || mu >= 1.0)
    throw validation_error("mu", "investment share must lie in (0, 1)");
  if (!std::isfinite(y0) || y0 <= 0.0)
    throw validation_error("y0", "initial income must be positive");

  const double threshold = y0 / ((1.0 - mu) * (1.0 - mu));
  for (std::size_t j = 0; j < observed.samples.size(); ++j) {
    const auto& [tau, value] = observed.samples[j];
    if (value == threshold) return tau;
    if (value > threshold) {
      if (j == 0)
        throw insufficient_observation_error(
            "estimate_nu: threshold already exceeded at the first sample");
      const auto& [tau_lo, value_lo] = observed.samples[j - 1];
      return tau_lo +
             (threshold - value_lo) * (tau - tau_lo) / (value - value_lo);
    }
  }
  throw insufficient_observation_error(
      "estimate_nu: threshold not reached within the observed samples");
}

/// Fits the accumulation law from capital observations. Since
/// K = K0 / (1 - sigma f(tau)), each sample inverts exactly to
/// f(tau_i) = (1 - k0 / K_i) / sigma, which linearizes the problem; the
/// constrained least-squares fit does the rest. Plain least squares, no
/// robust loss: callers judge quality through the fit residual.
inline GrowthLaw fit_growth_law(const ObservedSeries& observed, double sigma,
                                double k0, int degree) {
  if (observed.kind != SeriesKind::Capital)
    throw validation_error("observed", "law fitting needs a capital series");
  if (!std::isfinite(sigma) || sigma <= 0.0)
    throw validation_error("sigma", "growth rate must be positive");
  if (!std::isfinite(k0) || k0 <= 0.0)
    throw validation_error("k0", "initial capital must be positive");

  std::vector<std::pair<double, double>> transformed;
  transformed.reserve(observed.samples.size());
  for (const auto& [tau, capital] : observed.samples) {
    if (capital <= 0.0)
      throw validation_error("samples", "capital values must be positive");
    transformed.emplace_back(tau, (1.0 - k0 / capital) / sigma);
  }
  return fit_constrained_polynomial(transformed, degree);
}

/// Crisis time implied by a fitted law; the report is flagged as
/// extrapolated so consumers can tell fit-based forecasts from
/// first-principles ones.
inline CrisisReport extrapolate_crisis(const GrowthLaw& law, double sigma,
                                       double root_abs = 1e-9) {
  CrisisReport report = detail::generalized_crisis_for_sigma(sigma, law, root_abs);
  report.extrapolated = true;
  return report;
}

}  // namespace harrod
