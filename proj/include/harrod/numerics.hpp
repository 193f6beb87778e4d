#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "harrod/domain.hpp"

// Independent numerical engine used as the oracle against every closed form:
// a guarded fourth-order one-step integrator for scalar linear ODEs with
// variable coefficients, adaptive Simpson quadrature, a bisection/Newton
// hybrid root finder and constrained polynomial least squares.

namespace harrod {

// ---------------------------------------------------------------------------
// Rate functions and ODE integration
// ---------------------------------------------------------------------------

/// Right-hand side of dK/dtau = r(tau) K. The optional denominator contract
/// exposes the quantity whose vanishing signals finite-time blow-up; the
/// integrator refuses to evaluate the rate where it drops below the
/// configured floor.
struct RateFunction {
  std::function<double(double)> rate;
  std::function<double(double)> denominator;  // empty when the rate is global
};

struct OdeControls {
  double rel_tol = 1e-8;
  double max_step = 0.01;
  double denominator_floor = 1e-6;
};

enum class StopReason { ReachedHorizon, GuardTripped };

struct OdeSolution {
  std::vector<double> grid;
  std::vector<double> capital;
  StopReason stop = StopReason::ReachedHorizon;
  double last_safe_tau = 0.0;
  std::optional<double> last_denominator;
};

namespace detail {

inline double rk4_step(const std::function<double(double)>& r, double tau,
                       double y, double h) {
  const double k1 = r(tau) * y;
  const double k2 = r(tau + 0.5 * h) * (y + 0.5 * h * k1);
  const double k3 = r(tau + 0.5 * h) * (y + 0.5 * h * k2);
  const double k4 = r(tau + h) * (y + h * k3);
  return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace detail

/// Integrates dK/dtau = r(tau) K from K(0) = k0 up to the horizon with
/// classic RK4 and step halving: each step is taken once whole and twice
/// halved, the Richardson difference estimates the local error, and the step
/// is halved until the estimate stays below rel_tol relative to the state.
/// When a denominator contract is supplied the integration stops before any
/// point where it drops below denominator_floor and reports GuardTripped
/// together with the last safe tau.
inline OdeSolution integrate_linear_ode(const RateFunction& f, double k0,
                                        double horizon,
                                        const OdeControls& controls = {}) {
  if (!f.rate) throw validation_error("rate", "rate function must be callable");
  if (!(k0 > 0.0) || !std::isfinite(k0))
    throw validation_error("k0", "initial capital must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw validation_error("horizon", "horizon must be positive");
  if (!(controls.rel_tol > 0.0) || !(controls.max_step > 0.0) ||
      !(controls.denominator_floor > 0.0))
    throw validation_error("controls", "tolerances and steps must be positive");

  const bool guarded = static_cast<bool>(f.denominator);
  const auto safe = [&](double t) {
    const double d = f.denominator(t);
    if (!std::isfinite(d))
      throw numeric_error("integrate_linear_ode: denominator contract "
                          "evaluated to a non-finite value");
    return d >= controls.denominator_floor;
  };

  OdeSolution out;
  out.grid.push_back(0.0);
  out.capital.push_back(k0);

  if (guarded && !safe(0.0)) {
    out.stop = StopReason::GuardTripped;
    out.last_safe_tau = 0.0;
    out.last_denominator = f.denominator(0.0);
    return out;
  }

  double tau = 0.0;
  double y = k0;
  double h = std::min(controls.max_step, horizon);

  while (tau < horizon) {
    const double remaining = horizon - tau;
    const double h_min = 1e-13 * std::max(1.0, tau);
    if (remaining <= h_min) {
      // below time resolution: snap the final node onto the horizon
      out.grid.back() = horizon;
      tau = horizon;
      break;
    }
    double step = std::min(h, remaining);

    if (guarded) {
      // shrink until every sample point of the step is on the safe side
      bool ok = false;
      while (step >= h_min) {
        ok = safe(tau + 0.25 * step) && safe(tau + 0.5 * step) &&
             safe(tau + 0.75 * step) && safe(tau + step);
        if (ok) break;
        step *= 0.5;
      }
      if (!ok) {
        out.stop = StopReason::GuardTripped;
        break;
      }
    }

    const double whole = detail::rk4_step(f.rate, tau, y, step);
    double halved = detail::rk4_step(f.rate, tau, y, 0.5 * step);
    halved = detail::rk4_step(f.rate, tau + 0.5 * step, halved, 0.5 * step);
    if (!std::isfinite(whole) || !std::isfinite(halved))
      throw numeric_error(
          "integrate_linear_ode: non-finite rate evaluation outside the "
          "declared blow-up");

    const double err = std::abs(halved - whole) / 15.0;
    const double scale =
        std::max({std::abs(halved), std::abs(y), 1e-300});
    if (err <= controls.rel_tol * scale) {
      const bool final_step =
          remaining - step <= 1e-12 * std::max(1.0, std::abs(horizon));
      tau = final_step ? horizon : tau + step;
      y = halved;
      out.grid.push_back(tau);
      out.capital.push_back(y);
      if (err * 64.0 < controls.rel_tol * scale)
        h = std::min(2.0 * step, controls.max_step);
      else
        h = step;
    } else {
      h = 0.5 * step;
      if (h < h_min)
        throw numeric_error("integrate_linear_ode: step size underflow while "
                            "chasing the error tolerance");
    }
  }

  out.last_safe_tau = out.grid.back();
  if (guarded) out.last_denominator = f.denominator(out.grid.back());
  return out;
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

namespace detail {

inline double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double m, double b, double fa,
                               double fm, double fb, double whole, double tol,
                               int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm))
    throw numeric_error("quadrature: integrand evaluated to a non-finite value");
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0)
    throw numeric_error("quadrature: refinement limit reached before the "
                        "requested tolerance");
  return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive composite Simpson integral of f over [a, b] with absolute error
/// below abs_tol. Exact (to rounding) on polynomials of degree <= 3.
inline double quadrature(const std::function<double(double)>& f, double a,
                         double b, double abs_tol) {
  if (!f) throw validation_error("f", "integrand must be callable");
  if (!std::isfinite(a) || !std::isfinite(b) || a > b)
    throw validation_error("interval", "need finite bounds with a <= b");
  if (!(abs_tol > 0.0)) throw validation_error("abs_tol", "must be positive");
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb))
    throw numeric_error("quadrature: integrand evaluated to a non-finite value");
  const double whole = detail::simpson(fa, fm, fb, a, b);
  return detail::adaptive_simpson(f, a, m, b, fa, fm, fb, whole, abs_tol, 60);
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

/// Finds a root of g inside [lo, hi]. Bisection narrows the bracket below
/// abs_tol; when a derivative is supplied a short Newton polish sharpens the
/// result, accepted only if it stays inside the bracket and does not worsen
/// the residual. Both stages are invariant under rescaling g by a positive
/// constant.
inline double find_root(const std::function<double(double)>& g, double lo,
                        double hi, double abs_tol,
                        const std::function<double(double)>& dg = {}) {
  if (!g) throw validation_error("g", "function must be callable");
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo >= hi)
    throw validation_error("bracket", "need finite bounds with lo < hi");
  if (!(abs_tol > 0.0)) throw validation_error("abs_tol", "must be positive");

  const auto eval = [&](double x) {
    const double v = g(x);
    if (!std::isfinite(v))
      throw numeric_error("find_root: function evaluated to a non-finite value");
    return v;
  };

  double a = lo, b = hi;
  double ga = eval(a), gb = eval(b);
  if (ga == 0.0) return a;
  if (gb == 0.0) return b;
  if ((ga < 0.0) == (gb < 0.0))
    throw bracket_error("find_root: no sign change over the bracket");

  while (b - a > abs_tol) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;  // bracket exhausted at floating resolution
    const double gm = eval(m);
    if (gm == 0.0) return m;
    if ((gm < 0.0) == (ga < 0.0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
      gb = gm;
    }
  }

  double root = 0.5 * (a + b);
  if (dg) {
    double x = root;
    for (int i = 0; i < 8; ++i) {
      const double gx = eval(x);
      const double slope = dg(x);
      if (!std::isfinite(slope) || slope == 0.0) break;
      const double next = x - gx / slope;
      if (!(next >= lo && next <= hi)) break;
      const bool converged = std::abs(next - x) <= 1e-3 * abs_tol;
      x = next;
      if (converged) break;
    }
    if (std::isfinite(x) && x >= lo && x <= hi &&
        std::abs(eval(x)) <= std::abs(eval(root)))
      root = x;
  }
  return root;
}

// ---------------------------------------------------------------------------
// Constrained polynomial least squares
// ---------------------------------------------------------------------------

/// Least-squares fit of f(tau) = tau + a2 tau^2 + ... + aN tau^N to the
/// observed (tau, g) pairs. The constraints f(0) = 0 and f'(0) = 1 are
/// imposed structurally by the basis choice (no constant term, unit linear
/// term). The normal equations are solved with partially pivoted Gaussian
/// elimination.
inline GrowthLaw fit_constrained_polynomial(
    const std::vector<std::pair<double, double>>& points, int degree) {
  if (degree < 2)
    throw validation_error("degree", "fit degree must be at least 2");
  const int m = degree - 1;  // unknowns a2..aN

  std::vector<double> xs;
  xs.reserve(points.size());
  for (const auto& [t, gv] : points) {
    if (!std::isfinite(t) || !std::isfinite(gv))
      throw validation_error("points", "samples must be finite");
    if (!(t > 0.0))
      throw validation_error("points", "abscissae must be positive");
    xs.push_back(t);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (static_cast<int>(xs.size()) < m)
    throw degenerate_fit_error(
        "fit_constrained_polynomial: need at least degree-1 distinct abscissae");

  // normal equations over the basis tau^2 .. tau^N
  std::vector<double> gram(static_cast<std::size_t>(m) * m, 0.0);
  std::vector<double> rhs(m, 0.0);
  std::vector<double> powers(m);
  for (const auto& [t, gv] : points) {
    powers[0] = t * t;
    for (int j = 1; j < m; ++j) powers[j] = powers[j - 1] * t;
    const double resid = gv - t;
    for (int i = 0; i < m; ++i) {
      rhs[i] += powers[i] * resid;
      for (int j = 0; j < m; ++j)
        gram[static_cast<std::size_t>(i) * m + j] += powers[i] * powers[j];
    }
  }

  // Gaussian elimination with partial pivoting
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  double max_entry = 0.0;
  for (double v : gram) max_entry = std::max(max_entry, std::abs(v));
  const double pivot_floor =
      max_entry * static_cast<double>(m) * std::numeric_limits<double>::epsilon();

  auto at = [&](int r, int c) -> double& {
    return gram[static_cast<std::size_t>(perm[r]) * m + c];
  };
  for (int col = 0; col < m; ++col) {
    int best = col;
    for (int r = col + 1; r < m; ++r)
      if (std::abs(at(r, col)) > std::abs(at(best, col))) best = r;
    std::swap(perm[col], perm[best]);
    std::swap(rhs[col], rhs[best]);
    const double pivot = at(col, col);
    if (!(std::abs(pivot) > pivot_floor))
      throw degenerate_fit_error(
          "fit_constrained_polynomial: rank-deficient design");
    for (int r = col + 1; r < m; ++r) {
      const double factor = at(r, col) / pivot;
      if (factor == 0.0) continue;
      for (int c = col; c < m; ++c) at(r, c) -= factor * at(col, c);
      rhs[r] -= factor * rhs[col];
    }
  }
  std::vector<double> coeffs(m, 0.0);
  for (int r = m - 1; r >= 0; --r) {
    double acc = rhs[r];
    for (int c = r + 1; c < m; ++c) acc -= at(r, c) * coeffs[c];
    coeffs[r] = acc / at(r, r);
  }
  return GrowthLaw(std::move(coeffs));
}

/// Root-mean-square residual of a fitted law against the samples it was
/// fitted to; exposed so callers can judge fit quality.
inline double fit_residual_rms(const GrowthLaw& law,
                               const std::vector<std::pair<double, double>>& points) {
  if (points.empty()) return 0.0;
  double ss = 0.0;
  for (const auto& [t, gv] : points) {
    const double r = gv - law(t);
    ss += r * r;
  }
  return std::sqrt(ss / static_cast<double>(points.size()));
}

}  // namespace harrod
