#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Shared domain types for the Harrod growth-model toolkit: validated model
// parameters, trajectories, crisis reports, growth laws and scenario
// descriptions. Everything here is an immutable value type; construction
// validates, afterwards values can be shared freely across threads.

namespace harrod {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Base class of every error thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A named input failed validation; carries the field name.
class validation_error : public error {
 public:
  validation_error(std::string field, const std::string& what)
      : error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A configuration document could not be parsed; carries the line number.
class parse_error : public error {
 public:
  parse_error(int line, const std::string& what)
      : error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A numerical routine left its valid domain (non-finite values, step
/// underflow, unreachable tolerance).
class numeric_error : public error {
 public:
  using error::error;
};

/// Root bracketing failed: no sign change over the supplied interval.
class bracket_error : public error {
 public:
  using error::error;
};

/// The least-squares design is rank deficient.
class degenerate_fit_error : public error {
 public:
  using error::error;
};

/// A discrete recurrence has no bounded solution for the given parameters.
class divergent_recurrence_error : public error {
 public:
  using error::error;
};

/// Observations do not cover the event that was asked for.
class insufficient_observation_error : public error {
 public:
  using error::error;
};

/// Evaluation was requested at or past the finite-time singularity.
class past_crisis_error : public error {
 public:
  past_crisis_error(double crisis_time, const std::string& what)
      : error(what), crisis_time_(crisis_time) {}
  double crisis_time() const noexcept { return crisis_time_; }

 private:
  double crisis_time_;
};

// ---------------------------------------------------------------------------
// Model parameters
// ---------------------------------------------------------------------------

/// Baseline parameter bundle. mu is the invested share of income, nu the
/// number of years over which accumulated income counterbalances the capital,
/// k0 the initial capital. sigma, y0 and i0 are derived once at construction
/// so a single rounding convention applies everywhere.
struct ModelParams {
  double mu = 0.0;
  double nu = 0.0;
  double k0 = 0.0;
  double sigma = 0.0;  // mu / nu
  double y0 = 0.0;     // k0 / nu
  double i0 = 0.0;     // sigma * k0 == mu * y0

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

inline ModelParams make_params(double mu, double nu, double k0) {
  if (!std::isfinite(mu) || mu <= 0.0 || mu >= 1.0)
    throw validation_error("mu", "investment share must lie in (0, 1)");
  if (!std::isfinite(nu) || nu <= 0.0)
    throw validation_error("nu", "counterbalance period must be positive");
  if (!std::isfinite(k0) || k0 <= 0.0)
    throw validation_error("k0", "initial capital must be positive");
  ModelParams p;
  p.mu = mu;
  p.nu = nu;
  p.k0 = k0;
  p.sigma = mu / nu;
  p.y0 = k0 / nu;
  p.i0 = mu * p.y0;  // keeps i0 == mu * y0 exact in floating point
  return p;
}

// ---------------------------------------------------------------------------
// Variants and crisis reporting
// ---------------------------------------------------------------------------

enum class Variant {
  LegacyExponential,
  Discrete,
  Continuous,
  Generalized,
  VariableMu,
  Amortized,
  Cumulative,
};

inline std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::LegacyExponential: return "legacy-exponential";
    case Variant::Discrete: return "discrete";
    case Variant::Continuous: return "continuous";
    case Variant::Generalized: return "generalized";
    case Variant::VariableMu: return "variable-mu";
    case Variant::Amortized: return "amortized";
    case Variant::Cumulative: return "cumulative";
  }
  return "unknown";
}

inline std::optional<Variant> variant_from_name(std::string_view name) {
  for (Variant v : {Variant::LegacyExponential, Variant::Discrete,
                    Variant::Continuous, Variant::Generalized,
                    Variant::VariableMu, Variant::Amortized,
                    Variant::Cumulative}) {
    if (variant_name(v) == name) return v;
  }
  return std::nullopt;
}

enum class CrisisMethod { Analytic, PolynomialRoot, IntegratorGuard };

inline std::string_view crisis_method_name(CrisisMethod m) {
  switch (m) {
    case CrisisMethod::Analytic: return "analytic";
    case CrisisMethod::PolynomialRoot: return "polynomial-root";
    case CrisisMethod::IntegratorGuard: return "integrator-guard";
  }
  return "unknown";
}

/// Outcome of crisis detection for one model variant.
struct CrisisReport {
  Variant variant = Variant::Continuous;
  /// Empty means "none within horizon".
  std::optional<double> crisis_time;
  CrisisMethod method = CrisisMethod::Analytic;
  /// Value of the blowing-up denominator at the last safe grid point.
  std::optional<double> denominator_margin;
  /// How far the search looked when no crisis was found.
  std::optional<double> searched_up_to;
  /// Set when the report comes from a fitted growth law rather than
  /// first-principles parameters.
  bool extrapolated = false;
};

// ---------------------------------------------------------------------------
// Trajectory
// ---------------------------------------------------------------------------

/// A time grid with aligned stock, intensity and realized (running-integral)
/// series. All series have the same length as the grid; income equals
/// consumption plus investment at every point and realized_investment equals
/// realized_capital (both integrate the investment intensity).
struct Trajectory {
  std::vector<double> grid;
  std::vector<double> capital;
  std::vector<double> investment;
  std::vector<double> income;
  std::vector<double> consumption;
  std::vector<double> realized_income;
  std::vector<double> realized_capital;
  std::vector<double> realized_consumption;
  std::vector<double> realized_investment;

  std::size_t size() const noexcept { return grid.size(); }
  bool empty() const noexcept { return grid.empty(); }
};

// ---------------------------------------------------------------------------
// Growth law
// ---------------------------------------------------------------------------

/// Polynomial accumulation schedule f(tau) = tau + sum_{n=2}^{N} a_n tau^n.
/// The constant term is fixed at 0 and the linear coefficient at 1, so
/// f(0) = 0 and f'(0) = 1 hold by construction. The default law is the
/// identity f(tau) = tau.
class GrowthLaw {
 public:
  GrowthLaw() = default;

  explicit GrowthLaw(std::vector<double> higher_coefficients)
      : coeffs_(std::move(higher_coefficients)) {
    for (double c : coeffs_) {
      if (!std::isfinite(c))
        throw validation_error("growth_law", "coefficients must be finite");
    }
  }

  double operator()(double tau) const {
    double inner = 0.0;  // a2 + a3 tau + ... by Horner
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
      inner = *it + tau * inner;
    return tau * (1.0 + tau * inner);
  }

  /// df/dtau.
  double slope(double tau) const {
    double inner = 0.0;  // sum_{n>=2} n a_n tau^{n-2}
    for (std::size_t j = coeffs_.size(); j-- > 0;)
      inner = static_cast<double>(j + 2) * coeffs_[j] + tau * inner;
    return 1.0 + tau * inner;
  }

  /// Polynomial degree N (1 for the identity law).
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) + 1; }

  /// Coefficients a2..aN.
  const std::vector<double>& higher_coefficients() const noexcept {
    return coeffs_;
  }

  bool is_identity() const noexcept {
    for (double c : coeffs_)
      if (c != 0.0) return false;
    return true;
  }

  friend bool operator==(const GrowthLaw&, const GrowthLaw&) = default;

 private:
  std::vector<double> coeffs_;
};

// ---------------------------------------------------------------------------
// Investment-share schedule
// ---------------------------------------------------------------------------

/// Time-dependent investment share mu(tau). Three representations: a
/// constant, a left-continuous piecewise-constant table, or a polynomial in
/// tau clamped into (0, 1) so evaluation is total for every tau >= 0.
class MuSchedule {
 public:
  enum class Kind { Constant, Piecewise, Polynomial };

  // Polynomial values are clamped into [kClampLo, kClampHi].
  static constexpr double kClampLo = 1e-6;
  static constexpr double kClampHi = 1.0 - 1e-6;

  static MuSchedule constant(double mu) {
    require_share("mu_schedule", mu);
    MuSchedule s;
    s.kind_ = Kind::Constant;
    s.constant_ = mu;
    return s;
  }

  /// steps are (time, value) pairs; times strictly increasing, first time 0.
  /// The value attached to a time applies on the half-open interval up to and
  /// excluding the next breakpoint; at a breakpoint the previous value still
  /// holds (left continuity).
  static MuSchedule piecewise(std::vector<std::pair<double, double>> steps) {
    if (steps.empty())
      throw validation_error("mu_schedule", "piecewise table must be non-empty");
    if (steps.front().first != 0.0)
      throw validation_error("mu_schedule", "first breakpoint must be at time 0");
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (!std::isfinite(steps[i].first))
        throw validation_error("mu_schedule", "breakpoints must be finite");
      if (i > 0 && steps[i].first <= steps[i - 1].first)
        throw validation_error("mu_schedule",
                               "breakpoints must be strictly increasing");
      require_share("mu_schedule", steps[i].second);
    }
    MuSchedule s;
    s.kind_ = Kind::Piecewise;
    s.steps_ = std::move(steps);
    return s;
  }

  /// coeffs are c0, c1, ... of c0 + c1 tau + ...; c0 must be a valid share.
  static MuSchedule polynomial(std::vector<double> coeffs) {
    if (coeffs.empty())
      throw validation_error("mu_schedule", "polynomial needs coefficients");
    for (double c : coeffs)
      if (!std::isfinite(c))
        throw validation_error("mu_schedule", "coefficients must be finite");
    require_share("mu_schedule", coeffs.front());
    MuSchedule s;
    s.kind_ = Kind::Polynomial;
    s.poly_ = std::move(coeffs);
    return s;
  }

  double operator()(double tau) const {
    switch (kind_) {
      case Kind::Constant:
        return constant_;
      case Kind::Piecewise: {
        // last breakpoint strictly before tau owns the value
        std::size_t k = 0;
        for (std::size_t i = 1; i < steps_.size(); ++i) {
          if (steps_[i].first < tau) k = i;
        }
        return steps_[k].second;
      }
      case Kind::Polynomial: {
        double v = 0.0;
        for (auto it = poly_.rbegin(); it != poly_.rend(); ++it)
          v = *it + tau * v;
        if (!std::isfinite(v))
          throw validation_error("mu_schedule",
                                 "polynomial evaluated to a non-finite value");
        if (v < kClampLo) return kClampLo;
        if (v > kClampHi) return kClampHi;
        return v;
      }
    }
    return constant_;
  }

  Kind kind() const noexcept { return kind_; }
  double constant_value() const noexcept { return constant_; }
  const std::vector<std::pair<double, double>>& steps() const noexcept {
    return steps_;
  }
  const std::vector<double>& poly_coefficients() const noexcept {
    return poly_;
  }

  friend bool operator==(const MuSchedule&, const MuSchedule&) = default;

 private:
  static void require_share(const char* field, double v) {
    if (!std::isfinite(v) || v <= 0.0 || v >= 1.0)
      throw validation_error(field, "share values must lie in (0, 1)");
  }

  Kind kind_ = Kind::Constant;
  double constant_ = 0.5;
  std::vector<std::pair<double, double>> steps_;
  std::vector<double> poly_;
};

// ---------------------------------------------------------------------------
// Scenario configuration
// ---------------------------------------------------------------------------

struct Tolerances {
  double ode_rel = 1e-8;
  double root_abs = 1e-9;
  double identity_abs = 1e-9;

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

enum class OutputKind { Csv, Report, Svg };

inline std::string_view output_kind_name(OutputKind k) {
  switch (k) {
    case OutputKind::Csv: return "csv";
    case OutputKind::Report: return "report";
    case OutputKind::Svg: return "svg";
  }
  return "unknown";
}

/// Declarative description of one run. Variant-specific fields are present
/// exactly when the variant requires them; the scenario parser enforces this.
struct ScenarioConfig {
  Variant variant = Variant::Continuous;
  ModelParams params;
  std::optional<double> alpha;           // amortized
  std::optional<double> rho;             // cumulative
  std::optional<GrowthLaw> growth_law;   // generalized
  std::optional<MuSchedule> mu_schedule; // variable-mu
  double horizon = 0.0;
  double max_step = 0.01;
  Tolerances tolerances;
  std::vector<OutputKind> outputs{OutputKind::Csv, OutputKind::Report};

  bool wants(OutputKind k) const {
    for (OutputKind o : outputs)
      if (o == k) return true;
    return false;
  }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

}  // namespace harrod
