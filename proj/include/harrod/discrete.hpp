#pragma once

#include <cmath>
#include <string_view>
#include <vector>

#include "harrod/domain.hpp"

// The growth model in yearly (difference) form: compound-growth and
// exponential-approximation closed forms, recurrence rollout under both
// investment-timing conventions, and the bookkeeping audit that quantifies
// how the closed forms disagree with the capital-forming sum
// K_n = K_0 + sum_{j=1}^{n} I_j.

namespace harrod {

struct DiscreteSeries {
  int n_max = 0;
  std::vector<double> capital;
  std::vector<double> income;
  std::vector<double> investment;
  std::vector<double> consumption;
};

/// Which closed form supplies the series.
enum class DiscreteSolution {
  CompoundGrowth,      // K_n = K0 (1 + sigma)^n
  ExponentialApprox,   // K_n = K0 e^{sigma n}
};

/// Which capital the yearly investment is drawn from.
enum class InvestmentTiming {
  FromPriorCapital,    // I_n = sigma K_{n-1}
  FromCurrentCapital,  // I_n = sigma K_n
};

inline std::string_view discrete_solution_name(DiscreteSolution s) {
  return s == DiscreteSolution::CompoundGrowth ? "compound" : "exponential-approx";
}

inline std::string_view investment_timing_name(InvestmentTiming t) {
  return t == InvestmentTiming::FromPriorCapital ? "prior-capital"
                                                 : "current-capital";
}

namespace detail {

inline void check_n_max(int n_max) {
  if (n_max < 0)
    throw validation_error("n_max", "year count must be non-negative");
}

}  // namespace detail

/// Closed-form compound-growth series: every flow scales by (1 + sigma)^n.
inline DiscreteSeries discrete_exact(const ModelParams& p, int n_max) {
  detail::check_n_max(n_max);
  DiscreteSeries s;
  s.n_max = n_max;
  s.capital.reserve(n_max + 1);
  s.income.reserve(n_max + 1);
  s.investment.reserve(n_max + 1);
  s.consumption.reserve(n_max + 1);
  const double growth = 1.0 + p.sigma;
  for (int n = 0; n <= n_max; ++n) {
    const double factor = std::pow(growth, n);
    s.capital.push_back(p.k0 * factor);
    s.income.push_back(p.y0 * factor);
    s.investment.push_back(p.i0 * factor);
    s.consumption.push_back(s.income.back() - s.investment.back());
  }
  return s;
}

/// Small-sigma replacement of the compound factor by e^{sigma n}.
inline DiscreteSeries discrete_approx(const ModelParams& p, int n_max) {
  detail::check_n_max(n_max);
  DiscreteSeries s;
  s.n_max = n_max;
  for (int n = 0; n <= n_max; ++n) {
    const double factor = std::exp(p.sigma * n);
    s.capital.push_back(p.k0 * factor);
    s.income.push_back(p.y0 * factor);
    s.investment.push_back(p.i0 * factor);
    s.consumption.push_back(s.income.back() - s.investment.back());
  }
  return s;
}

/// Year-by-year rollout of K_n = K_{n-1} + I_n. The two timing conventions
/// produce different growth: prior-capital gives K0 (1 + sigma)^n, while
/// current-capital gives K0 / (1 - sigma)^n and requires sigma < 1.
/// The series are computed by recurrence, never from the closed forms, so
/// the two paths can serve as mutual oracles.
inline DiscreteSeries recurrence_simulate(const ModelParams& p, int n_max,
                                          InvestmentTiming timing) {
  detail::check_n_max(n_max);
  if (timing == InvestmentTiming::FromCurrentCapital && p.sigma >= 1.0)
    throw divergent_recurrence_error(
        "recurrence_simulate: current-capital convention diverges for sigma >= 1");
  DiscreteSeries s;
  s.n_max = n_max;
  s.capital.push_back(p.k0);
  s.income.push_back(p.y0);
  s.investment.push_back(p.i0);
  s.consumption.push_back(p.y0 - p.i0);
  for (int n = 1; n <= n_max; ++n) {
    const double prior = s.capital.back();
    double invest, capital;
    if (timing == InvestmentTiming::FromPriorCapital) {
      invest = p.sigma * prior;
      capital = prior + invest;
    } else {
      capital = prior / (1.0 - p.sigma);
      invest = p.sigma * capital;
    }
    const double income = capital / p.nu;
    s.capital.push_back(capital);
    s.investment.push_back(invest);
    s.income.push_back(income);
    s.consumption.push_back(income - invest);
  }
  return s;
}

struct ConsistencyAudit {
  double accumulated_investment = 0.0;  // sum_{j=1}^{n} I_j
  double capital_minus_k0 = 0.0;        // K_n - K_0
  double residual = 0.0;                // capital_minus_k0 - accumulated_investment
};

/// Checks the chosen closed form against the capital-forming sum by brute
/// force. Under the current-capital convention with the compound series the
/// residual is -sigma K0 ((1+sigma)^n - 1) in closed form: the accumulated
/// investments overshoot the capital they are supposed to build, which is
/// the quantitative shape of the model's internal contradiction. Under the
/// prior-capital convention the sum telescopes and the residual vanishes.
inline ConsistencyAudit consistency_audit(const ModelParams& p, int n,
                                          DiscreteSolution solution,
                                          InvestmentTiming timing) {
  if (n < 1) throw validation_error("n", "audit needs at least one year");
  const DiscreteSeries series = solution == DiscreteSolution::CompoundGrowth
                                    ? discrete_exact(p, n)
                                    : discrete_approx(p, n);
  ConsistencyAudit audit;
  for (int j = 1; j <= n; ++j) {
    const double basis = timing == InvestmentTiming::FromCurrentCapital
                             ? series.capital[j]
                             : series.capital[j - 1];
    audit.accumulated_investment += p.sigma * basis;
  }
  audit.capital_minus_k0 = series.capital[n] - p.k0;
  audit.residual = audit.capital_minus_k0 - audit.accumulated_investment;
  return audit;
}

}  // namespace harrod
