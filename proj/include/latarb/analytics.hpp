#pragma once

#include <cstdint>

#include "latarb/latency.hpp"
#include "latarb/market.hpp"

namespace latarb::analytics {

/// Moments of the latency gap x = l_S - l_L when the S-order is sent `delta`
/// ms after the L-order (delta < 0 delays the L-order instead).
struct DelayAnalytics {
  double gamma = 0.0;  // E[l_S - l_L] = mu_S - mu_L + delta
  double alpha = 0.0;  // 1 / Var(l_S - l_L)
  double delta = 0.0;
};

struct OutcomeProbabilities {
  double pi_sim = 0.0;
  double pi_l = 0.0;  // revealed on L first (l_S - l_L > H)
  double pi_s = 0.0;  // revealed on S first (l_L - l_S > H)
};

/// Expenditures of the three outcomes. Only differences to e_sim matter for
/// the delay decision.
struct CostProfile {
  double e_sim = 0.0;
  double e_l = 0.0;
  double e_s = 0.0;

  static CostProfile from(const market::ExpenditureTriple& e) { return {e.e_sim, e.e_l, e.e_s}; }
  market::ExpenditureTriple triple() const { return {e_sim, e_l, e_s}; }

  double excess_l() const { return e_l - e_sim; }
  double excess_s() const { return e_s - e_sim; }
  /// (E_S - E_sim) / (E_L - E_sim)
  double ratio() const { return excess_s() / excess_l(); }
};

/// Throws Error(WrongDistributionKind) unless both legs are Gaussian.
DelayAnalytics delay_analytics(const latency::LatencyPair& pair, double delta);

OutcomeProbabilities outcome_probs_gaussian(const latency::LatencyPair& pair, double delta);

double expected_cost(const OutcomeProbabilities& probs, const CostProfile& costs);

/// Closed-form optimal delay for Gaussian legs:
///   delta* = mu_L - mu_S + (sigma_S^2 + sigma_L^2) / (2H) * ln(ratio).
/// Throws Error(InvalidRatio) unless both excess costs are positive.
double optimal_delay_closed_form(const latency::LatencyPair& pair, const CostProfile& costs);

struct NumericDelayOptions {
  double grid_step = 1.0;    // ms
  double tolerance = 0.01;   // golden-section bracket width, ms
  // Monte Carlo settings, used only when a leg is empirical.
  std::uint64_t replications = 20000;
  std::uint64_t seed = 1;
  latency::SamplingMode sampling = latency::SamplingMode::physical;
};

struct DelayOptimum {
  double delta = 0.0;
  double expected_cost = 0.0;
  bool interior = true;  // false when the minimizer sits on the search boundary
  double search_lo = 0.0;
  double search_hi = 0.0;
};

/// Minimizes expected cost over delta in [-(mu_L + 6 sigma_L), mu_L + 6 sigma_L]
/// by a 1 ms grid followed by golden-section refinement. Gaussian legs use the
/// closed-form probabilities; any empirical leg switches to a Monte Carlo
/// estimate with common random numbers across candidate delays.
DelayOptimum optimal_delay_numeric(const latency::LatencyPair& pair, const CostProfile& costs,
                                   const NumericDelayOptions& options = {});

/// Search interval used by optimal_delay_numeric.
std::pair<double, double> delay_search_interval(const latency::LatencyPair& pair);

/// phi(sqrt(a)(-g+H)) (E_L - E_sim) - phi(sqrt(a)(-g-H)) (E_S - E_sim); zero at delta*.
double foc_residual(const latency::LatencyPair& pair, const CostProfile& costs, double delta);

struct ProbabilityDerivatives {
  double dpi_sim = 0.0;
  double dpi_l = 0.0;
  double dpi_s = 0.0;

  /// dpi_sim < 0, dpi_l > 0, dpi_s < 0 and |dpi_l| > |dpi_s|.
  bool signs_hold() const;
};

/// Central finite differences (per ms) of the Gaussian outcome probabilities.
ProbabilityDerivatives probability_derivatives(const latency::LatencyPair& pair, double delta,
                                               double step = 0.01);

ProbabilityDerivatives derivative_signs_at_optimum(const latency::LatencyPair& pair,
                                                   const CostProfile& costs);

/// P(|l_S + delta - l_L| <= H), exact for every combination of leg kinds.
double prob_gap_within(const latency::LatencyPair& pair, double delta = 0.0);

/// Lower-bound expression for simultaneous execution with timed orders sent at t=0:
///   F_S(T+H) F_L(T+H) + P(|l_S - l_L| <= H) (1 - F_S(T+H) F_L(T+H)).
/// The second term treats the two events as independent, so the expression can
/// exceed the true probability (see timed_outcome_probs).
double sim_bound_timed(const latency::LatencyPair& pair, double t_exec);

/// F_S(T+H) F_L(T+H): a guaranteed lower bound on simultaneous execution.
double sim_product_bound(const latency::LatencyPair& pair, double t_exec);

/// Exact outcome probabilities when both legs are timed orders for t_exec and
/// execute at max(t_exec, arrival). Quadrature for Gaussian legs, enumeration
/// for empirical ones.
OutcomeProbabilities timed_outcome_probs(const latency::LatencyPair& pair, double t_exec);

/// Smallest t_exec (to 0.01 ms) with sim_bound_timed >= target. For target 1
/// returns the larger of the two legs' maximum latencies; throws
/// Error(UnreachableTarget) if either leg is unbounded.
double choose_execution_time(const latency::LatencyPair& pair, double target);

}  // namespace latarb::analytics
