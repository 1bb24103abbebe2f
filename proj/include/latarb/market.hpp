#pragma once

#include <functional>

namespace latarb::market {

// Two linear venues: P_S = a - b*X_S on the small exchange S and
// P_L = c - d*X_L on the large exchange L, with X_S + X_L = x_bar.
// Prices and quantities are dimensionless doubles.
struct LinearMarketPair {
  double a = 0.0;      // price intercept of S
  double b = 0.0;      // price slope of S
  double c = 0.0;      // price intercept of L
  double d = 0.0;      // price slope of L
  double x_bar = 0.0;  // total outstanding quantity

  /// Throws Error(InadmissibleParameters) unless all parameters are positive,
  /// b > d, and both equilibrium holdings are positive.
  void validate() const;

  /// Builds a pair whose equilibrium sits at price `p0` with holdings
  /// (x_s, x_l), calibrated so that buying `reference_qty` moves the price
  /// by `impact_s_bp` basis points on S and `impact_l_bp` on L.
  static LinearMarketPair from_price_impact(double p0, double x_s, double x_l,
                                            double impact_s_bp, double impact_l_bp,
                                            double reference_qty);
};

struct EquilibriumState {
  double p0 = 0.0;
  double x_s = 0.0;
  double x_l = 0.0;
};

struct OrderSplit {
  double p_star = 0.0;
  double x_l_buy = 0.0;
  double x_s_buy = 0.0;
};

/// Investor expenditure under the three execution outcomes.
struct ExpenditureTriple {
  double e_sim = 0.0;  // both legs execute together
  double e_l = 0.0;    // L reveals the trade; HFT front-runs the S leg
  double e_s = 0.0;    // S reveals the trade; HFT front-runs the L leg
};

/// Offered-share density f(P) on a price interval.
struct DemandDensity {
  std::function<double(double)> density;
  double p_lo = 0.0;
  double p_hi = 0.0;

  static DemandDensity constant(double value, double p_lo, double p_hi);
};

EquilibriumState solve_equilibrium(const LinearMarketPair& pair);

/// Splits an order of `x_tilde` shares so both venues end at a common price.
/// Throws Error(OrderTooLarge) if that price would leave either curve's
/// nonnegative-quantity range.
OrderSplit split_order(const LinearMarketPair& pair, const EquilibriumState& eq,
                       double x_tilde);

/// Closed-form expenditures in the linear model for a common limit price p_star.
ExpenditureTriple expenditures(const LinearMarketPair& pair, const EquilibriumState& eq,
                               double p_star);

/// Costs relative to simultaneous execution: {0, E_L - E_sim, E_S - E_sim},
/// computed without cancellation so their ratio is b/d to rounding.
ExpenditureTriple excess_expenditures(const LinearMarketPair& pair, const EquilibriumState& eq,
                                      double p_star);

/// Expenditures for arbitrary densities, evaluated by adaptive quadrature.
/// Throws Error(DominanceViolated) if f_l <= f_s at any quadrature node.
ExpenditureTriple expenditures_general(const DemandDensity& f_l, const DemandDensity& f_s,
                                       double p0, double p_star);

}  // namespace latarb::market
