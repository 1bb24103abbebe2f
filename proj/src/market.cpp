#include "latarb/market.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "latarb/error.hpp"
#include "latarb/numerics.hpp"

namespace latarb::market {
namespace {

double equilibrium_x_s(const LinearMarketPair& p) {
  return (p.a + p.d * p.x_bar - p.c) / (p.b + p.d);
}

double equilibrium_x_l(const LinearMarketPair& p) {
  return (-p.a + p.b * p.x_bar + p.c) / (p.b + p.d);
}

[[noreturn]] void inadmissible(const std::string& why) {
  throw Error(ErrorCode::InadmissibleParameters, "inadmissible market parameters: " + why);
}

}  // namespace

void LinearMarketPair::validate() const {
  if (!(a > 0.0 && b > 0.0 && c > 0.0 && d > 0.0 && x_bar > 0.0)) {
    inadmissible("a, b, c, d and x_bar must be strictly positive");
  }
  if (!(b > d)) inadmissible("liquidity dominance requires b > d");
  const double xs = equilibrium_x_s(*this);
  const double xl = equilibrium_x_l(*this);
  if (!(xs > 0.0) || !(xl > 0.0)) {
    std::ostringstream os;
    os << "equilibrium holdings must be positive (x_s=" << xs << ", x_l=" << xl << ")";
    inadmissible(os.str());
  }
}

LinearMarketPair LinearMarketPair::from_price_impact(double p0, double x_s, double x_l,
                                                     double impact_s_bp,
                                                     double impact_l_bp,
                                                     double reference_qty) {
  LinearMarketPair pair;
  pair.b = impact_s_bp * 1e-4 * p0 / reference_qty;
  pair.d = impact_l_bp * 1e-4 * p0 / reference_qty;
  pair.a = p0 + pair.b * x_s;
  pair.c = p0 + pair.d * x_l;
  pair.x_bar = x_s + x_l;
  pair.validate();
  return pair;
}

DemandDensity DemandDensity::constant(double value, double p_lo, double p_hi) {
  return {[value](double) { return value; }, p_lo, p_hi};
}

EquilibriumState solve_equilibrium(const LinearMarketPair& pair) {
  pair.validate();
  EquilibriumState eq;
  eq.x_s = equilibrium_x_s(pair);
  eq.x_l = equilibrium_x_l(pair);
  eq.p0 = pair.a - pair.b * eq.x_s;
  return eq;
}

OrderSplit split_order(const LinearMarketPair& pair, const EquilibriumState& eq,
                       double x_tilde) {
  if (x_tilde < 0.0) {
    throw Error(ErrorCode::InvalidConfig, "order quantity must be nonnegative");
  }
  // x_tilde = (p* - p0)(1/b + 1/d)
  const double rise = x_tilde / (1.0 / pair.b + 1.0 / pair.d);
  OrderSplit split;
  split.p_star = eq.p0 + rise;
  split.x_s_buy = rise / pair.b;
  split.x_l_buy = rise / pair.d;
  // Buying removes holdings; a curve runs out once its price reaches its intercept.
  if (split.x_s_buy > eq.x_s || split.x_l_buy > eq.x_l) {
    std::ostringstream os;
    os << "order of " << x_tilde << " shares would push the price to " << split.p_star
       << ", beyond the range of the demand curves (max " << std::min(pair.a, pair.c)
       << ")";
    throw Error(ErrorCode::OrderTooLarge, os.str());
  }
  return split;
}

ExpenditureTriple expenditures(const LinearMarketPair& pair, const EquilibriumState& eq,
                               double p_star) {
  if (p_star < eq.p0) {
    throw Error(ErrorCode::InvalidConfig, "p_star must not be below the equilibrium price");
  }
  const double p0 = eq.p0;
  const double inv_b = 1.0 / pair.b;
  const double inv_d = 1.0 / pair.d;
  const double half_sq = 0.5 * (p_star - p0) * (p_star + p0);
  ExpenditureTriple e;
  e.e_sim = half_sq * (inv_b + inv_d);
  const auto excess = excess_expenditures(pair, eq, p_star);
  e.e_l = e.e_sim + excess.e_l;
  e.e_s = e.e_sim + excess.e_s;
  return e;
}

ExpenditureTriple excess_expenditures(const LinearMarketPair& pair, const EquilibriumState& eq,
                                      double p_star) {
  if (p_star < eq.p0) {
    throw Error(ErrorCode::InvalidConfig, "p_star must not be below the equilibrium price");
  }
  // The revealed venue's shares are bought at p_star instead of along the curve:
  // the surplus is a triangle of height (p_star - p0) and base (p_star - p0)/slope.
  const double half_rise_sq = 0.5 * (p_star - eq.p0) * (p_star - eq.p0);
  return {0.0, half_rise_sq / pair.b, half_rise_sq / pair.d};
}

ExpenditureTriple expenditures_general(const DemandDensity& f_l, const DemandDensity& f_s,
                                       double p0, double p_star) {
  if (p_star < p0) {
    throw Error(ErrorCode::InvalidConfig, "p_star must not be below p0");
  }
  for (const DemandDensity* f : {&f_l, &f_s}) {
    if (p0 < f->p_lo || p_star > f->p_hi) {
      throw Error(ErrorCode::InvalidConfig, "price interval outside the density's domain");
    }
  }
  if (p_star == p0) return {};

  auto checked_l = [&](double p) {
    const double l = f_l.density(p);
    const double s = f_s.density(p);
    if (!(l > s)) {
      std::ostringstream os;
      os << "liquidity dominance violated at P=" << p << " (f_L=" << l << ", f_S=" << s
         << ")";
      throw Error(ErrorCode::DominanceViolated, os.str());
    }
    return l;
  };

  const double cost_l = numerics::integrate([&](double p) { return p * checked_l(p); }, p0, p_star);
  const double cost_s = numerics::integrate([&](double p) { return p * f_s.density(p); }, p0, p_star);
  const double qty_l = numerics::integrate([&](double p) { return checked_l(p); }, p0, p_star);
  const double qty_s = numerics::integrate(f_s.density, p0, p_star);

  ExpenditureTriple e;
  e.e_sim = cost_l + cost_s;
  e.e_l = cost_l + p_star * qty_s;
  e.e_s = p_star * qty_l + cost_s;
  return e;
}

}  // namespace latarb::market
