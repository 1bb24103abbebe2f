#pragma once

#include <cmath>
#include <functional>
#include <numbers>

namespace latarb::numerics {

/// Standard normal CDF via erfc (absolute error well below 1e-12).
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

inline double clamp_probability(double p) { return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p); }

struct QuadratureOptions {
  double abs_tol = 1e-10;
  int max_depth = 40;
};

/// Adaptive Simpson quadrature of `f` over [lo, hi]. Returns 0 for an empty
/// interval and the negated integral when hi < lo.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 QuadratureOptions options = {});

struct Minimum {
  double x;
  double value;
};

/// Golden-section search for the minimum of a unimodal `f` on [lo, hi];
/// stops once the bracket is narrower than `tol`.
Minimum golden_section_minimize(const std::function<double(double)>& f, double lo,
                                double hi, double tol);

}  // namespace latarb::numerics
