#include "latarb/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <vector>

#include "latarb/error.hpp"
#include "latarb/numerics.hpp"

namespace latarb::analytics {

using latency::EmpiricalLatency;
using latency::GaussianLatency;
using latency::LatencyModel;
using latency::LatencyPair;
using numerics::normal_cdf;
using numerics::normal_pdf;

namespace {

const GaussianLatency& require_gaussian(const LatencyModel& dist, const char* leg) {
  const auto* g = std::get_if<GaussianLatency>(&dist);
  if (g == nullptr) {
    throw Error(ErrorCode::WrongDistributionKind,
                std::string("closed form needs a Gaussian ") + leg +
                    " leg; use Monte Carlo simulation for empirical latencies");
  }
  return *g;
}

void require_positive_h(const LatencyPair& pair) {
  if (!(pair.h > 0.0)) throw Error(ErrorCode::InvalidConfig, "HFT latency H must be positive");
}

// Standardized arguments of the two tail probabilities:
//   pi_L = 1 - Phi(upper),  pi_S = Phi(lower).
struct Arguments {
  double upper;  // sqrt(alpha) (-gamma + H)
  double lower;  // sqrt(alpha) (-gamma - H)
  double root_alpha;
};

Arguments arguments(const LatencyPair& pair, double delta) {
  const DelayAnalytics da = delay_analytics(pair, delta);
  const double r = std::sqrt(da.alpha);
  return {r * (-da.gamma + pair.h), r * (-da.gamma - pair.h), r};
}

// E[g(max(T, X))] for X distributed as `dist`.
template <class G>
double expect_clamped(const LatencyModel& dist, double t, G&& g) {
  if (const auto* e = std::get_if<EmpiricalLatency>(&dist)) {
    double acc = 0.0;
    for (double x : e->samples()) acc += g(std::max(t, x));
    return acc / static_cast<double>(e->samples().size());
  }
  const auto& gl = std::get<GaussianLatency>(dist);
  const double mu = gl.mu();
  const double sigma = gl.sigma();
  double total = latency::cdf(dist, t) * g(t);
  const double lo = std::max(t, mu - 12.0 * sigma);
  const double hi = mu + 12.0 * sigma;
  if (lo >= hi) return total;
  // Panels of half a standard deviation keep the adaptive rule from
  // skipping over the peak.
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / (0.5 * sigma))));
  const double width = (hi - lo) / panels;
  auto integrand = [&](double x) { return normal_pdf((x - mu) / sigma) / sigma * g(x); };
  for (int i = 0; i < panels; ++i) {
    total += numerics::integrate(integrand, lo + i * width, lo + (i + 1) * width,
                                 {1e-13, 40});
  }
  return total;
}

// Probabilities for the numeric optimizer's Monte Carlo path.
class CommonRandomNumbers {
 public:
  CommonRandomNumbers(const LatencyPair& pair, const NumericDelayOptions& options)
      : h_(pair.h) {
    gaps_.reserve(options.replications);
    for (std::uint64_t i = 0; i < options.replications; ++i) {
      auto rng = latency::replication_rng(options.seed, i);
      const double l_s = latency::sample(pair.dist_s, rng, options.sampling);
      const double l_l = latency::sample(pair.dist_l, rng, options.sampling);
      gaps_.push_back(l_s - l_l);
    }
    std::sort(gaps_.begin(), gaps_.end());
  }

  OutcomeProbabilities at(double delta) const {
    // revealed on L: gap + delta > H; revealed on S: gap + delta < -H
    const auto n = static_cast<double>(gaps_.size());
    const auto above = gaps_.end() - std::upper_bound(gaps_.begin(), gaps_.end(), h_ - delta);
    const auto below = std::lower_bound(gaps_.begin(), gaps_.end(), -h_ - delta) - gaps_.begin();
    OutcomeProbabilities p;
    p.pi_l = static_cast<double>(above) / n;
    p.pi_s = static_cast<double>(below) / n;
    p.pi_sim = 1.0 - p.pi_l - p.pi_s;
    return p;
  }

 private:
  double h_;
  std::vector<double> gaps_;
};

}  // namespace

DelayAnalytics delay_analytics(const LatencyPair& pair, double delta) {
  const auto& s = require_gaussian(pair.dist_s, "S");
  const auto& l = require_gaussian(pair.dist_l, "L");
  DelayAnalytics da;
  da.delta = delta;
  da.gamma = s.mu() - l.mu() + delta;
  da.alpha = 1.0 / (s.sigma() * s.sigma() + l.sigma() * l.sigma());
  return da;
}

OutcomeProbabilities outcome_probs_gaussian(const LatencyPair& pair, double delta) {
  require_positive_h(pair);
  const Arguments z = arguments(pair, delta);
  OutcomeProbabilities p;
  p.pi_l = numerics::clamp_probability(normal_cdf(-z.upper));
  p.pi_s = numerics::clamp_probability(normal_cdf(z.lower));
  // Phi(upper) - Phi(lower), written to stay accurate in either tail.
  p.pi_sim = numerics::clamp_probability(z.lower >= 0.0 ? normal_cdf(-z.lower) - normal_cdf(-z.upper)
                                                        : normal_cdf(z.upper) - normal_cdf(z.lower));
  return p;
}

double expected_cost(const OutcomeProbabilities& probs, const CostProfile& costs) {
  return probs.pi_sim * costs.e_sim + probs.pi_l * costs.e_l + probs.pi_s * costs.e_s;
}

double optimal_delay_closed_form(const LatencyPair& pair, const CostProfile& costs) {
  require_positive_h(pair);
  if (!(costs.excess_l() > 0.0) || !(costs.excess_s() > 0.0)) {
    std::ostringstream os;
    os << "optimal delay needs E_L > E_sim and E_S > E_sim (got " << costs.e_sim << ", "
       << costs.e_l << ", " << costs.e_s << ")";
    throw Error(ErrorCode::InvalidRatio, os.str());
  }
  const auto& s = require_gaussian(pair.dist_s, "S");
  const auto& l = require_gaussian(pair.dist_l, "L");
  const double variance = s.sigma() * s.sigma() + l.sigma() * l.sigma();
  return l.mu() - s.mu() + variance / (2.0 * pair.h) * std::log(costs.ratio());
}

std::pair<double, double> delay_search_interval(const LatencyPair& pair) {
  const double half = latency::mean(pair.dist_l) + 6.0 * latency::stddev(pair.dist_l);
  return {-half, half};
}

DelayOptimum optimal_delay_numeric(const LatencyPair& pair, const CostProfile& costs,
                                   const NumericDelayOptions& options) {
  require_positive_h(pair);
  const bool closed_form = latency::is_gaussian(pair.dist_s) && latency::is_gaussian(pair.dist_l);

  // The objective is E[cost] - E_L, i.e. the expected cost shifted by a
  // constant. The shift keeps tail probabilities representable when pi_L -> 1.
  std::function<double(double)> objective;
  std::optional<CommonRandomNumbers> crn;
  if (closed_form) {
    objective = [&](double delta) {
      const Arguments z = arguments(pair, delta);
      const double not_l = normal_cdf(z.upper);  // 1 - pi_L
      const double pi_s = normal_cdf(z.lower);
      return pi_s * costs.excess_s() - not_l * costs.excess_l();
    };
  } else {
    crn.emplace(pair, options);
    objective = [&](double delta) { return expected_cost(crn->at(delta), costs) - costs.e_l; };
  }

  const auto [lo, hi] = delay_search_interval(pair);
  double best_x = lo;
  double best_f = objective(lo);
  const auto steps = static_cast<long>(std::floor((hi - lo) / options.grid_step));
  for (long i = 1; i <= steps; ++i) {
    const double x = lo + static_cast<double>(i) * options.grid_step;
    const double f = objective(x);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  const double f_hi = objective(hi);
  if (f_hi < best_f) {
    best_f = f_hi;
    best_x = hi;
  }

  const double bracket_lo = std::max(lo, best_x - options.grid_step);
  const double bracket_hi = std::min(hi, best_x + options.grid_step);
  auto refined = numerics::golden_section_minimize(objective, bracket_lo, bracket_hi,
                                                   options.tolerance);
  if (best_f < refined.value) refined = {best_x, best_f};

  DelayOptimum opt;
  opt.delta = refined.x;
  opt.expected_cost = refined.value + costs.e_l;
  opt.search_lo = lo;
  opt.search_hi = hi;
  opt.interior = refined.x - lo > options.grid_step && hi - refined.x > options.grid_step;
  return opt;
}

double foc_residual(const LatencyPair& pair, const CostProfile& costs, double delta) {
  const Arguments z = arguments(pair, delta);
  return normal_pdf(z.upper) * costs.excess_l() - normal_pdf(z.lower) * costs.excess_s();
}

bool ProbabilityDerivatives::signs_hold() const {
  return dpi_sim < 0.0 && dpi_l > 0.0 && dpi_s < 0.0 && std::abs(dpi_l) > std::abs(dpi_s);
}

ProbabilityDerivatives probability_derivatives(const LatencyPair& pair, double delta,
                                               double step) {
  require_positive_h(pair);
  const Arguments up = arguments(pair, delta + step);
  const Arguments down = arguments(pair, delta - step);
  ProbabilityDerivatives d;
  // Differencing 1 - pi_L rather than pi_L keeps precision when pi_L is near 1.
  d.dpi_l = -(normal_cdf(up.upper) - normal_cdf(down.upper)) / (2.0 * step);
  d.dpi_s = (normal_cdf(up.lower) - normal_cdf(down.lower)) / (2.0 * step);
  d.dpi_sim = -(d.dpi_l + d.dpi_s);
  return d;
}

ProbabilityDerivatives derivative_signs_at_optimum(const LatencyPair& pair,
                                                   const CostProfile& costs) {
  return probability_derivatives(pair, optimal_delay_closed_form(pair, costs));
}

double prob_gap_within(const LatencyPair& pair, double delta) {
  const double h = pair.h;
  const auto* es = std::get_if<EmpiricalLatency>(&pair.dist_s);
  const auto* el = std::get_if<EmpiricalLatency>(&pair.dist_l);
  if (es == nullptr && el == nullptr) return outcome_probs_gaussian(pair, delta).pi_sim;

  if (es != nullptr && el != nullptr) {
    const auto& ls = el->samples();
    std::uint64_t hits = 0;
    for (double s : es->samples()) {
      const double x = s + delta;
      hits += static_cast<std::uint64_t>(std::upper_bound(ls.begin(), ls.end(), x + h) -
                                         std::lower_bound(ls.begin(), ls.end(), x - h));
    }
    return static_cast<double>(hits) /
           (static_cast<double>(es->samples().size()) * static_cast<double>(ls.size()));
  }
  // One continuous leg: average its interval probability over the other's samples.
  double acc = 0.0;
  if (es != nullptr) {
    for (double s : es->samples()) {
      acc += latency::cdf(pair.dist_l, s + delta + h) - latency::cdf(pair.dist_l, s + delta - h);
    }
    return acc / static_cast<double>(es->samples().size());
  }
  for (double l : el->samples()) {
    acc += latency::cdf(pair.dist_s, l - delta + h) - latency::cdf(pair.dist_s, l - delta - h);
  }
  return acc / static_cast<double>(el->samples().size());
}

double sim_product_bound(const LatencyPair& pair, double t_exec) {
  return latency::cdf(pair.dist_s, t_exec + pair.h) * latency::cdf(pair.dist_l, t_exec + pair.h);
}

double sim_bound_timed(const LatencyPair& pair, double t_exec) {
  require_positive_h(pair);
  if (t_exec < 0.0) throw Error(ErrorCode::InvalidConfig, "t_exec must be >= 0");
  const double both_early = sim_product_bound(pair, t_exec);
  return numerics::clamp_probability(both_early + prob_gap_within(pair) * (1.0 - both_early));
}

OutcomeProbabilities timed_outcome_probs(const LatencyPair& pair, double t_exec) {
  require_positive_h(pair);
  const double h = pair.h;
  // Executions happen at max(T, arrival). Since max(T, l_L) + H > T,
  // max(T, l_S) exceeds it exactly when l_S does.
  OutcomeProbabilities p;
  p.pi_l = expect_clamped(pair.dist_l, t_exec,
                          [&](double e) { return 1.0 - latency::cdf(pair.dist_s, e + h); });
  p.pi_s = expect_clamped(pair.dist_s, t_exec,
                          [&](double e) { return 1.0 - latency::cdf(pair.dist_l, e + h); });
  p.pi_l = numerics::clamp_probability(p.pi_l);
  p.pi_s = numerics::clamp_probability(p.pi_s);
  p.pi_sim = numerics::clamp_probability(1.0 - p.pi_l - p.pi_s);
  return p;
}

double choose_execution_time(const LatencyPair& pair, double target) {
  if (!(target > 0.0) || target > 1.0) {
    throw Error(ErrorCode::InvalidConfig, "target probability must lie in (0, 1]");
  }
  if (target == 1.0) {
    const auto s = latency::max_support(pair.dist_s);
    const auto l = latency::max_support(pair.dist_l);
    if (!s || !l) {
      throw Error(ErrorCode::UnreachableTarget,
                  "certain simultaneous execution needs latency with finite support");
    }
    return std::max(*s, *l);
  }
  if (sim_bound_timed(pair, 0.0) >= target) return 0.0;
  double lo = 0.0;
  double hi = std::max(1.0, std::max(latency::mean(pair.dist_s), latency::mean(pair.dist_l)));
  while (sim_bound_timed(pair, hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) throw Error(ErrorCode::UnreachableTarget, "target not reached below 1e9 ms");
  }
  while (hi - lo > 0.01) {
    const double mid = 0.5 * (lo + hi);
    (sim_bound_timed(pair, mid) >= target ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace latarb::analytics
