// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria (0 = all pass).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "latarb/analytics.hpp"
#include "latarb/commands.hpp"
#include "latarb/engine.hpp"
#include "latarb/market.hpp"
#include "latarb/numerics.hpp"
#include "latarb/scenario.hpp"
#include "support/random_scenarios.hpp"

namespace {

using namespace latarb;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const fs::path kScenarios = fs::path(LATARB_SOURCE_DIR) / "scenarios";
constexpr std::uint64_t kN = 1000000;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double binomial_se(double p, std::uint64_t n) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

/// |freq - p| within k binomial standard errors. One count of slack covers
/// probabilities so small that their SE is below the resolution 1/n.
bool within_se(double freq, double p, std::uint64_t n, double k = 4.0) {
  return std::abs(freq - p) <= k * binomial_se(p, n) + 1.0 / static_cast<double>(n);
}

bool mc_agrees(const engine::SimReport& r, const analytics::OutcomeProbabilities& p,
               std::uint64_t n) {
  return within_se(r.freq_s, p.pi_s, n) && within_se(r.freq_l, p.pi_l, n) &&
         within_se(r.freq_sim, p.pi_sim, n);
}

engine::SimConfig formula_config(std::uint64_t n, std::uint64_t seed) {
  engine::SimConfig c;
  c.replications = n;
  c.master_seed = seed;
  c.sampling_mode = latency::SamplingMode::allow_negative;
  return c;
}

std::string probs(const analytics::OutcomeProbabilities& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.4f, %.4f, %.4f)", p.pi_s, p.pi_l, p.pi_sim);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> check;
};

cli::Scenario albany() { return cli::load_scenario(kScenarios / "albany.json"); }

Outcome c1_no_delay() {
  const auto t0 = Clock::now();
  const auto sc = albany();
  const auto cf = analytics::outcome_probs_gaussian(sc.latency, 0.0);
  const bool two_dec = std::abs(cf.pi_s - 0.89) <= 0.01 && std::abs(cf.pi_l - 0.07) <= 0.01 &&
                       std::abs(cf.pi_sim - 0.04) <= 0.01;
  const auto mc = engine::run_monte_carlo(sc.costs.triple(), sc.latency,
                                          engine::Strategy::immediate(), formula_config(kN, 1));
  const bool agree = mc_agrees(mc, cf, kN);
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "closed " << probs(cf) << " vs (0.89, 0.07, 0.04) ±0.01: " << (two_dec ? "ok" : "no")
    << "; MC (" << mc.freq_s << ", " << mc.freq_l << ", " << mc.freq_sim
    << ") within 4SE: " << (agree ? "ok" : "no") << "; " << secs << " s";
  return {two_dec && agree && secs < 30.0, d.str()};
}

Outcome c2_optimal_delay() {
  const auto sc = albany();
  const double d_star = analytics::optimal_delay_closed_form(sc.latency, sc.costs);
  const double gamma = analytics::delay_analytics(sc.latency, d_star).gamma;
  const auto cf = analytics::outcome_probs_gaussian(sc.latency, d_star);
  const auto numeric = analytics::optimal_delay_numeric(sc.latency, sc.costs);
  const double foc = analytics::foc_residual(sc.latency, sc.costs, d_star) / sc.costs.excess_s();
  const bool gamma_ok = std::abs(gamma - 84.8) <= 0.1;
  const bool probs_ok = std::abs(cf.pi_s - 0.01) <= 0.01 && std::abs(cf.pi_l - 0.98) <= 0.01 &&
                        std::abs(cf.pi_sim - 0.01) <= 0.01;
  const bool numeric_ok = std::abs(numeric.delta - d_star) <= 0.1;
  const bool foc_ok = std::abs(foc) <= 1e-9;
  std::ostringstream d;
  d << "gamma* " << gamma << " delta* " << d_star << " numeric " << numeric.delta << " probs "
    << probs(cf) << " FOC " << foc;
  return {gamma_ok && probs_ok && numeric_ok && foc_ok, d.str()};
}

Outcome c3_timed() {
  const auto sc = albany();
  const double bound = analytics::sim_bound_timed(sc.latency, 150.0);
  const double exact = analytics::timed_outcome_probs(sc.latency, 150.0).pi_sim;
  const auto mc = engine::run_monte_carlo(sc.costs.triple(), sc.latency,
                                          engine::Strategy::timed(150.0), formula_config(kN, 3));
  // The published figure's arithmetic: standard deviations replaced by 5.2 and 5.
  const double literal = numerics::normal_cdf(103.0 / 5.2) * numerics::normal_cdf(51.0 / 5.0) +
                         0.04 * (1.0 - 0.99);
  const bool bound_ok = std::abs(bound - 0.977) <= 0.002;
  const bool mc_ok = mc.freq_sim >= bound;
  std::ostringstream d;
  d << "bound " << bound << (bound_ok ? " (ok)" : " (off)") << "; MC freq_sim " << mc.freq_sim
    << " (se " << mc.se_sim << ") >= bound: " << (mc_ok ? "yes" : "NO") << "; exact pi_sim "
    << exact << "; literal arithmetic " << literal;
  if (!mc_ok) {
    d << " [the bound exceeds the exact probability by " << bound - exact
      << ", so MC cannot meet it]";
  }
  return {bound_ok && mc_ok, d.str()};
}

Outcome c4_expenditures() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> slope(1e-3, 2.0), price(10.0, 500.0), qty(10.0, 1000.0),
      frac(0.01, 0.9);
  int violations = 0, draws = 0;
  while (draws < 1000) {
    double b = slope(rng), d = slope(rng);
    if (b == d) continue;
    if (b < d) std::swap(b, d);
    const double p0 = price(rng), xs = qty(rng), xl = qty(rng);
    const market::LinearMarketPair pair{p0 + b * xs, b, p0 + d * xl, d, xs + xl};
    const auto eq = market::solve_equilibrium(pair);
    const double x_tilde = frac(rng) * std::min(b * eq.x_s, d * eq.x_l) * (1.0 / b + 1.0 / d);
    const auto split = market::split_order(pair, eq, x_tilde);
    const auto e = market::expenditures(pair, eq, split.p_star);
    const double ratio = (e.e_s - e.e_sim) / (e.e_l - e.e_sim);
    if (!(e.e_sim < e.e_l && e.e_l < e.e_s) || std::abs(ratio - b / d) > 1e-6 * b / d) {
      ++violations;
    }
    ++draws;
  }
  return {violations == 0, std::to_string(draws) + " draws, " + std::to_string(violations) +
                               " violations"};
}

Outcome c5_derivative_signs() {
  const auto draws = latarb::testing::draw_gaussian_scenarios(150, 5);
  int violations = 0;
  for (const auto& sc : draws.scenarios) {
    if (!analytics::derivative_signs_at_optimum(sc.pair, sc.costs).signs_hold()) ++violations;
  }
  return {violations == 0, std::to_string(draws.scenarios.size()) + " scenarios, " +
                               std::to_string(violations) + " violations"};
}

Outcome c6_compact_support() {
  const auto kampala = cli::load_scenario(kScenarios / "kampala.json");
  const auto knoxville = cli::load_scenario(kScenarios / "knoxville.json");
  const double t_kampala = analytics::choose_execution_time(kampala.latency, 1.0);
  const double t_knox = analytics::choose_execution_time(knoxville.latency, 1.0);
  auto cfg = kampala.sim;
  cfg.replications = kN;
  const auto mc = engine::run_monte_carlo(kampala.costs.triple(), kampala.latency,
                                          engine::Strategy::timed(t_kampala), cfg);
  const bool support_ok = t_kampala == 671.0 && t_knox == 80.0 && mc.freq_sim == 1.0;

  // Gaussian legs: common random numbers make the MC curve comparable across T.
  const auto sc = albany();
  const auto& s = std::get<latency::GaussianLatency>(sc.latency.dist_s);
  const auto& l = std::get<latency::GaussianLatency>(sc.latency.dist_l);
  const double t_max = std::max(s.mu(), l.mu()) + 8.0 * std::max(s.sigma(), l.sigma());
  bool monotone = true;
  double prev_mc = -1.0, prev_exact = -1.0;
  for (double t = 0.0; t < t_max; t += 10.0) {
    const auto r = engine::run_monte_carlo(sc.costs.triple(), sc.latency,
                                           engine::Strategy::timed(t), formula_config(100000, 6));
    const double exact = analytics::timed_outcome_probs(sc.latency, t).pi_sim;
    monotone = monotone && r.freq_sim >= prev_mc && exact >= prev_exact - 1e-12;
    prev_mc = r.freq_sim;
    prev_exact = exact;
  }
  const auto tail = engine::run_monte_carlo(sc.costs.triple(), sc.latency,
                                            engine::Strategy::timed(t_max), formula_config(kN, 6));
  monotone = monotone && tail.freq_sim >= prev_mc;
  const bool tail_ok = tail.freq_sim > 0.999;
  std::ostringstream d;
  d << "Kampala T " << t_kampala << " freq_sim " << mc.freq_sim << "; Knoxville T " << t_knox
    << "; Gaussian monotone " << (monotone ? "yes" : "NO") << ", freq_sim(" << t_max
    << ") = " << tail.freq_sim;
  return {support_ok && monotone && tail_ok, d.str()};
}

Outcome c7_cost_ratio() {
  const auto sc = albany();
  const double ratio = sc.costs.ratio();
  std::ostringstream d;
  d.precision(17);
  d << "ratio " << ratio;
  return {std::abs(ratio - 1.6) <= 1e-12 * 1.6, d.str()};
}

Outcome c8_oracle_equivalence() {
  const auto t0 = Clock::now();
  const auto draws = latarb::testing::draw_gaussian_scenarios(20, 8);
  int failures = 0, checks = 0;
  std::uint64_t seed = 100;
  for (const auto& sc : draws.scenarios) {
    const auto& s = std::get<latency::GaussianLatency>(sc.pair.dist_s);
    const auto& l = std::get<latency::GaussianLatency>(sc.pair.dist_l);
    const double d_star = analytics::optimal_delay_closed_form(sc.pair, sc.costs);
    const double t_exec = std::max(s.mu(), l.mu()) + std::max(s.sigma(), l.sigma());
    const std::vector<std::pair<engine::Strategy, analytics::OutcomeProbabilities>> cases{
        {engine::Strategy::immediate(), analytics::outcome_probs_gaussian(sc.pair, 0.0)},
        {engine::Strategy::delayed(d_star), analytics::outcome_probs_gaussian(sc.pair, d_star)},
        {engine::Strategy::timed(t_exec), analytics::timed_outcome_probs(sc.pair, t_exec)}};
    for (const auto& [strategy, cf] : cases) {
      const auto r = engine::run_monte_carlo(sc.costs.triple(), sc.pair, strategy,
                                             formula_config(kN, seed++));
      ++checks;
      if (!mc_agrees(r, cf, kN)) {
        ++failures;
        std::printf("    mismatch: scenario %llu closed %s MC (%.6f, %.6f, %.6f)\n",
                    static_cast<unsigned long long>(seed - 1), probs(cf).c_str(), r.freq_s,
                    r.freq_l, r.freq_sim);
      }
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << checks << " scenario/strategy pairs, " << failures << " outside 4SE; " << secs << " s";
  return {failures == 0 && secs < 600.0, d.str()};
}

Outcome c9_determinism() {
  const std::string path = (kScenarios / "albany.json").string();
  std::ostringstream a, b, err;
  const int ca = cli::run({"simulate", path, "-n", std::to_string(kN), "--seed", "9",
                           "--threads", "1"}, a, err);
  const int cb = cli::run({"simulate", path, "-n", std::to_string(kN), "--seed", "9",
                           "--threads", "4"}, b, err);
  const bool same = ca == 0 && cb == 0 && a.str() == b.str() && !a.str().empty();
  return {same, "threads 1 vs 4: " + std::string(same ? "byte-identical" : "DIFFERENT")};
}

Outcome c10_jitter() {
  const auto sc = albany();
  auto cfg = formula_config(kN, 10);
  const auto base = engine::run_monte_carlo(sc.costs.triple(), sc.latency,
                                            engine::Strategy::timed(150.0), cfg);
  cfg.clock_jitter = 0.1;
  const auto jit = engine::run_monte_carlo(sc.costs.triple(), sc.latency,
                                           engine::Strategy::timed(150.0), cfg);
  const double diff = std::abs(base.freq_sim - jit.freq_sim);
  std::ostringstream d;
  d << "freq_sim " << base.freq_sim << " -> " << jit.freq_sim << " (|diff| " << diff << ")";
  return {diff < 0.001, d.str()};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "no-delay probabilities", c1_no_delay},
      {2, "optimal delay", c2_optimal_delay},
      {3, "timed-execution bound", c3_timed},
      {4, "expenditure ranking and ratio", c4_expenditures},
      {5, "derivative signs at the optimum", c5_derivative_signs},
      {6, "compact support and timed monotonicity", c6_compact_support},
      {7, "price-impact cost ratio", c7_cost_ratio},
      {8, "closed form vs Monte Carlo", c8_oracle_equivalence},
      {9, "thread-count determinism", c9_determinism},
      {10, "clock-jitter robustness", c10_jitter},
  };
  const auto t0 = Clock::now();
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] criterion %2d: %s -- %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(criteria.size()) - failed,
              criteria.size(), seconds_since(t0));
  return failed;
}
