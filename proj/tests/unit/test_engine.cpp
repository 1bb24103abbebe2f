#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "latarb/analytics.hpp"
#include "latarb/engine.hpp"
#include "latarb/error.hpp"

namespace latarb::engine {
namespace {

using latency::EmpiricalLatency;
using latency::GaussianLatency;
using latency::LatencyPair;

const market::ExpenditureTriple kCosts{0.0, 2.5, 4.0};

LatencyPair albany() { return {GaussianLatency(51.0, 28.0), GaussianLatency(103.0, 25.7), 4.0}; }
LatencyPair fixed_legs() { return {EmpiricalLatency({51.0}), EmpiricalLatency({103.0}), 4.0}; }

SimConfig formula_config(std::uint64_t n, std::uint64_t seed = 1) {
  SimConfig c;
  c.replications = n;
  c.master_seed = seed;
  c.sampling_mode = latency::SamplingMode::allow_negative;
  return c;
}

bool within(double freq, double p, std::uint64_t n, double k) {
  return std::abs(freq - p) <= k * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

TEST(Classify, Boundaries) {
  EXPECT_EQ(classify(10.0, 10.0, 4.0), Classification::Simultaneous);
  EXPECT_EQ(classify(14.0, 10.0, 4.0), Classification::Simultaneous);
  EXPECT_EQ(classify(10.0, 14.0, 4.0), Classification::Simultaneous);
  EXPECT_EQ(classify(14.001, 10.0, 4.0), Classification::RevealedL);
  EXPECT_EQ(classify(10.0, 14.001, 4.0), Classification::RevealedS);
}

TEST(RunTrial, ImmediateWithFixedLatenciesRevealsOnS) {
  const auto t = run_trial(kCosts, fixed_legs(), Strategy::immediate(), SimConfig{}, 0);
  EXPECT_EQ(t.exec_s, 51.0);
  EXPECT_EQ(t.exec_l, 103.0);
  EXPECT_EQ(t.classification, Classification::RevealedS);
  EXPECT_EQ(t.realized_cost, kCosts.e_s);
}

TEST(RunTrial, TimedExecutionSynchronizes) {
  const auto t = run_trial(kCosts, fixed_legs(), Strategy::timed(150.0), SimConfig{}, 0);
  EXPECT_EQ(t.arrival_s, 51.0);
  EXPECT_EQ(t.arrival_l, 103.0);
  EXPECT_EQ(t.exec_s, 150.0);
  EXPECT_EQ(t.exec_l, 150.0);
  EXPECT_EQ(t.classification, Classification::Simultaneous);
  EXPECT_EQ(t.realized_cost, kCosts.e_sim);
}

TEST(RunTrial, LateArrivalExecutesImmediately) {
  const auto t = run_trial(kCosts, fixed_legs(), Strategy::timed(60.0), SimConfig{}, 0);
  EXPECT_EQ(t.exec_s, 60.0);
  EXPECT_EQ(t.exec_l, 103.0);
  EXPECT_EQ(t.classification, Classification::RevealedS);
}

TEST(RunTrial, DelayingTheSmallLegAlignsArrivals) {
  const auto t = run_trial(kCosts, fixed_legs(), Strategy::delayed(52.0), SimConfig{}, 0);
  EXPECT_EQ(t.send_s, 52.0);
  EXPECT_EQ(t.send_l, 0.0);
  EXPECT_EQ(t.exec_s, 103.0);
  EXPECT_EQ(t.exec_l, 103.0);
  EXPECT_EQ(t.classification, Classification::Simultaneous);
}

TEST(RunTrial, NegativeDelayHoldsBackTheLargeLeg) {
  const auto t = run_trial(kCosts, fixed_legs(), Strategy::delayed(-10.0), SimConfig{}, 0);
  EXPECT_EQ(t.send_s, 0.0);
  EXPECT_EQ(t.send_l, 10.0);
  EXPECT_EQ(t.exec_l, 113.0);
}

TEST(RunTrial, HftDisabledNeverFrontRuns) {
  SimConfig c;
  c.hft_enabled = false;
  const auto t = run_trial(kCosts, fixed_legs(), Strategy::immediate(), c, 0);
  EXPECT_EQ(t.classification, Classification::Simultaneous);
  EXPECT_EQ(t.realized_cost, kCosts.e_sim);
}

TEST(RunTrial, EventSimulationAgreesWithClassify) {
  const auto pair = albany();
  SimConfig c = formula_config(1);
  c.clock_jitter = 0.5;
  for (const Strategy& s : {Strategy::immediate(), Strategy::delayed(60.0), Strategy::timed(120.0)}) {
    for (std::uint64_t i = 0; i < 20000; ++i) {
      const auto t = run_trial(kCosts, pair, s, c, i);
      ASSERT_EQ(t.classification, classify(t.exec_s, t.exec_l, pair.h)) << "trial " << i;
    }
  }
}

TEST(RunTrial, MismatchedDelaysAreRejected) {
  const Strategy bad{Delayed{1.0}, Delayed{2.0}};
  EXPECT_THROW(run_monte_carlo(kCosts, albany(), bad, formula_config(10)), Error);
  EXPECT_THROW(run_monte_carlo(kCosts, albany(), Strategy::timed(-1.0), formula_config(10)), Error);
}

TEST(RunMonteCarlo, ZeroReplicationsIsAConfigError) {
  try {
    run_monte_carlo(kCosts, albany(), Strategy::immediate(), formula_config(0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
  }
}

TEST(RunMonteCarlo, ReportInvariants) {
  const auto r = run_monte_carlo(kCosts, albany(), Strategy::immediate(), formula_config(50000));
  EXPECT_EQ(r.count_sim + r.count_l + r.count_s, 50000u);
  EXPECT_NEAR(r.freq_sim + r.freq_l + r.freq_s, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.se_sim, std::sqrt(r.freq_sim * (1.0 - r.freq_sim) / 50000.0));
}

TEST(RunMonteCarlo, ThreadCountDoesNotChangeResults) {
  auto c = formula_config(30001, 99);
  const auto serial = run_monte_carlo(kCosts, albany(), Strategy::immediate(), c);
  for (unsigned threads : {2u, 3u, 8u}) {
    c.threads = threads;
    const auto parallel = run_monte_carlo(kCosts, albany(), Strategy::immediate(), c);
    EXPECT_EQ(parallel.count_sim, serial.count_sim);
    EXPECT_EQ(parallel.count_l, serial.count_l);
    EXPECT_EQ(parallel.count_s, serial.count_s);
    EXPECT_EQ(parallel.mean_cost, serial.mean_cost);
  }
}

TEST(RunMonteCarlo, AlbanyMatchesClosedForms) {
  const std::uint64_t n = 400000;
  const auto pair = albany();
  const analytics::CostProfile costs = analytics::CostProfile::from(kCosts);
  const double d_star = analytics::optimal_delay_closed_form(pair, costs);
  for (double delta : {0.0, d_star}) {
    const auto cf = analytics::outcome_probs_gaussian(pair, delta);
    const auto r = run_monte_carlo(kCosts, pair, Strategy::delayed(delta), formula_config(n, 5));
    EXPECT_TRUE(within(r.freq_s, cf.pi_s, n, 4.0)) << r.freq_s << " vs " << cf.pi_s;
    EXPECT_TRUE(within(r.freq_l, cf.pi_l, n, 4.0)) << r.freq_l << " vs " << cf.pi_l;
    EXPECT_TRUE(within(r.freq_sim, cf.pi_sim, n, 4.0)) << r.freq_sim << " vs " << cf.pi_sim;
    const double se = std::sqrt((cf.pi_l * 2.5 * 2.5 + cf.pi_s * 16.0 -
                                 std::pow(analytics::expected_cost(cf, costs), 2)) / n);
    EXPECT_NEAR(r.mean_cost, analytics::expected_cost(cf, costs), 4.0 * se);
  }
}

TEST(RunMonteCarlo, TimedMatchesExactProbabilities) {
  const std::uint64_t n = 400000;
  const auto cf = analytics::timed_outcome_probs(albany(), 150.0);
  const auto r = run_monte_carlo(kCosts, albany(), Strategy::timed(150.0), formula_config(n, 6));
  EXPECT_TRUE(within(r.freq_sim, cf.pi_sim, n, 4.0)) << r.freq_sim << " vs " << cf.pi_sim;
  EXPECT_TRUE(within(r.freq_s, cf.pi_s, n, 4.0));
  EXPECT_TRUE(within(r.freq_l, cf.pi_l, n, 4.0));
  EXPECT_GE(r.freq_sim, 0.97);
}

TEST(RunMonteCarlo, TimedSimultaneityIsMonotoneInExecutionTime) {
  double prev = 0.0;
  for (double t = 0.0; t <= 350.0; t += 25.0) {
    const auto r = run_monte_carlo(kCosts, albany(), Strategy::timed(t), formula_config(100000, 8));
    ASSERT_GE(r.freq_sim, prev) << "t=" << t;
    prev = r.freq_sim;
  }
  EXPECT_GT(prev, 0.999);
}

TEST(RunMonteCarlo, ClockJitterBarelyMatters) {
  auto c = formula_config(200000, 10);
  const auto base = run_monte_carlo(kCosts, albany(), Strategy::timed(150.0), c);
  c.clock_jitter = 0.1;
  const auto jittered = run_monte_carlo(kCosts, albany(), Strategy::timed(150.0), c);
  EXPECT_LT(std::abs(base.freq_sim - jittered.freq_sim), 0.001);
}

TEST(WriteTrace, OneRowPerTrialMatchingTheRun) {
  std::ostringstream out;
  auto c = formula_config(5, 3);
  write_trace(out, kCosts, albany(), Strategy::timed(150.0), c);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "trial,send_s,send_l,arrival_s,arrival_l,exec_s,exec_l,classification");
  int rows = 0;
  while (std::getline(in, line)) {
    const auto t = run_trial(kCosts, albany(), Strategy::timed(150.0), c, rows);
    EXPECT_NE(line.find(to_string(t.classification)), std::string::npos);
    ++rows;
  }
  EXPECT_EQ(rows, 5);
}

}  // namespace
}  // namespace latarb::engine
