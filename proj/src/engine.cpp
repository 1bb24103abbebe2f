#include "latarb/engine.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <random>
#include <thread>
#include <vector>

#include "latarb/error.hpp"

namespace latarb::engine {
namespace {

struct Leg {
  double send = 0.0;
  std::optional<double> t_exec;
};

Leg leg_schedule(const OrderKind& kind, bool small_venue) {
  Leg leg;
  if (const auto* d = std::get_if<Delayed>(&kind)) {
    leg.send = small_venue ? std::max(d->delta, 0.0) : std::max(-d->delta, 0.0);
  } else if (const auto* t = std::get_if<TimedExecution>(&kind)) {
    leg.t_exec = t->t_exec;
  }
  return leg;
}

void validate_strategy(const Strategy& strategy) {
  for (const OrderKind* k : {&strategy.s, &strategy.l}) {
    if (const auto* t = std::get_if<TimedExecution>(k); t && !(t->t_exec >= 0.0)) {
      throw Error(ErrorCode::InvalidConfig, "t_exec must be >= 0");
    }
  }
  const auto* ds = std::get_if<Delayed>(&strategy.s);
  const auto* dl = std::get_if<Delayed>(&strategy.l);
  if (ds && dl && ds->delta != dl->delta) {
    throw Error(ErrorCode::InvalidConfig, "both delayed legs must encode the same delta");
  }
}

double cost_of(const market::ExpenditureTriple& m, Classification c) {
  switch (c) {
    case Classification::Simultaneous: return m.e_sim;
    case Classification::RevealedL: return m.e_l;
    case Classification::RevealedS: return m.e_s;
  }
  return m.e_sim;
}

struct Counts {
  std::uint64_t sim = 0;
  std::uint64_t l = 0;
  std::uint64_t s = 0;

  void add(Classification c) {
    switch (c) {
      case Classification::Simultaneous: ++sim; break;
      case Classification::RevealedL: ++l; break;
      case Classification::RevealedS: ++s; break;
    }
  }
};

}  // namespace

const char* to_string(Classification c) noexcept {
  switch (c) {
    case Classification::Simultaneous: return "simultaneous";
    case Classification::RevealedL: return "revealed_l";
    case Classification::RevealedS: return "revealed_s";
  }
  return "unknown";
}

void SimConfig::validate() const {
  if (replications < 1) throw Error(ErrorCode::InvalidConfig, "replications must be >= 1");
  if (!(clock_jitter >= 0.0)) throw Error(ErrorCode::InvalidConfig, "clock_jitter must be >= 0");
}

Classification classify(double exec_s, double exec_l, double h) noexcept {
  if (exec_s - exec_l > h) return Classification::RevealedL;
  if (exec_l - exec_s > h) return Classification::RevealedS;
  return Classification::Simultaneous;
}

TrialOutcome run_trial(const market::ExpenditureTriple& market, const latency::LatencyPair& pair,
                       const Strategy& strategy, const SimConfig& config,
                       std::uint64_t trial_index) {
  auto rng = latency::replication_rng(config.master_seed, trial_index);
  const Leg s = leg_schedule(strategy.s, true);
  const Leg l = leg_schedule(strategy.l, false);

  TrialOutcome out;
  out.send_s = s.send;
  out.send_l = l.send;
  // Latencies are drawn before any jitter so jitter on/off runs share latencies.
  out.arrival_s = s.send + latency::sample(pair.dist_s, rng, config.sampling_mode);
  out.arrival_l = l.send + latency::sample(pair.dist_l, rng, config.sampling_mode);

  std::uniform_real_distribution<double> jitter(-config.clock_jitter, config.clock_jitter);
  auto execution = [&](const Leg& leg, double arrival) {
    if (!leg.t_exec) return arrival;
    const double scheduled = *leg.t_exec + (config.clock_jitter > 0.0 ? jitter(rng) : 0.0);
    return std::max(scheduled, arrival);
  };
  out.exec_s = execution(s, out.arrival_s);
  out.exec_l = execution(l, out.arrival_l);

  out.classification = Classification::Simultaneous;
  if (config.hft_enabled) {
    // The first execution is the only information the HFT gets.
    const double hft_lands_on_l = out.exec_s + pair.h;
    const double hft_lands_on_s = out.exec_l + pair.h;
    if (hft_lands_on_l < out.exec_l) {
      out.classification = Classification::RevealedS;
    } else if (hft_lands_on_s < out.exec_s) {
      out.classification = Classification::RevealedL;
    }
  }
  out.realized_cost = cost_of(market, out.classification);
  return out;
}

SimReport run_monte_carlo(const market::ExpenditureTriple& market,
                          const latency::LatencyPair& pair, const Strategy& strategy,
                          const SimConfig& config) {
  config.validate();
  validate_strategy(strategy);
  if (!(pair.h > 0.0)) throw Error(ErrorCode::InvalidConfig, "HFT latency H must be positive");

  const std::uint64_t n = config.replications;
  unsigned workers = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, n));

  std::vector<Counts> partial(workers);
  auto work = [&](unsigned w) {
    const std::uint64_t begin = n * w / workers;
    const std::uint64_t end = n * (w + 1) / workers;
    Counts c;
    for (std::uint64_t i = begin; i < end; ++i) {
      c.add(run_trial(market, pair, strategy, config, i).classification);
    }
    partial[w] = c;
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  Counts total;
  for (const Counts& c : partial) {
    total.sim += c.sim;
    total.l += c.l;
    total.s += c.s;
  }

  SimReport r;
  r.replications = n;
  r.count_sim = total.sim;
  r.count_l = total.l;
  r.count_s = total.s;
  const double nd = static_cast<double>(n);
  r.freq_sim = static_cast<double>(total.sim) / nd;
  r.freq_l = static_cast<double>(total.l) / nd;
  r.freq_s = static_cast<double>(total.s) / nd;
  auto se = [nd](double p) { return std::sqrt(p * (1.0 - p) / nd); };
  r.se_sim = se(r.freq_sim);
  r.se_l = se(r.freq_l);
  r.se_s = se(r.freq_s);
  // Costs take three values, so the mean follows from the counts.
  r.mean_cost = r.freq_sim * market.e_sim + r.freq_l * market.e_l + r.freq_s * market.e_s;
  const double second = r.freq_sim * market.e_sim * market.e_sim +
                        r.freq_l * market.e_l * market.e_l + r.freq_s * market.e_s * market.e_s;
  r.se_cost = std::sqrt(std::max(0.0, second - r.mean_cost * r.mean_cost) / nd);
  return r;
}

void write_trace(std::ostream& out, const market::ExpenditureTriple& market,
                 const latency::LatencyPair& pair, const Strategy& strategy,
                 const SimConfig& config) {
  config.validate();
  validate_strategy(strategy);
  out << "trial,send_s,send_l,arrival_s,arrival_l,exec_s,exec_l,classification\n";
  const auto precision = out.precision(17);
  for (std::uint64_t i = 0; i < config.replications; ++i) {
    const TrialOutcome t = run_trial(market, pair, strategy, config, i);
    out << i << ',' << t.send_s << ',' << t.send_l << ',' << t.arrival_s << ',' << t.arrival_l
        << ',' << t.exec_s << ',' << t.exec_l << ',' << to_string(t.classification) << '\n';
  }
  out.precision(precision);
}

}  // namespace latarb::engine
