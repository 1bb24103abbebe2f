#pragma once

#include <cstdint>
#include <iosfwd>
#include <variant>

#include "latarb/latency.hpp"
#include "latarb/market.hpp"

namespace latarb::engine {

/// Sent at t=0 and executed on arrival.
struct Immediate {};

/// Sender-side offset of the S-order relative to the L-order. A positive
/// delta holds back the S leg by delta; a negative one holds back the L leg
/// by |delta|. Both legs carry the same value.
struct Delayed {
  double delta = 0.0;
};

/// Sent at t=0; the exchange holds the order unpublished and executes it at
/// max(t_exec, arrival).
struct TimedExecution {
  double t_exec = 0.0;
};

using OrderKind = std::variant<Immediate, Delayed, TimedExecution>;

struct Strategy {
  OrderKind s;
  OrderKind l;

  static Strategy immediate() { return {Immediate{}, Immediate{}}; }
  static Strategy delayed(double delta) { return {Delayed{delta}, Delayed{delta}}; }
  static Strategy timed(double t_exec) { return {TimedExecution{t_exec}, TimedExecution{t_exec}}; }
};

enum class Classification { Simultaneous, RevealedL, RevealedS };

const char* to_string(Classification c) noexcept;

struct SimConfig {
  std::uint64_t replications = 100000;
  std::uint64_t master_seed = 1;
  latency::SamplingMode sampling_mode = latency::SamplingMode::physical;
  double clock_jitter = 0.0;  // max absolute exchange clock error, ms
  bool hft_enabled = true;
  unsigned threads = 1;  // 0 = hardware concurrency; never changes results

  /// Throws Error(InvalidConfig).
  void validate() const;
};

struct TrialOutcome {
  double send_s = 0.0;
  double send_l = 0.0;
  double arrival_s = 0.0;
  double arrival_l = 0.0;
  double exec_s = 0.0;
  double exec_l = 0.0;
  Classification classification = Classification::Simultaneous;
  double realized_cost = 0.0;
};

struct SimReport {
  std::uint64_t replications = 0;
  std::uint64_t count_sim = 0;
  std::uint64_t count_l = 0;
  std::uint64_t count_s = 0;
  double freq_sim = 0.0;
  double freq_l = 0.0;
  double freq_s = 0.0;
  double se_sim = 0.0;
  double se_l = 0.0;
  double se_s = 0.0;
  double mean_cost = 0.0;
  double se_cost = 0.0;
};

/// RevealedL if exec_s - exec_l > h, RevealedS if exec_l - exec_s > h,
/// otherwise Simultaneous (a gap of exactly h leaves the HFT no fill).
Classification classify(double exec_s, double exec_l, double h) noexcept;

/// One replication of the dispatch / arrival / execution / front-running
/// sequence. The HFT sees executions only (exchanges never publish receipt
/// of a held timed order), trades from the revealing venue with zero
/// observation latency, and its cross-venue order lands exactly H later; it
/// fills only if that is strictly before the investor's other leg executes.
/// With the HFT disabled every trial is Simultaneous.
TrialOutcome run_trial(const market::ExpenditureTriple& market, const latency::LatencyPair& pair,
                       const Strategy& strategy, const SimConfig& config,
                       std::uint64_t trial_index);

/// Aggregates config.replications trials. Trial i uses
/// latency::replication_rng(master_seed, i); counts are integer so the
/// report is identical for any thread count.
SimReport run_monte_carlo(const market::ExpenditureTriple& market,
                          const latency::LatencyPair& pair, const Strategy& strategy,
                          const SimConfig& config);

/// Writes the CSV trace of every trial (same streams as run_monte_carlo).
void write_trace(std::ostream& out, const market::ExpenditureTriple& market,
                 const latency::LatencyPair& pair, const Strategy& strategy,
                 const SimConfig& config);

}  // namespace latarb::engine
