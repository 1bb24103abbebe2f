#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "latarb/analytics.hpp"
#include "latarb/engine.hpp"
#include "latarb/latency.hpp"
#include "latarb/market.hpp"

namespace latarb::cli {

struct StrategySpec {
  enum class Kind { immediate, delayed, timed };
  Kind kind = Kind::immediate;
  std::optional<double> delta;   // delayed; empty means "optimal"
  std::optional<double> t_exec;  // timed; either t_exec or target
  std::optional<double> target;
};

const char* to_string(StrategySpec::Kind kind) noexcept;

/// A fully resolved scenario file. See schemas/scenario.schema.json.
struct Scenario {
  std::string name;
  std::string provenance;
  std::string small_leg;  // catalog entry name or "inline"
  std::string large_leg;
  // Placeholder legs until parsed.
  latency::LatencyPair latency{latency::EmpiricalLatency({0.0}), latency::EmpiricalLatency({0.0})};
  std::optional<market::LinearMarketPair> linear;
  std::optional<market::EquilibriumState> equilibrium;
  std::optional<market::OrderSplit> split;
  analytics::CostProfile costs;  // relative to simultaneous execution for market inputs
  StrategySpec strategy;
  engine::SimConfig sim;
};

/// Throws ParseError for malformed JSON or schema violations, Error for
/// semantic problems (unknown catalog names, inadmissible markets, ...).
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const nlohmann::ordered_json& doc, const std::filesystem::path& base_dir,
                        const std::string& source);

StrategySpec::Kind parse_strategy_kind(const std::string& text);
latency::SamplingMode parse_sampling(const std::string& text);
const char* to_string(latency::SamplingMode mode) noexcept;

/// Concrete order kinds for a strategy. Optimal delays use the closed form
/// when both legs are Gaussian, else the numeric minimizer.
engine::Strategy resolve_strategy(const Scenario& scenario);

}  // namespace latarb::cli
