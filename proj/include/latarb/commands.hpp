#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "latarb/scenario.hpp"

namespace latarb::cli {

/// Command-line values that take precedence over the scenario file.
struct Overrides {
  std::optional<std::string> strategy;
  std::optional<std::string> delta;  // number or "optimal"
  std::optional<double> t_exec;
  std::optional<double> target;
  std::optional<long long> replications;
  std::optional<std::uint64_t> seed;
  std::optional<double> jitter;
  std::optional<std::string> sampling;
  std::optional<unsigned> threads;
};

void apply_overrides(Scenario& scenario, const Overrides& overrides);

/// Closed-form analysis; needs Gaussian legs.
nlohmann::ordered_json analyze_report(const Scenario& scenario);

/// Monte Carlo run with closed-form comparison columns where available.
nlohmann::ordered_json simulate_report(const Scenario& scenario,
                                       const std::optional<std::filesystem::path>& trace = {});

struct CalibrationOptions {
  std::filesystem::path scenario;
  std::uint64_t replications = 1000000;
  std::uint64_t seed = 7;
  unsigned threads = 1;
};

/// Three-profile reproduction (immediate, optimal delay, timed T=150) for the
/// Albany investor. Writes a human-readable table to `table`.
nlohmann::ordered_json calibrate_report(const CalibrationOptions& options, std::ostream& table);

nlohmann::ordered_json ingest_report(const std::filesystem::path& catalog, std::ostream& table);

/// Entry point shared by the executable and the tests. Exit codes: 0 success,
/// 1 scenario/semantic error, 2 parse error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Default location of the bundled scenarios.
std::filesystem::path bundled_scenario_dir();

}  // namespace latarb::cli
