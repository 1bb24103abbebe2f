#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace latarb::latency {

// All latencies are one-way, in milliseconds.

class GaussianLatency {
 public:
  /// Throws Error(InvalidStats) unless mu > 0 and sigma > 0.
  GaussianLatency(double mu, double sigma);

  double mu() const noexcept { return mu_; }
  double sigma() const noexcept { return sigma_; }

 private:
  double mu_;
  double sigma_;
};

class EmpiricalLatency {
 public:
  /// Sorts the samples. Throws Error(InvalidStats) if empty or any sample < 0.
  explicit EmpiricalLatency(std::vector<double> samples);

  const std::vector<double>& samples() const noexcept { return samples_; }

 private:
  std::vector<double> samples_;
};

using LatencyModel = std::variant<GaussianLatency, EmpiricalLatency>;

/// Latency to each venue plus the HFT's deterministic inter-exchange latency.
/// The two legs are treated as independent.
struct LatencyPair {
  LatencyModel dist_s;
  LatencyModel dist_l;
  double h = 4.0;
};

enum class SamplingMode {
  physical,        // Gaussian draws are resampled until positive
  allow_negative,  // untruncated normal, matching the closed forms
};

/// Cheap, seedable 64-bit generator. One instance per replication.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

using Rng = SplitMix64;

/// Random source for replication `index` of a run seeded with `master_seed`.
/// Depends only on the pair, so serial and parallel runs draw identically.
Rng replication_rng(std::uint64_t master_seed, std::uint64_t index) noexcept;

double sample(const LatencyModel& dist, Rng& rng, SamplingMode mode = SamplingMode::physical);

/// P(latency <= t). Gaussian CDF is untruncated.
double cdf(const LatencyModel& dist, double t);

/// Largest attainable latency; empty for unbounded (Gaussian) models.
std::optional<double> max_support(const LatencyModel& dist);

double mean(const LatencyModel& dist);
double stddev(const LatencyModel& dist);

bool is_gaussian(const LatencyModel& dist) noexcept;
const char* kind_name(const LatencyModel& dist) noexcept;

using LatencyCatalog = std::map<std::string, LatencyModel>;

/// Reads a catalog CSV with header `name,kind,p1,p2`. Empirical sample paths
/// are resolved relative to the catalog's directory. Lines starting with '#'
/// and blank lines are ignored.
LatencyCatalog load_latency_csv(const std::filesystem::path& path);

/// Reads a one-column CSV of latency samples (optional non-numeric header).
EmpiricalLatency load_samples_csv(const std::filesystem::path& path);

}  // namespace latarb::latency
