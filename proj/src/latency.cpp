#include "latarb/latency.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <utility>

#include "latarb/error.hpp"
#include "latarb/numerics.hpp"

namespace latarb::latency {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::optional<double> parse_double(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

bool skippable(const std::string& line) { return line.empty() || line.front() == '#'; }

}  // namespace

GaussianLatency::GaussianLatency(double mu, double sigma) : mu_(mu), sigma_(sigma) {
  if (!(sigma > 0.0) || !(mu > 0.0)) {
    std::ostringstream os;
    os << "gaussian latency needs mu > 0 and sigma > 0 (mu=" << mu << ", sigma=" << sigma << ")";
    throw Error(ErrorCode::InvalidStats, os.str());
  }
}

EmpiricalLatency::EmpiricalLatency(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw Error(ErrorCode::InvalidStats, "empirical latency needs samples");
  for (double s : samples_) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::InvalidStats, "latency samples must be finite and >= 0");
    }
  }
  std::sort(samples_.begin(), samples_.end());
}

Rng replication_rng(std::uint64_t master_seed, std::uint64_t index) noexcept {
  // Two rounds of mixing decorrelate neighbouring indices and seeds.
  SplitMix64 mix(master_seed);
  const std::uint64_t base = mix();
  SplitMix64 stream(base ^ (index * 0xd1b54a32d192ed03ULL));
  return Rng(stream());
}

double sample(const LatencyModel& dist, Rng& rng, SamplingMode mode) {
  return std::visit(
      Overloaded{
          [&](const GaussianLatency& g) {
            std::normal_distribution<double> normal(g.mu(), g.sigma());
            double draw = normal(rng);
            if (mode == SamplingMode::physical) {
              while (!(draw > 0.0)) draw = normal(rng);
            }
            return draw;
          },
          [&](const EmpiricalLatency& e) {
            std::uniform_int_distribution<std::size_t> pick(0, e.samples().size() - 1);
            return e.samples()[pick(rng)];
          },
      },
      dist);
}

double cdf(const LatencyModel& dist, double t) {
  return std::visit(
      Overloaded{
          [&](const GaussianLatency& g) {
            return numerics::clamp_probability(numerics::normal_cdf((t - g.mu()) / g.sigma()));
          },
          [&](const EmpiricalLatency& e) {
            const auto& s = e.samples();
            const auto n = std::upper_bound(s.begin(), s.end(), t) - s.begin();
            return static_cast<double>(n) / static_cast<double>(s.size());
          },
      },
      dist);
}

std::optional<double> max_support(const LatencyModel& dist) {
  if (const auto* e = std::get_if<EmpiricalLatency>(&dist)) return e->samples().back();
  return std::nullopt;
}

double mean(const LatencyModel& dist) {
  return std::visit(Overloaded{
                        [](const GaussianLatency& g) { return g.mu(); },
                        [](const EmpiricalLatency& e) {
                          const auto& s = e.samples();
                          return std::accumulate(s.begin(), s.end(), 0.0) /
                                 static_cast<double>(s.size());
                        },
                    },
                    dist);
}

double stddev(const LatencyModel& dist) {
  if (const auto* g = std::get_if<GaussianLatency>(&dist)) return g->sigma();
  const auto& s = std::get<EmpiricalLatency>(dist).samples();
  const double m = mean(dist);
  double ss = 0.0;
  for (double x : s) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(s.size()));
}

bool is_gaussian(const LatencyModel& dist) noexcept {
  return std::holds_alternative<GaussianLatency>(dist);
}

const char* kind_name(const LatencyModel& dist) noexcept {
  return is_gaussian(dist) ? "gaussian" : "empirical";
}

EmpiricalLatency load_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open sample file");
  std::vector<double> samples;
  std::string raw;
  std::size_t line_no = 0;
  bool header_allowed = true;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (skippable(line)) continue;
    const auto value = parse_double(split_fields(line).front());
    const bool first = std::exchange(header_allowed, false);
    if (!value) {
      if (first) continue;  // header
      throw ParseError(path.string(), line_no, "expected a numeric latency, got '" + line + "'");
    }
    samples.push_back(*value);
  }
  try {
    return EmpiricalLatency(std::move(samples));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

LatencyCatalog load_latency_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open latency catalog");
  const std::string source = path.string();
  LatencyCatalog catalog;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (skippable(line)) continue;
    const auto fields = split_fields(line);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"name", "kind", "p1", "p2"}) {
        throw ParseError(source, line_no, "expected header 'name,kind,p1,p2'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() < 3 || fields.size() > 4) {
      throw ParseError(source, line_no, "expected 4 fields, got " + std::to_string(fields.size()));
    }
    const std::string& name = fields[0];
    if (name.empty()) throw ParseError(source, line_no, "empty entry name");
    if (catalog.count(name)) throw ParseError(source, line_no, "duplicate entry '" + name + "'");

    const std::string& kind = fields[1];
    if (kind == "gaussian") {
      const auto mu = parse_double(fields[2]);
      const auto sigma = fields.size() == 4 ? parse_double(fields[3]) : std::nullopt;
      if (!mu || !sigma) throw ParseError(source, line_no, "gaussian row needs numeric mu and sigma");
      try {
        catalog.emplace(name, GaussianLatency(*mu, *sigma));
      } catch (const Error& e) {
        throw Error(ErrorCode::InvalidStats,
                    source + ":" + std::to_string(line_no) + ": " + e.what());
      }
    } else if (kind == "empirical") {
      if (fields[2].empty()) throw ParseError(source, line_no, "empirical row needs a sample path");
      if (fields.size() == 4 && !fields[3].empty()) {
        throw ParseError(source, line_no, "empirical row must leave p2 empty");
      }
      catalog.emplace(name, load_samples_csv(path.parent_path() / fields[2]));
    } else {
      throw ParseError(source, line_no, "unknown kind '" + kind + "'");
    }
  }
  if (!header_seen) throw ParseError(source, 0, "empty latency catalog");
  return catalog;
}

}  // namespace latarb::latency
