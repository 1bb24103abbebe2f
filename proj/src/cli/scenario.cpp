#include "latarb/scenario.hpp"

#include <fstream>

#include "latarb/error.hpp"

namespace latarb::cli {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(const std::string& source, const std::string& what) {
  throw ParseError(source, 0, what);
}

double number_at(const ordered_json& obj, const char* key, const std::string& source) {
  if (!obj.contains(key) || !obj.at(key).is_number()) {
    schema_error(source, std::string("'") + key + "' must be a number");
  }
  return obj.at(key).get<double>();
}

latency::LatencyModel leg_model(const ordered_json& leg, const latency::LatencyCatalog* catalog,
                                const std::filesystem::path& base_dir, const std::string& source,
                                std::string& label) {
  if (leg.is_string()) {
    label = leg.get<std::string>();
    if (catalog == nullptr) schema_error(source, "leg '" + label + "' needs a 'catalog'");
    const auto it = catalog->find(label);
    if (it == catalog->end()) {
      throw Error(ErrorCode::InvalidConfig, source + ": unknown catalog entry '" + label + "'");
    }
    return it->second;
  }
  if (!leg.is_object() || !leg.contains("kind")) {
    schema_error(source, "latency leg must be a catalog name or an object with 'kind'");
  }
  label = "inline";
  const auto kind = leg.at("kind").get<std::string>();
  if (kind == "gaussian") {
    return latency::GaussianLatency(number_at(leg, "mu", source), number_at(leg, "sigma", source));
  }
  if (kind == "empirical") {
    if (leg.contains("samples")) {
      return latency::EmpiricalLatency(leg.at("samples").get<std::vector<double>>());
    }
    if (leg.contains("path")) {
      return latency::load_samples_csv(base_dir / leg.at("path").get<std::string>());
    }
    schema_error(source, "empirical leg needs 'samples' or 'path'");
  }
  schema_error(source, "unknown latency kind '" + kind + "'");
}

}  // namespace

const char* to_string(StrategySpec::Kind kind) noexcept {
  switch (kind) {
    case StrategySpec::Kind::immediate: return "immediate";
    case StrategySpec::Kind::delayed: return "delayed";
    case StrategySpec::Kind::timed: return "timed";
  }
  return "unknown";
}

StrategySpec::Kind parse_strategy_kind(const std::string& text) {
  if (text == "immediate") return StrategySpec::Kind::immediate;
  if (text == "delayed") return StrategySpec::Kind::delayed;
  if (text == "timed") return StrategySpec::Kind::timed;
  throw Error(ErrorCode::InvalidConfig, "unknown strategy '" + text + "'");
}

latency::SamplingMode parse_sampling(const std::string& text) {
  if (text == "physical") return latency::SamplingMode::physical;
  if (text == "allow-negative" || text == "allow_negative") {
    return latency::SamplingMode::allow_negative;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown sampling mode '" + text + "'");
}

const char* to_string(latency::SamplingMode mode) noexcept {
  return mode == latency::SamplingMode::physical ? "physical" : "allow-negative";
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open scenario file");
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  return parse_scenario(doc, path.parent_path(), path.string());
}

Scenario parse_scenario(const ordered_json& doc, const std::filesystem::path& base_dir,
                        const std::string& source) {
  if (!doc.is_object()) schema_error(source, "scenario must be a JSON object");
  try {
    Scenario sc;
    sc.name = doc.value("name", std::string("unnamed"));
    sc.provenance = doc.value("provenance", std::string());

    std::optional<latency::LatencyCatalog> catalog;
    if (doc.contains("catalog")) {
      catalog = latency::load_latency_csv(base_dir / doc.at("catalog").get<std::string>());
    }
    if (!doc.contains("latency")) schema_error(source, "missing 'latency'");
    const auto& lat = doc.at("latency");
    const latency::LatencyCatalog* cat = catalog ? &*catalog : nullptr;
    auto small = leg_model(lat.at("small"), cat, base_dir, source, sc.small_leg);
    auto large = leg_model(lat.at("large"), cat, base_dir, source, sc.large_leg);
    sc.latency = {std::move(small), std::move(large), number_at(lat, "hft_ms", source)};
    if (!(sc.latency.h > 0.0)) throw Error(ErrorCode::InvalidConfig, "hft_ms must be positive");

    if (!doc.contains("market")) schema_error(source, "missing 'market'");
    const auto& mk = doc.at("market");
    if (mk.contains("costs")) {
      const auto& c = mk.at("costs");
      sc.costs = {number_at(c, "e_sim", source), number_at(c, "e_l", source),
                  number_at(c, "e_s", source)};
    } else {
      if (mk.contains("linear")) {
        const auto& l = mk.at("linear");
        sc.linear = market::LinearMarketPair{number_at(l, "a", source), number_at(l, "b", source),
                                             number_at(l, "c", source), number_at(l, "d", source),
                                             number_at(l, "x_bar", source)};
      } else if (mk.contains("price_impact")) {
        const auto& p = mk.at("price_impact");
        sc.linear = market::LinearMarketPair::from_price_impact(
            number_at(p, "p0", source), number_at(p, "x_s", source), number_at(p, "x_l", source),
            number_at(p, "impact_s_bp", source), number_at(p, "impact_l_bp", source),
            number_at(p, "reference_qty", source));
      } else {
        schema_error(source, "market needs one of 'costs', 'linear', 'price_impact'");
      }
      sc.equilibrium = market::solve_equilibrium(*sc.linear);
      sc.split = market::split_order(*sc.linear, *sc.equilibrium, number_at(mk, "order_qty", source));
      // Only cost differences drive the decision; the excess form keeps them exact.
      sc.costs = analytics::CostProfile::from(
          market::excess_expenditures(*sc.linear, *sc.equilibrium, sc.split->p_star));
    }

    const auto strat = doc.value("strategy", ordered_json{{"kind", "immediate"}});
    sc.strategy.kind = parse_strategy_kind(strat.value("kind", std::string("immediate")));
    if (sc.strategy.kind == StrategySpec::Kind::delayed) {
      const auto& d = strat.contains("delta") ? strat.at("delta") : ordered_json("optimal");
      if (d.is_number()) {
        sc.strategy.delta = d.get<double>();
      } else if (!(d.is_string() && d.get<std::string>() == "optimal")) {
        schema_error(source, "'delta' must be a number or \"optimal\"");
      }
    } else if (sc.strategy.kind == StrategySpec::Kind::timed) {
      if (strat.contains("t_exec")) sc.strategy.t_exec = number_at(strat, "t_exec", source);
      if (strat.contains("target")) sc.strategy.target = number_at(strat, "target", source);
      if (sc.strategy.t_exec.has_value() == sc.strategy.target.has_value()) {
        schema_error(source, "timed strategy needs exactly one of 't_exec' or 'target'");
      }
    }

    const auto sim = doc.value("sim", ordered_json::object());
    sc.sim.replications = sim.value("replications", std::uint64_t{100000});
    sc.sim.master_seed = sim.value("seed", std::uint64_t{1});
    sc.sim.sampling_mode = parse_sampling(sim.value("sampling", std::string("physical")));
    sc.sim.clock_jitter = sim.value("jitter_ms", 0.0);
    sc.sim.hft_enabled = sim.value("hft", true);
    return sc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source, 0, e.what());
  }
}

engine::Strategy resolve_strategy(const Scenario& sc) {
  switch (sc.strategy.kind) {
    case StrategySpec::Kind::immediate:
      return engine::Strategy::immediate();
    case StrategySpec::Kind::delayed: {
      if (sc.strategy.delta) return engine::Strategy::delayed(*sc.strategy.delta);
      const bool gaussian = latency::is_gaussian(sc.latency.dist_s) &&
                            latency::is_gaussian(sc.latency.dist_l);
      const double delta = gaussian ? analytics::optimal_delay_closed_form(sc.latency, sc.costs)
                                    : analytics::optimal_delay_numeric(sc.latency, sc.costs).delta;
      return engine::Strategy::delayed(delta);
    }
    case StrategySpec::Kind::timed: {
      const double t = sc.strategy.t_exec
                           ? *sc.strategy.t_exec
                           : analytics::choose_execution_time(sc.latency, *sc.strategy.target);
      return engine::Strategy::timed(t);
    }
  }
  return engine::Strategy::immediate();
}

}  // namespace latarb::cli
