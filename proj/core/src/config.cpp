#include "manet/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "manet/rng.hpp"
#include "json.hpp"

namespace manet {

using nlohmann::json;

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Props: return "props";
    case Scenario::Region: return "region";
    case Scenario::Game: return "game";
    case Scenario::Num: return "num";
    case Scenario::Sim: return "sim";
    case Scenario::Figures: return "figures";
  }
  return "?";
}

std::optional<Scenario> parse_scenario(std::string_view name) {
  for (Scenario s : {Scenario::Props, Scenario::Region, Scenario::Game, Scenario::Num,
                     Scenario::Sim, Scenario::Figures}) {
    if (scenario_name(s) == name) return s;
  }
  return std::nullopt;
}

namespace {

std::string join(const std::vector<std::string>& errors) {
  std::string out = "invalid configuration:";
  for (const auto& e : errors) out += "\n  " + e;
  return out;
}

// Typed access into a JSON object that records problems instead of throwing.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  void error(std::string message) { errors_.push_back(std::move(message)); }
  std::size_t error_count() const { return errors_.size(); }

  bool object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    error(path + " must be an object");
    return false;
  }

  void allow(const json& j, const std::string& path, std::initializer_list<std::string_view> keys) {
    for (const auto& [k, v] : j.items()) {
      bool known = false;
      for (auto a : keys) known = known || a == k;
      if (!known) error("unknown key " + path + "." + k);
    }
  }

  std::optional<double> number(const json& j, const std::string& path) {
    if (!j.is_number()) {
      error(path + " must be a number");
      return std::nullopt;
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      error(path + " must be finite");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::uint64_t> count(const json& j, const std::string& path) {
    if (!j.is_number_unsigned()) {
      error(path + " must be a non-negative integer");
      return std::nullopt;
    }
    return j.get<std::uint64_t>();
  }

  std::optional<bool> boolean(const json& j, const std::string& path) {
    if (!j.is_boolean()) {
      error(path + " must be true or false");
      return std::nullopt;
    }
    return j.get<bool>();
  }

  std::optional<std::string> string(const json& j, const std::string& path) {
    if (!j.is_string()) {
      error(path + " must be a string");
      return std::nullopt;
    }
    return j.get<std::string>();
  }

  std::optional<std::vector<double>> numbers(const json& j, const std::string& path) {
    if (!j.is_array()) {
      error(path + " must be an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    bool ok = true;
    for (std::size_t i = 0; i < j.size(); ++i) {
      auto v = number(j[i], path + "[" + std::to_string(i) + "]");
      ok = ok && v.has_value();
      out.push_back(v.value_or(0.0));
    }
    if (!ok) return std::nullopt;
    return out;
  }

  /// A scalar broadcast to `n` entries or an array of exactly `n` numbers.
  std::optional<std::vector<double>> per_node(const json& j, const std::string& path, std::size_t n) {
    if (j.is_number()) {
      auto v = number(j, path);
      if (!v) return std::nullopt;
      return std::vector<double>(n, *v);
    }
    auto v = numbers(j, path);
    if (!v) return std::nullopt;
    if (v->size() != n) {
      error(path + " has " + std::to_string(v->size()) + " entries but nodes = " + std::to_string(n));
      return std::nullopt;
    }
    return v;
  }

  std::optional<Matrix> matrix(const json& j, const std::string& path, std::size_t n,
                               const std::string& dimension_name) {
    if (!j.is_array()) {
      error(path + " must be an array of rows");
      return std::nullopt;
    }
    if (j.size() != n) {
      error(path + " has " + std::to_string(j.size()) + " rows but " + dimension_name + " = " +
            std::to_string(n));
      return std::nullopt;
    }
    Matrix m(n, n);
    bool ok = true;
    for (std::size_t r = 0; r < n; ++r) {
      const std::string rp = path + "[" + std::to_string(r) + "]";
      auto row = numbers(j[r], rp);
      if (!row) {
        ok = false;
        continue;
      }
      if (row->size() != n) {
        error(rp + " has " + std::to_string(row->size()) + " columns but " + dimension_name +
              " = " + std::to_string(n));
        ok = false;
        continue;
      }
      for (std::size_t c = 0; c < n; ++c) {
        if ((*row)[c] < 0.0) {
          error(rp + "[" + std::to_string(c) + "] must be >= 0");
          ok = false;
        }
        m(r, c) = (*row)[c];
      }
    }
    if (!ok) return std::nullopt;
    return m;
  }

  std::optional<Link> link(const json& j, const std::string& path, std::optional<std::size_t> nodes) {
    if (!object(j, path)) return std::nullopt;
    allow(j, path, {"origin", "end"});
    if (!j.contains("origin") || !j.contains("end")) {
      error(path + " needs origin and end");
      return std::nullopt;
    }
    auto b = count(j["origin"], path + ".origin");
    auto e = count(j["end"], path + ".end");
    if (!b || !e) return std::nullopt;
    if (*b == *e) {
      error(path + " origin and end must differ");
      return std::nullopt;
    }
    if (nodes && (*b >= *nodes || *e >= *nodes)) {
      error(path + " references a node outside 0.." + std::to_string(*nodes - 1));
      return std::nullopt;
    }
    return Link{*b, *e};
  }

  std::vector<Link> links(const json& j, const std::string& path, std::optional<std::size_t> nodes) {
    std::vector<Link> out;
    if (!j.is_array()) {
      error(path + " must be an array of links");
      return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (auto l = link(j[i], path + "[" + std::to_string(i) + "]", nodes)) out.push_back(*l);
    }
    return out;
  }

  template <class Enum>
  std::optional<Enum> choice(const json& j, const std::string& path,
                             std::initializer_list<std::pair<std::string_view, Enum>> options) {
    auto s = string(j, path);
    if (!s) return std::nullopt;
    std::string names;
    for (const auto& [name, value] : options) {
      if (name == *s) return value;
      names += (names.empty() ? "" : ", ") + std::string(name);
    }
    error(path + " must be one of " + names);
    return std::nullopt;
  }

 private:
  std::vector<std::string>& errors_;
};

template <class T, class F>
void read_if(const json& obj, const char* key, F&& f, T& target) {
  if (obj.contains(key)) {
    if (auto v = f(obj.at(key))) target = static_cast<T>(*v);
  }
}

void parse_topology(Reader& r, const json& j, ExperimentConfig& cfg) {
  const std::string p = "topology";
  if (!r.object(j, p)) return;
  r.allow(j, p, {"nodes", "gains", "noise", "power_min", "power_max"});
  for (const char* k : {"nodes", "gains", "noise", "power_min", "power_max"}) {
    if (!j.contains(k)) r.error(p + "." + k + " is required");
  }
  if (!j.contains("nodes")) return;
  auto n = r.count(j["nodes"], p + ".nodes");
  if (!n) return;
  if (*n < 2) {
    r.error(p + ".nodes must be >= 2");
    return;
  }
  const std::size_t before = r.error_count();
  std::optional<Matrix> gains;
  std::optional<std::vector<double>> noise, pmin, pmax;
  if (j.contains("gains")) gains = r.matrix(j["gains"], p + ".gains", *n, "nodes");
  if (j.contains("noise")) noise = r.per_node(j["noise"], p + ".noise", *n);
  if (j.contains("power_min")) pmin = r.per_node(j["power_min"], p + ".power_min", *n);
  if (j.contains("power_max")) pmax = r.per_node(j["power_max"], p + ".power_max", *n);
  if (noise) {
    for (std::size_t i = 0; i < *n; ++i) {
      if ((*noise)[i] < 0.0) r.error(p + ".noise[" + std::to_string(i) + "] must be >= 0");
    }
  }
  if (pmin) {
    for (std::size_t i = 0; i < *n; ++i) {
      if (!((*pmin)[i] > 0.0))
        r.error(p + ".power_min[" + std::to_string(i) +
                "] must be > 0 (positive minimum power is required for the game)");
    }
  }
  if (pmin && pmax) {
    for (std::size_t i = 0; i < *n; ++i) {
      if ((*pmax)[i] < (*pmin)[i])
        r.error(p + ".power_max[" + std::to_string(i) + "] must be >= power_min");
    }
  }
  if (r.error_count() != before || !gains || !noise || !pmin || !pmax) return;
  std::vector<PowerBounds> bounds;
  for (std::size_t i = 0; i < *n; ++i) bounds.push_back({(*pmin)[i], (*pmax)[i]});
  cfg.topology.emplace(*gains, *noise, bounds);
}

void parse_link_channel(Reader& r, const json& j, ExperimentConfig& cfg) {
  const std::string p = "link_channel";
  if (!r.object(j, p)) return;
  r.allow(j, p, {"gains", "noise"});
  if (!j.contains("gains") || !j.contains("noise")) {
    r.error(p + " needs gains and noise");
    return;
  }
  if (!j["gains"].is_array() || j["gains"].size() < 1) {
    r.error(p + ".gains must be a non-empty array of rows");
    return;
  }
  const std::size_t links = j["gains"].size();
  auto gains = r.matrix(j["gains"], p + ".gains", links, "links");
  auto noise = r.per_node(j["noise"], p + ".noise", links);
  if (!gains || !noise) return;
  for (std::size_t l = 0; l < links; ++l) {
    if ((*noise)[l] < 0.0) r.error(p + ".noise[" + std::to_string(l) + "] must be >= 0");
    if (!((*gains)(l, l) > 0.0)) r.error(p + ".gains[" + std::to_string(l) + "][" + std::to_string(l) + "] must be > 0");
  }
  cfg.link_channel = LinkChannel{*gains, *noise};
}

void parse_rates(Reader& r, const json& j, ExperimentConfig& cfg) {
  const std::string p = "rates";
  try {
    if (j.is_object()) {
      r.allow(j, p, {"first", "step", "last"});
      if (!j.contains("first") || !j.contains("step") || !j.contains("last")) {
        r.error(p + " needs first, step and last");
        return;
      }
      auto a = r.number(j["first"], p + ".first");
      auto s = r.number(j["step"], p + ".step");
      auto b = r.number(j["last"], p + ".last");
      if (a && s && b) cfg.rates = RateSet::arithmetic(*a, *s, *b);
    } else if (auto v = r.numbers(j, p)) {
      cfg.rates = RateSet(*v);
    }
  } catch (const std::invalid_argument& e) {
    r.error(p + ": " + e.what());
  }
}

void parse_flows(Reader& r, const json& j, ExperimentConfig& cfg, std::optional<std::size_t> nodes) {
  if (!j.is_array()) {
    r.error("flows must be an array");
    return;
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = "flows[" + std::to_string(i) + "]";
    const json& f = j[i];
    if (!r.object(f, p)) continue;
    r.allow(f, p, {"source", "destination", "weight", "offset", "rate"});
    if (!f.contains("source") || !f.contains("destination")) {
      r.error(p + " needs source and destination");
      continue;
    }
    FlowSpec spec;
    auto s = r.count(f["source"], p + ".source");
    auto d = r.count(f["destination"], p + ".destination");
    if (!s || !d) continue;
    spec.source = *s;
    spec.destination = *d;
    if (spec.source == spec.destination) r.error(p + " source and destination must differ");
    if (nodes && (spec.source >= *nodes || spec.destination >= *nodes))
      r.error(p + " references a node outside the topology");
    read_if(f, "weight", [&](const json& v) { return r.number(v, p + ".weight"); }, spec.utility.weight);
    read_if(f, "offset", [&](const json& v) { return r.number(v, p + ".offset"); }, spec.utility.offset);
    read_if(f, "rate", [&](const json& v) { return r.number(v, p + ".rate"); }, spec.rate);
    if (!(spec.utility.weight > 0.0)) r.error(p + ".weight must be > 0");
    if (spec.utility.offset < 0.0) r.error(p + ".offset must be >= 0");
    if (spec.rate < 0.0) r.error(p + ".rate must be >= 0");
    cfg.flows.push_back(spec);
  }
}

void parse_delta(Reader& r, const json& j, ExperimentConfig& cfg, std::optional<std::size_t> nodes) {
  const std::string p = "delta";
  if (j.is_number()) {
    if (auto v = r.number(j, p)) cfg.drops.default_delta = *v;
  } else if (r.object(j, p)) {
    r.allow(j, p, {"default", "links"});
    if (j.contains("default")) {
      if (auto v = r.number(j["default"], p + ".default")) cfg.drops.default_delta = *v;
    }
    if (j.contains("links")) {
      if (!j["links"].is_array()) {
        r.error(p + ".links must be an array");
      } else {
        for (std::size_t i = 0; i < j["links"].size(); ++i) {
          const std::string lp = p + ".links[" + std::to_string(i) + "]";
          const json& e = j["links"][i];
          if (!r.object(e, lp)) continue;
          r.allow(e, lp, {"origin", "end", "delta"});
          if (!e.contains("delta")) {
            r.error(lp + ".delta is required");
            continue;
          }
          json bare = {{"origin", e.value("origin", json())}, {"end", e.value("end", json())}};
          auto l = r.link(bare, lp, nodes);
          auto d = r.number(e["delta"], lp + ".delta");
          if (l && d) cfg.drops.overrides.emplace_back(*l, *d);
        }
      }
    }
  }
  try {
    cfg.drops.validate();
  } catch (const std::invalid_argument& e) {
    r.error(p + ": " + e.what());
  }
}

void parse_game_config(Reader& r, const json& j, const std::string& p, GameConfig& g) {
  read_if(j, "tolerance", [&](const json& v) { return r.number(v, p + ".tolerance"); }, g.tolerance);
  read_if(j, "max_iterations", [&](const json& v) { return r.count(v, p + ".max_iterations"); }, g.max_iterations);
  read_if(j, "floor_grid_points", [&](const json& v) { return r.count(v, p + ".floor_grid_points"); }, g.floor_grid_points);
  read_if(j, "floor_widen", [&](const json& v) { return r.number(v, p + ".floor_widen"); }, g.floor_widen);
  if (!(g.tolerance > 0.0)) r.error(p + ".tolerance must be > 0");
  if (g.max_iterations == 0) r.error(p + ".max_iterations must be > 0");
  if (g.floor_grid_points < 2) r.error(p + ".floor_grid_points must be >= 2");
  if (g.floor_widen < 0.0) r.error(p + ".floor_widen must be >= 0");
}


void parse_props(Reader& r, const json& j, ExperimentConfig& cfg) {
  const std::string p = "props";
  if (!r.object(j, p)) return;
  r.allow(j, p, {"samples", "tolerance", "min_links", "max_links", "sweeps"});
  auto& s = cfg.props;
  read_if(j, "samples", [&](const json& v) { return r.count(v, p + ".samples"); }, s.samples);
  read_if(j, "tolerance", [&](const json& v) { return r.number(v, p + ".tolerance"); }, s.tolerance);
  read_if(j, "min_links", [&](const json& v) { return r.count(v, p + ".min_links"); }, s.min_links);
  read_if(j, "max_links", [&](const json& v) { return r.count(v, p + ".max_links"); }, s.max_links);
  if (s.min_links < 2 || s.max_links < s.min_links)
    r.error(p + " needs 2 <= min_links <= max_links");
  if (s.tolerance < 0.0) r.error(p + ".tolerance must be >= 0");
  if (!j.contains("sweeps")) return;
  if (!j["sweeps"].is_array()) {
    r.error(p + ".sweeps must be an array");
    return;
  }
  for (std::size_t i = 0; i < j["sweeps"].size(); ++i) {
    const std::string sp = p + ".sweeps[" + std::to_string(i) + "]";
    const json& w = j["sweeps"][i];
    if (!r.object(w, sp)) continue;
    r.allow(w, sp, {"link", "swept", "powers", "from", "to", "points"});
    GoodputSweep sweep;
    read_if(w, "link", [&](const json& v) { return r.count(v, sp + ".link"); }, sweep.link);
    read_if(w, "swept", [&](const json& v) { return r.count(v, sp + ".swept"); }, sweep.swept);
    read_if(w, "from", [&](const json& v) { return r.number(v, sp + ".from"); }, sweep.from);
    read_if(w, "to", [&](const json& v) { return r.number(v, sp + ".to"); }, sweep.to);
    read_if(w, "points", [&](const json& v) { return r.count(v, sp + ".points"); }, sweep.points);
    if (w.contains("powers")) {
      if (auto v = r.numbers(w["powers"], sp + ".powers")) sweep.base_powers = *v;
    } else {
      r.error(sp + ".powers is required");
    }
    if (!(sweep.to > sweep.from)) r.error(sp + " needs to > from");
    if (sweep.points < 10) r.error(sp + ".points must be >= 10");
    if (cfg.link_channel) {
      const std::size_t l = cfg.link_channel->link_count();
      if (sweep.link >= l || sweep.swept >= l) r.error(sp + " link index outside link_channel");
      if (!sweep.base_powers.empty() && sweep.base_powers.size() != l)
        r.error(sp + ".powers has " + std::to_string(sweep.base_powers.size()) +
                " entries but link_channel has " + std::to_string(l) + " links");
    } else {
      r.error(sp + " requires link_channel");
    }
    s.sweeps.push_back(sweep);
  }
}

void parse_region(Reader& r, const json& j, ExperimentConfig& cfg, std::optional<std::size_t> nodes) {
  const std::string p = "region";
  if (!r.object(j, p)) return;
  r.allow(j, p, {"links", "grid", "power_max", "total", "points", "deltas"});
  auto& s = cfg.region;
  if (j.contains("links")) s.links = r.links(j["links"], p + ".links", nodes);
  if (j.contains("grid")) {
    if (auto k = r.choice<PowerGrid::Kind>(j["grid"], p + ".grid",
                                           {{"box", PowerGrid::Kind::Box},
                                            {"simplex", PowerGrid::Kind::SumSimplex}}))
      s.grid = *k;
  }
  if (j.contains("power_max")) {
    if (auto v = r.numbers(j["power_max"], p + ".power_max")) s.power_max = *v;
  }
  read_if(j, "total", [&](const json& v) { return r.number(v, p + ".total"); }, s.total);
  read_if(j, "points", [&](const json& v) { return r.count(v, p + ".points"); }, s.points);
  if (j.contains("deltas")) {
    if (auto v = r.numbers(j["deltas"], p + ".deltas")) s.deltas = *v;
  }
  for (double d : s.deltas) {
    if (d < 0.0 || d > 1.0) r.error(p + ".deltas entries must lie in [0, 1]");
  }
  if (s.points < 1) r.error(p + ".points must be >= 1");
  if (s.grid == PowerGrid::Kind::SumSimplex && !(s.total > 0.0))
    r.error(p + ".total must be > 0 for the simplex grid");
  for (double v : s.power_max) {
    if (!(v > 0.0)) r.error(p + ".power_max entries must be > 0");
  }
}

void parse_game(Reader& r, const json& j, ExperimentConfig& cfg, std::optional<std::size_t> nodes) {
  const std::string p = "game";
  if (!r.object(j, p)) return;
  r.allow(j, p, {"links", "weights", "tolerance", "max_iterations", "floor_grid_points",
                 "floor_widen", "oracle", "oracle_points", "over_air", "symbols"});
  auto& s = cfg.game;
  if (j.contains("links")) s.links = r.links(j["links"], p + ".links", nodes);
  if (j.contains("weights")) {
    if (auto v = r.numbers(j["weights"], p + ".weights")) s.weights = *v;
  }
  parse_game_config(r, j, p, s.config);
  read_if(j, "oracle", [&](const json& v) { return r.boolean(v, p + ".oracle"); }, s.oracle);
  read_if(j, "oracle_points", [&](const json& v) { return r.count(v, p + ".oracle_points"); }, s.oracle_points);
  read_if(j, "over_air", [&](const json& v) { return r.boolean(v, p + ".over_air"); }, s.over_air);
  read_if(j, "symbols", [&](const json& v) { return r.count(v, p + ".symbols"); }, s.symbols);
  if (s.symbols == 0) r.error(p + ".symbols must be > 0");
  if (!s.weights.empty() && s.weights.size() != s.links.size())
    r.error(p + ".weights has " + std::to_string(s.weights.size()) + " entries but links has " +
            std::to_string(s.links.size()));
  for (double w : s.weights) {
    if (w < 0.0) r.error(p + ".weights entries must be >= 0");
  }
  if (s.oracle && s.links.size() > kMaxBruteForcePlayers)
    r.error(p + ".oracle supports at most " + std::to_string(kMaxBruteForcePlayers) + " links");
  if (s.oracle_points < 2) r.error(p + ".oracle_points must be >= 2");
}

void parse_num(Reader& r, const json& j, ExperimentConfig& cfg) {
  const std::string p = "num";
  if (!r.object(j, p)) return;
  r.allow(j, p, {"stepsize", "iterations", "scheduler", "goodput", "rate_cap", "oracle_points",
                 "oracle_sweeps", "game"});
  auto& s = cfg.num;
  read_if(j, "stepsize", [&](const json& v) { return r.number(v, p + ".stepsize"); }, s.stepsize);
  read_if(j, "iterations", [&](const json& v) { return r.count(v, p + ".iterations"); }, s.iterations);
  read_if(j, "rate_cap", [&](const json& v) { return r.number(v, p + ".rate_cap"); }, s.rate_cap);
  read_if(j, "oracle_points", [&](const json& v) { return r.count(v, p + ".oracle_points"); }, s.oracle_points);
  read_if(j, "oracle_sweeps", [&](const json& v) { return r.count(v, p + ".oracle_sweeps"); }, s.oracle_sweeps);
  if (j.contains("scheduler")) {
    if (auto k = r.choice<SchedulerKind>(j["scheduler"], p + ".scheduler",
                                             {{"game", SchedulerKind::Game}, {"oracle", SchedulerKind::Oracle}})) s.scheduler = *k;
  }
  if (j.contains("goodput")) {
    if (auto k = r.choice<GoodputMode>(j["goodput"], p + ".goodput",
                                       {{"expected", GoodputMode::Expected},
                                        {"realized", GoodputMode::Realized}}))
      s.goodput = *k;
  }
  if (j.contains("game")) {
    if (r.object(j["game"], p + ".game")) {
      r.allow(j["game"], p + ".game", {"tolerance", "max_iterations", "floor_grid_points", "floor_widen"});
      parse_game_config(r, j["game"], p + ".game", cfg.game.config);
    }
  }
  if (!(s.stepsize > 0.0)) r.error(p + ".stepsize must be > 0");
  if (!(s.rate_cap > 0.0)) r.error(p + ".rate_cap must be > 0");
  if (s.oracle_points < 2) r.error(p + ".oracle_points must be >= 2");
}

void parse_sim(Reader& r, const json& j, ExperimentConfig& cfg, std::optional<std::size_t> nodes) {
  const std::string p = "sim";
  if (!r.object(j, p)) return;
  r.allow(j, p, {"slots", "scale", "policy", "scheduler", "arrivals", "fixed", "slope_threshold"});
  auto& s = cfg.sim;
  read_if(j, "slots", [&](const json& v) { return r.count(v, p + ".slots"); }, s.slots);
  read_if(j, "scale", [&](const json& v) { return r.number(v, p + ".scale"); }, s.scale);
  read_if(j, "slope_threshold", [&](const json& v) { return r.number(v, p + ".slope_threshold"); }, s.slope_threshold);
  if (j.contains("policy")) {
    if (auto k = r.choice<PolicyKind>(j["policy"], p + ".policy",
                                      {{"backpressure", PolicyKind::GoodputBackpressure},
                                       {"fixed", PolicyKind::Fixed}}))
      s.policy = *k;
  }
  if (j.contains("scheduler")) {
    if (auto k = r.choice<SchedulerKind>(j["scheduler"], p + ".scheduler",
                                             {{"game", SchedulerKind::Game}, {"oracle", SchedulerKind::Oracle}})) s.scheduler = *k;
  }
  if (j.contains("arrivals")) {
    if (auto k = r.choice<ArrivalDistribution>(j["arrivals"], p + ".arrivals",
                                               {{"poisson", ArrivalDistribution::Poisson},
                                                {"deterministic", ArrivalDistribution::Deterministic}}))
      s.arrivals = *k;
  }
  if (j.contains("fixed")) {
    if (!j["fixed"].is_array()) {
      r.error(p + ".fixed must be an array");
    } else {
      for (std::size_t i = 0; i < j["fixed"].size(); ++i) {
        const std::string fp = p + ".fixed[" + std::to_string(i) + "]";
        const json& f = j["fixed"][i];
        if (!r.object(f, fp)) continue;
        r.allow(f, fp, {"origin", "end", "power", "destination"});
        json bare = {{"origin", f.value("origin", json())}, {"end", f.value("end", json())}};
        auto l = r.link(bare, fp, nodes);
        if (!f.contains("power") || !f.contains("destination")) {
          r.error(fp + " needs power and destination");
          continue;
        }
        auto pw = r.number(f["power"], fp + ".power");
        auto d = r.count(f["destination"], fp + ".destination");
        if (!l || !pw || !d) continue;
        // Destinations are resolved to commodity indices once flows are known.
        s.fixed.push_back({*l, *pw, *d});
      }
    }
  }
  if (s.slots == 0) r.error(p + ".slots must be > 0");
  if (s.scale < 0.0) r.error(p + ".scale must be >= 0");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("malformed JSON: ") + e.what()});
  }

  std::vector<std::string> errors;
  Reader r(errors);
  ExperimentConfig cfg;
  if (!r.object(root, "config")) throw ConfigError(errors);
  r.allow(root, "config", {"scenario", "seed", "topology", "link_channel", "rates", "node_rates",
                           "flows", "delta", "props", "region", "game", "num", "sim"});

  if (!root.contains("scenario")) {
    r.error("scenario is required");
  } else if (auto name = r.string(root["scenario"], "scenario")) {
    if (auto s = parse_scenario(*name)) {
      cfg.scenario = *s;
    } else {
      r.error("scenario must be one of props, region, game, num, sim, figures");
    }
  }
  if (root.contains("seed")) cfg.seed = r.count(root["seed"], "seed");
  if (root.contains("topology")) parse_topology(r, root["topology"], cfg);
  std::optional<std::size_t> nodes;
  if (root.contains("topology") && root["topology"].is_object() && root["topology"].contains("nodes") &&
      root["topology"]["nodes"].is_number_unsigned())
    nodes = root["topology"]["nodes"].get<std::size_t>();
  if (root.contains("link_channel")) parse_link_channel(r, root["link_channel"], cfg);
  if (root.contains("rates")) parse_rates(r, root["rates"], cfg);
  if (root.contains("node_rates")) {
    if (nodes) {
      if (auto v = r.per_node(root["node_rates"], "node_rates", *nodes)) cfg.node_rates = *v;
    } else {
      r.error("node_rates requires topology");
    }
    for (double v : cfg.node_rates) {
      if (!(v > 0.0)) r.error("node_rates entries must be > 0");
    }
  } else if (nodes) {
    cfg.node_rates.assign(*nodes, cfg.rates.max());
  }
  if (root.contains("flows")) parse_flows(r, root["flows"], cfg, nodes);
  if (root.contains("delta")) parse_delta(r, root["delta"], cfg, nodes);
  if (root.contains("props")) parse_props(r, root["props"], cfg);
  if (root.contains("region")) parse_region(r, root["region"], cfg, nodes);
  if (root.contains("game")) parse_game(r, root["game"], cfg, nodes);
  if (root.contains("num")) parse_num(r, root["num"], cfg);
  if (root.contains("sim")) parse_sim(r, root["sim"], cfg, nodes);

  for (auto& f : cfg.sim.fixed) {
    bool found = false;
    std::vector<NodeId> dests;
    for (const auto& flow : cfg.flows) {
      if (std::find(dests.begin(), dests.end(), flow.destination) == dests.end())
        dests.push_back(flow.destination);
    }
    for (std::size_t d = 0; d < dests.size(); ++d) {
      if (dests[d] == f.commodity) {
        f.commodity = d;
        found = true;
        break;
      }
    }
    if (!found) r.error("sim.fixed destination " + std::to_string(f.commodity) + " is not a flow destination");
  }

  // Scenario-level requirements.
  const bool needs_topology = cfg.scenario == Scenario::Game || cfg.scenario == Scenario::Num ||
                              cfg.scenario == Scenario::Sim;
  if (needs_topology && !root.contains("topology")) r.error("topology is required for this scenario");
  if ((cfg.scenario == Scenario::Num || cfg.scenario == Scenario::Sim) && cfg.flows.empty() &&
      !root.contains("flows"))
    r.error("flows are required for this scenario");
  if (cfg.scenario == Scenario::Game && cfg.game.links.empty()) r.error("game.links is required");
  if (cfg.scenario == Scenario::Region) {
    if (cfg.region.links.empty() && !root.contains("link_channel"))
      r.error("region needs region.links with a topology, or link_channel");
    if (!cfg.region.links.empty() && !root.contains("topology"))
      r.error("region.links requires topology");
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));
  cfg.hash = fnv1a64(root.dump());
  return cfg;
}

}  // namespace manet
