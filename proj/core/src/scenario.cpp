#include "manet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "manet/csv.hpp"
#include "manet/over_air.hpp"
#include "manet/rng.hpp"

namespace manet {

namespace {

LinkChannel unit_two_link_channel() {
  Matrix g(2, 2, 1.0);
  return LinkChannel{g, {1.0, 1.0}};
}

std::string indexed(const std::string& prefix, std::size_t i) { return prefix + std::to_string(i); }

class Writer {
 public:
  Writer(std::filesystem::path dir, Manifest manifest, std::ostream& log)
      : dir_(std::move(dir)), manifest_(std::move(manifest)), log_(log) {}

  void operator()(const std::string& name, const CsvTable& table) const {
    write_csv(dir_ / name, table, manifest_);
    log_ << "wrote " << (dir_ / name).string() << " (" << table.row_count() << " rows)\n";
  }

 private:
  std::filesystem::path dir_;
  Manifest manifest_;
  std::ostream& log_;
};

CsvTable property_table() {
  return CsvTable({"property", "samples", "violations", "worst_margin", "passed"});
}

void add_report(CsvTable& t, const PropertyReport& r) {
  t.add_row({r.property_id, std::to_string(r.samples), std::to_string(r.violations),
             format_number(r.worst_margin), r.passed() ? "1" : "0"});
}

void write_sweep(const Writer& write, const std::string& stem, const LinkChannel& channel,
                 const RateSet& rates, const GoodputSweep& sweep, CsvTable& reports) {
  const GoodputSweepTrace trace = trace_goodput_sweep(channel, rates, sweep);
  CsvTable t({"power", "goodput", "rate"});
  for (std::size_t i = 0; i < trace.power.size(); ++i) {
    t.add_row(std::vector<double>{trace.power[i], trace.goodput[i], trace.rate[i]});
  }
  write(stem + ".csv", t);
  for (const auto& r : check_goodput_properties(channel, rates, sweep)) {
    PropertyReport named = r;
    named.property_id = stem + ":" + r.property_id;
    add_report(reports, named);
  }
}

CsvTable region_summary_table() {
  return CsvTable({"region", "delta", "raw_points", "hull_vertices", "hull_area"});
}

void write_region(const Writer& write, const std::string& stem, const LinkChannel& channel,
                  const RateSet& rates, const PowerGrid& grid, double delta, CsvTable& summary) {
  const GoodputRegion region =
      enumerate_region(channel, rates, grid, DroppingProfile::uniform(channel.link_count(), delta));
  std::vector<std::string> header;
  for (std::size_t l = 0; l < region.link_count(); ++l) header.push_back(indexed("g", l));
  CsvTable raw(header);
  for (const auto& p : region.raw_points) raw.add_row(p.g);
  write(stem + "_raw.csv", raw);
  std::string vertices = "";
  std::string area = "";
  if (region.hull) {
    CsvTable hull({"g0", "g1"});
    for (const auto& v : *region.hull) hull.add_row(std::vector<double>{v[0], v[1]});
    write(stem + "_hull.csv", hull);
    vertices = std::to_string(region.hull->size());
    area = format_number(polygon_area(*region.hull));
  }
  summary.add_row({stem, format_number(delta), std::to_string(region.raw_points.size()), vertices, area});
}

std::string delta_stem(const std::string& prefix, double delta) {
  std::string s = format_number(delta);
  std::replace(s.begin(), s.end(), '.', 'p');
  return prefix + "_delta_" + s;
}

std::vector<double> origin_rates(const std::vector<Link>& links, const std::vector<double>& node_rates) {
  std::vector<double> r;
  for (const auto& l : links) r.push_back(node_rates.at(l.origin));
  return r;
}

CsvTable num_trace_table(const NumTrace& trace, std::size_t flows, std::size_t nodes) {
  std::vector<std::string> header{"t", "objective"};
  for (std::size_t f = 0; f < flows; ++f) header.push_back(indexed("x", f));
  for (std::size_t n = 0; n < nodes; ++n) {
    for (std::size_t d = 0; d < trace.destinations.size(); ++d)
      header.push_back("lambda_" + std::to_string(n) + "_" + std::to_string(trace.destinations[d]));
  }
  CsvTable t(header);
  for (const auto& it : trace.iterations) {
    std::vector<double> row{static_cast<double>(it.t), it.objective};
    row.insert(row.end(), it.x.begin(), it.x.end());
    for (double v : it.lambda.values()) row.push_back(v);
    t.add_row(row);
  }
  return t;
}

NumConfig num_config(const ExperimentConfig& cfg, std::vector<double> node_rates) {
  NumConfig c;
  c.stepsize = cfg.num.stepsize;
  c.iterations = cfg.num.iterations;
  c.scheduler = cfg.num.scheduler;
  c.goodput_mode = cfg.num.goodput;
  c.rate_cap = cfg.num.rate_cap;
  c.node_rates = std::move(node_rates);
  c.game = cfg.game.config;
  c.oracle_points = cfg.num.oracle_points;
  c.oracle_sweeps = cfg.num.oracle_sweeps;
  return c;
}

std::vector<CommodityFlow> commodity_flows(const std::vector<FlowSpec>& flows) {
  std::vector<CommodityFlow> out;
  for (const auto& f : flows) out.push_back({f.source, f.destination, f.utility});
  return out;
}

void add_num_summary(CsvTable& t, const std::string& label, const NumTrace& trace) {
  const std::size_t from = trace.iterations.size() / 2;
  std::vector<std::string> row{label, format_number(trace.mean_objective(from))};
  std::string rates;
  for (double x : trace.mean_rates(from)) rates += (rates.empty() ? "" : " ") + format_number(x);
  row.push_back(rates);
  row.push_back(std::to_string(trace.non_converged));
  t.add_row(row);
}

int run_props(const ExperimentConfig& cfg, std::uint64_t seed, const Writer& write) {
  SampleSpace space;
  space.min_links = cfg.props.min_links;
  space.max_links = cfg.props.max_links;
  const SuccessPropertyResult res = check_success_properties(
      space, cfg.props.samples, Rng::derive(seed, "scenario/props").next_u64(), cfg.props.tolerance);
  CsvTable reports = property_table();
  for (const auto& r : res.reports) add_report(reports, r);
  reports.add_row({"P5-constant-differences", std::to_string(res.constant_difference_samples),
                   res.max_constant_difference <= kConstantDifferenceTolerance ? "0" : "1",
                   format_number(-res.max_constant_difference),
                   res.max_constant_difference <= kConstantDifferenceTolerance ? "1" : "0"});
  for (std::size_t i = 0; i < cfg.props.sweeps.size(); ++i) {
    write_sweep(write, indexed("sweep_", i), *cfg.link_channel, cfg.rates, cfg.props.sweeps[i], reports);
  }
  write("props_report.csv", reports);
  return kExitOk;
}

int run_region(const ExperimentConfig& cfg, const Writer& write) {
  const auto& s = cfg.region;
  LinkChannel channel = cfg.link_channel ? *cfg.link_channel
                                         : LinkChannel::from_topology(*cfg.topology, s.links);
  const std::size_t links = channel.link_count();
  PowerGrid grid;
  if (s.grid == PowerGrid::Kind::SumSimplex) {
    grid = PowerGrid::simplex(links, s.total, s.points);
  } else {
    std::vector<PowerBounds> axes;
    for (std::size_t l = 0; l < links; ++l) {
      double hi = 0.0;
      if (!s.power_max.empty()) {
        if (s.power_max.size() != links)
          throw std::invalid_argument("region.power_max needs one entry per link");
        hi = s.power_max[l];
      } else if (cfg.topology && !s.links.empty()) {
        hi = cfg.topology->bounds(s.links[l].origin).max;
      } else {
        throw std::invalid_argument("region.power_max is required with link_channel");
      }
      axes.push_back({0.0, hi});
    }
    grid = PowerGrid::box(axes, s.points);
  }
  CsvTable summary = region_summary_table();
  for (double d : s.deltas) write_region(write, delta_stem("region", d), channel, cfg.rates, grid, d, summary);
  write("region_summary.csv", summary);
  return kExitOk;
}

int run_game(const ExperimentConfig& cfg, std::uint64_t seed, const Writer& write, std::ostream& log) {
  const auto& s = cfg.game;
  std::vector<double> weights = s.weights.empty() ? std::vector<double>(s.links.size(), 1.0) : s.weights;
  SchedulingInstance inst(*cfg.topology, s.links, weights, origin_rates(s.links, cfg.node_rates));
  const GameResult res = run_round_robin(inst, s.config);

  const std::size_t n = inst.players();
  std::vector<std::string> header{"iteration"};
  for (std::size_t i = 0; i < n; ++i) header.push_back(indexed("p", i));
  for (std::size_t i = 0; i < n; ++i) header.push_back(indexed("c", i));
  header.push_back("objective");
  CsvTable trace(header);
  for (const auto& it : res.trace) {
    std::vector<double> row{static_cast<double>(it.iteration)};
    row.insert(row.end(), it.powers.begin(), it.powers.end());
    row.insert(row.end(), it.sum_prices.begin(), it.sum_prices.end());
    row.push_back(it.objective);
    trace.add_row(row);
  }
  write("game_trace.csv", trace);

  const double objective = inst.objective(res.state.powers);
  CsvTable summary({"converged", "iterations", "floor_clamps", "objective", "kkt_residual",
                    "oracle_objective", "gap"});
  std::string oracle = "";
  std::string gap = "";
  if (s.oracle) {
    // Multi-start: the best grid point and the game's fixed point both seed the local search.
    ScheduleSolution best = refined_brute_force_schedule(inst, s.oracle_points);
    const ScheduleSolution from_game = local_kkt_search(inst, res.state.powers);
    if (from_game.objective > best.objective) best = from_game;
    oracle = format_number(best.objective);
    gap = format_number(std::max(best.objective - objective, 0.0));
  }
  summary.add_row({res.converged ? "1" : "0", std::to_string(res.iterations),
                   std::to_string(res.floor_clamps), format_number(objective),
                   format_number(kkt_residual(inst, res.state.powers).max_residual()), oracle, gap});
  write("game_summary.csv", summary);

  if (s.over_air) {
    // Player m's receiver broadcasts phi_m; player n's transmitter listens. By
    // reciprocity that channel carries the gain n's transmission sees at m's receiver.
    const std::vector<double> phi_player = broadcast_prices(inst, res.state.powers);
    const NetworkTopology& topo = inst.topology();
    Rng rng = Rng::derive(seed, "scenario/over-air");
    OverAirOptions options;
    options.symbols = s.symbols;
    CsvTable air({"player", "node", "c_reference", "c_over_air", "relative_error"});
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> phi(topo.node_count(), 0.0);
      for (std::size_t m = 0; m < n; ++m) {
        if (m != i) phi[inst.links()[m].end] += phi_player[m];
      }
      const NodeId node = inst.links()[i].origin;
      const double q_hat = success_probability_measured(
          res.state.powers[i], measured_interference(inst, res.state.powers, i),
          topo.noise(inst.links()[i].end), topo.gain(inst.links()[i].end, node), inst.rate(i));
      const double ref = aggregate_prices_reference(topo, phi, node, q_hat);
      const double got = aggregate_prices_over_air(topo, phi, node, q_hat, options, rng);
      const double err = ref == 0.0 ? std::abs(got) : std::abs(got - ref) / std::abs(ref);
      air.add_row({std::to_string(i), std::to_string(node), format_number(ref), format_number(got),
                   format_number(err)});
    }
    write("game_over_air.csv", air);
  }
  if (!res.converged) {
    log << "game did not converge within " << s.config.max_iterations << " iterations\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}

int run_num(const ExperimentConfig& cfg, std::uint64_t seed, const Writer& write, std::ostream& log) {
  const auto flows = commodity_flows(cfg.flows);
  const NumTrace trace = num_loop(*cfg.topology, flows, num_config(cfg, cfg.node_rates), seed);
  write("num_trace.csv", num_trace_table(trace, flows.size(), cfg.topology->node_count()));
  CsvTable summary({"scheduler", "mean_objective", "mean_rates", "non_converged"});
  add_num_summary(summary, cfg.num.scheduler == SchedulerKind::Game ? "game" : "oracle", trace);
  write("num_summary.csv", summary);
  if (trace.non_converged > 0) {
    log << trace.non_converged << " scheduling games did not converge\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}

int run_sim(const ExperimentConfig& cfg, std::uint64_t seed, const Writer& write) {
  std::vector<Source> sources;
  for (const auto& f : cfg.flows) sources.push_back({f.source, f.destination, f.rate});
  StabilityConfig sc;
  sc.policy = cfg.sim.policy;
  sc.scheduler = cfg.sim.scheduler;
  sc.arrivals = cfg.sim.arrivals;
  sc.slots = cfg.sim.slots;
  sc.node_rates = cfg.node_rates;
  sc.fixed = cfg.sim.fixed;
  sc.drops = cfg.drops;
  sc.game = cfg.game.config;
  sc.oracle_points = cfg.num.oracle_points;
  sc.oracle_sweeps = cfg.num.oracle_sweeps;
  sc.slope_threshold = cfg.sim.slope_threshold;
  const StabilityReport rep = run_stability_experiment(*cfg.topology, sources, cfg.sim.scale, sc, seed);

  std::vector<std::string> header{"t", "total_backlog"};
  for (NodeId d : rep.destinations) header.push_back(indexed("backlog_", d));
  CsvTable trace(header);
  for (std::size_t t = 0; t < rep.total_backlog.size(); ++t) {
    std::vector<double> row{static_cast<double>(t), rep.total_backlog[t]};
    for (double v : rep.commodity_backlog.row(t)) row.push_back(v);
    trace.add_row(row);
  }
  write("sim_trace.csv", trace);

  CsvTable summary({"scale", "slots", "mean_total_backlog", "slope", "stable", "attempts",
                    "failures", "drops", "delivered", "dropped"});
  summary.add_row({format_number(cfg.sim.scale), std::to_string(cfg.sim.slots),
                   format_number(rep.mean_total_backlog), format_number(rep.slope),
                   rep.stable ? "1" : "0", std::to_string(rep.stats.attempts),
                   std::to_string(rep.stats.failures), std::to_string(rep.stats.drops),
                   format_number(rep.stats.delivered), format_number(rep.stats.dropped)});
  write("sim_summary.csv", summary);
  return kExitOk;
}

int run_figures(const ExperimentConfig& cfg, std::uint64_t seed, const Writer& write, std::ostream& log) {
  CsvTable reports = property_table();
  const SweepSetup f2 = figure2_setup();
  write_sweep(write, "fig2_sweep", f2.channel, f2.rates, f2.sweep, reports);
  const SweepSetup f3 = figure3_setup();
  write_sweep(write, "fig3_sweep", f3.channel, f3.rates, f3.sweep, reports);
  write("fig23_properties.csv", reports);

  CsvTable regions = region_summary_table();
  const RegionSetup f4 = figure4_setup(cfg.region.points);
  for (double d : cfg.region.deltas)
    write_region(write, delta_stem("fig4", d), f4.channel, f4.rates, f4.grid, d, regions);
  const RegionSetup f5 = figure5_setup(cfg.region.points);
  write_region(write, "fig5", f5.channel, f5.rates, f5.grid, 1.0, regions);
  write("fig45_regions.csv", regions);

  const NumSetup f6 = figure6_setup();
  NumConfig nc = num_config(cfg, f6.node_rates);
  CsvTable summary({"scheduler", "mean_objective", "mean_rates", "non_converged"});
  std::size_t failures = 0;
  for (SchedulerKind kind : {SchedulerKind::Game, SchedulerKind::Oracle}) {
    nc.scheduler = kind;
    const std::string label = kind == SchedulerKind::Game ? "game" : "oracle";
    const NumTrace trace = num_loop(f6.topology, f6.flows, nc, seed);
    write("fig6_" + label + "_trace.csv",
          num_trace_table(trace, f6.flows.size(), f6.topology.node_count()));
    add_num_summary(summary, label, trace);
    failures += trace.non_converged;
  }
  write("fig6_summary.csv", summary);
  if (failures > 0) {
    log << failures << " scheduling games did not converge\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}

}  // namespace

SweepSetup figure2_setup(std::size_t points) {
  GoodputSweep sweep;
  sweep.link = 0;
  sweep.swept = 0;
  sweep.base_powers = {20.0, 5.0};
  sweep.from = 0.0;
  sweep.to = 20.0;
  sweep.points = points;
  return {unit_two_link_channel(), RateSet::arithmetic(0.4, 0.4, 2.0), sweep};
}

SweepSetup figure3_setup(std::size_t points) {
  GoodputSweep sweep;
  sweep.link = 0;
  sweep.swept = 1;
  sweep.base_powers = {25.0, 20.0};
  sweep.from = 0.0;
  sweep.to = 20.0;
  sweep.points = points;
  return {unit_two_link_channel(), RateSet::arithmetic(0.4, 0.4, 2.0), sweep};
}

RegionSetup figure4_setup(std::size_t points) {
  return {unit_two_link_channel(), RateSet::arithmetic(0.4, 0.4, 1.8),
          PowerGrid::box({{0.0, 2.0}, {0.0, 3.0}}, points)};
}

RegionSetup figure5_setup(std::size_t points) {
  Matrix g(2, 2);
  g(0, 0) = 1.0;
  g(0, 1) = 0.5;
  g(1, 0) = 0.8;
  g(1, 1) = 1.0;
  return {LinkChannel{g, {1.0, 1.0}}, RateSet::arithmetic(0.2, 0.2, 0.6),
          PowerGrid::simplex(2, 10.0, points)};
}

NumSetup figure6_setup() {
  // Diamond: 0 at (0, 0), 1 at (1, 1), 2 at (1, -1), 3 at (2, 0). Nodes two
  // units apart are out of range, so traffic to node 3 needs a relay.
  const double xy[4][2] = {{0.0, 0.0}, {1.0, 1.0}, {1.0, -1.0}, {2.0, 0.0}};
  Matrix g(4, 4);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      if (r == c) continue;
      const double d = std::hypot(xy[r][0] - xy[c][0], xy[r][1] - xy[c][1]);
      g(r, c) = d < 1.9 ? std::pow(d, -3.0) : 0.0;
    }
  }
  NetworkTopology topo(g, std::vector<double>(4, 0.05), std::vector<PowerBounds>(4, {0.1, 2.0}));
  // One source with two commodities.
  std::vector<CommodityFlow> flows{{0, 2, {1.0, 0.0}}, {0, 3, {1.0, 0.0}}};
  return {std::move(topo), std::move(flows), std::vector<double>(4, 1.0)};
}

int run_scenario(const ExperimentConfig& config, std::uint64_t seed,
                 const std::filesystem::path& out_dir, std::ostream& log) {
  try {
    std::filesystem::create_directories(out_dir);
    const Writer write(out_dir, Manifest{std::string(scenario_name(config.scenario)), config.hash, seed},
                       log);
    switch (config.scenario) {
      case Scenario::Props: return run_props(config, seed, write);
      case Scenario::Region: return run_region(config, write);
      case Scenario::Game: return run_game(config, seed, write, log);
      case Scenario::Num: return run_num(config, seed, write, log);
      case Scenario::Sim: return run_sim(config, seed, write);
      case Scenario::Figures: return run_figures(config, seed, write, log);
    }
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace manet
