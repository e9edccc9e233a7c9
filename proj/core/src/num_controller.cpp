#include "manet/num_controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "manet/rng.hpp"

namespace manet {

double UtilitySpec::value(double x) const { return weight * std::log(x + offset); }

double UtilitySpec::marginal(double x) const { return weight / (x + offset); }

std::vector<NodeId> commodity_destinations(std::span<const CommodityFlow> flows) {
  std::vector<NodeId> out;
  for (const auto& f : flows) {
    if (std::find(out.begin(), out.end(), f.destination) == out.end()) out.push_back(f.destination);
  }
  return out;
}

double input_rate(const UtilitySpec& utility, double lambda, double rate_cap) {
  if (!(utility.weight > 0.0) || utility.offset < 0.0)
    throw std::invalid_argument("utility needs weight > 0 and offset >= 0");
  if (lambda < 0.0) throw std::invalid_argument("dual price must be >= 0");
  if (lambda == 0.0) return rate_cap;
  // U'(x) = lambda  =>  x = weight / lambda - offset.
  return std::clamp(utility.weight / lambda - utility.offset, 0.0, rate_cap);
}

DualPrices DualPrices::zeros(std::size_t nodes, std::vector<NodeId> destinations) {
  for (NodeId d : destinations) {
    if (d >= nodes) throw std::invalid_argument("destination out of range");
  }
  DualPrices p;
  p.lambda = Matrix(nodes, destinations.size());
  p.destinations = std::move(destinations);
  return p;
}

BackpressureWeights backpressure_weights(const Matrix& lambda, std::span<const Link> links) {
  BackpressureWeights out;
  out.links.assign(links.begin(), links.end());
  out.weight.reserve(links.size());
  out.commodity.reserve(links.size());
  for (const auto& l : links) {
    if (l.origin >= lambda.rows() || l.end >= lambda.rows())
      throw std::invalid_argument("link endpoint outside the price matrix");
    double best = 0.0;
    std::optional<std::size_t> arg;
    for (std::size_t d = 0; d < lambda.cols(); ++d) {
      const double diff = lambda(l.origin, d) - lambda(l.end, d);
      if (diff > best) {
        best = diff;
        arg = d;
      }
    }
    out.weight.push_back(best);
    out.commodity.push_back(arg);
  }
  return out;
}

BackpressureWeights backpressure_weights(const DualPrices& prices, std::span<const Link> links) {
  return backpressure_weights(prices.lambda, links);
}

DualPrices dual_update(const DualPrices& prices, const Matrix& arrivals,
                       std::span<const LinkFlow> flows, double stepsize) {
  const std::size_t n = prices.lambda.rows();
  const std::size_t dd = prices.commodities();
  if (arrivals.rows() != n || arrivals.cols() != dd)
    throw std::invalid_argument("arrival matrix must be nodes x commodities");
  if (!(stepsize > 0.0)) throw std::invalid_argument("stepsize must be > 0");

  Matrix drift = arrivals;
  for (const auto& f : flows) {
    if (f.link.origin >= n || f.link.end >= n || f.commodity >= dd)
      throw std::invalid_argument("link flow out of range");
    drift(f.link.origin, f.commodity) -= f.amount;
    drift(f.link.end, f.commodity) += f.amount;
  }
  DualPrices next = prices;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dd; ++d) {
      next.lambda(i, d) = std::max(0.0, prices.lambda(i, d) + stepsize * drift(i, d));
    }
  }
  for (std::size_t d = 0; d < dd; ++d) next.lambda(prices.destinations[d], d) = 0.0;
  return next;
}

std::vector<Link> all_links(std::size_t nodes) {
  std::vector<Link> out;
  for (NodeId b = 0; b < nodes; ++b) {
    for (NodeId e = 0; e < nodes; ++e) {
      if (b != e) out.push_back({b, e});
    }
  }
  return out;
}

Scheduler::Scheduler(NetworkTopology topology, std::vector<double> node_rates, SchedulerKind kind,
                     GameConfig game, std::size_t oracle_points, std::size_t oracle_sweeps)
    : topology_(std::move(topology)),
      node_rates_(std::move(node_rates)),
      kind_(kind),
      game_(game),
      oracle_points_(oracle_points),
      oracle_sweeps_(oracle_sweeps) {
  if (node_rates_.size() != topology_.node_count())
    throw std::invalid_argument("need one rate per node");
  for (double r : node_rates_) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("node rates must be > 0");
  }
  if (oracle_points_ < 2) throw std::invalid_argument("oracle needs >= 2 grid points");
}

const Matrix& Scheduler::unit_floors(const std::vector<Link>& links) {
  for (const auto& [key, floors] : floor_cache_) {
    if (key == links) return floors;
  }
  std::vector<double> rates;
  for (const auto& l : links) rates.push_back(node_rates_[l.origin]);
  SchedulingInstance unit(topology_, links, std::vector<double>(links.size(), 1.0), rates);
  floor_cache_.emplace_back(links, price_floors(unit, game_.floor_grid_points, game_.floor_widen));
  return floor_cache_.back().second;
}

ScheduleDecision Scheduler::decide(const BackpressureWeights& weights,
                                   std::span<const double> previous_powers) {
  const std::size_t n = topology_.node_count();
  if (previous_powers.size() != n) throw std::invalid_argument("need one previous power per node");

  ScheduleDecision out;
  for (NodeId node = 0; node < n; ++node) {
    std::vector<ReceiverCandidate> candidates;
    std::vector<std::size_t> source_index;
    for (std::size_t k = 0; k < weights.links.size(); ++k) {
      const Link& l = weights.links[k];
      if (l.origin != node || !(weights.weight[k] > 0.0)) continue;
      // A link exists only where the path gain is positive.
      if (!(topology_.gain(l.end, l.origin) > 0.0)) continue;
      double interference = 0.0;
      for (NodeId m = 0; m < n; ++m) {
        if (m != node && m != l.end) interference += topology_.gain(l.end, m) * previous_powers[m];
      }
      candidates.push_back({l, weights.weight[k], node_rates_[node], interference});
      source_index.push_back(k);
    }
    if (candidates.empty()) continue;
    const Link chosen = select_receiver(topology_, node, candidates, topology_.bounds(node).max);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (candidates[c].link == chosen) {
        out.links.push_back(chosen);
        out.weights.push_back(candidates[c].weight);
        out.commodity.push_back(weights.commodity[source_index[c]]);
        break;
      }
    }
  }
  if (out.links.empty()) return out;

  std::vector<double> rates;
  for (const auto& l : out.links) rates.push_back(node_rates_[l.origin]);
  SchedulingInstance inst(topology_, out.links, out.weights, rates);

  if (kind_ == SchedulerKind::Game) {
    const Matrix& unit = unit_floors(out.links);
    // Normalized prices are linear in the charging player's weight.
    Matrix floors = unit;
    for (std::size_t m = 0; m < floors.rows(); ++m) {
      for (std::size_t k = 0; k < floors.cols(); ++k) floors(m, k) *= out.weights[m];
    }
    GameResult result = run_round_robin(inst, game_, &floors);
    out.powers = std::move(result.state.powers);
    out.converged = result.converged;
  } else {
    const ScheduleSolution grid = brute_force_schedule(inst, oracle_points_);
    out.powers = local_kkt_search(inst, grid.powers, oracle_sweeps_).powers;
  }
  out.objective = inst.objective(out.powers);
  for (std::size_t i = 0; i < out.links.size(); ++i) {
    out.goodput.push_back(rates[i] * inst.success(out.powers, i));
  }
  return out;
}

double NumTrace::mean_objective(std::size_t from) const {
  if (from >= iterations.size()) throw std::invalid_argument("empty averaging window");
  double s = 0.0;
  for (std::size_t t = from; t < iterations.size(); ++t) s += iterations[t].objective;
  return s / static_cast<double>(iterations.size() - from);
}

std::vector<double> NumTrace::mean_rates(std::size_t from) const {
  if (from >= iterations.size()) throw std::invalid_argument("empty averaging window");
  std::vector<double> s(iterations[from].x.size(), 0.0);
  for (std::size_t t = from; t < iterations.size(); ++t) {
    for (std::size_t f = 0; f < s.size(); ++f) s[f] += iterations[t].x[f];
  }
  for (double& v : s) v /= static_cast<double>(iterations.size() - from);
  return s;
}

NumTrace num_loop(const NetworkTopology& topology, std::span<const CommodityFlow> flows,
                  const NumConfig& config, std::uint64_t seed) {
  const std::size_t n = topology.node_count();
  if (flows.empty()) throw std::invalid_argument("at least one flow is required");
  for (const auto& f : flows) {
    if (f.source >= n || f.destination >= n || f.source == f.destination)
      throw std::invalid_argument("flow endpoints must be distinct nodes in range");
  }

  NumTrace trace;
  trace.destinations = commodity_destinations(flows);
  DualPrices prices = DualPrices::zeros(n, trace.destinations);
  const auto commodity_of = [&](NodeId dest) {
    return static_cast<std::size_t>(
        std::find(trace.destinations.begin(), trace.destinations.end(), dest) -
        trace.destinations.begin());
  };

  Scheduler scheduler(topology, config.node_rates, config.scheduler, config.game,
                      config.oracle_points, config.oracle_sweeps);
  const std::vector<Link> links = all_links(n);
  std::vector<double> powers(n, 0.0);
  Rng rng = Rng::derive(seed, "num-controller/realized-goodput");

  trace.iterations.reserve(config.iterations);
  for (std::size_t t = 0; t < config.iterations; ++t) {
    Matrix arrivals(n, prices.commodities());
    std::vector<double> x;
    for (const auto& f : flows) {
      const std::size_t d = commodity_of(f.destination);
      x.push_back(input_rate(f.utility, prices.lambda(f.source, d), config.rate_cap));
      arrivals(f.source, d) += x.back();
    }

    const BackpressureWeights w = backpressure_weights(prices, links);
    const ScheduleDecision decision = scheduler.decide(w, powers);

    std::fill(powers.begin(), powers.end(), 0.0);
    std::vector<LinkFlow> carried;
    for (std::size_t i = 0; i < decision.links.size(); ++i) {
      powers[decision.links[i].origin] = decision.powers[i];
      if (!decision.commodity[i]) continue;
      double g = decision.goodput[i];
      if (config.goodput_mode == GoodputMode::Realized) {
        const double rate = config.node_rates[decision.links[i].origin];
        g = rng.bernoulli(g / rate) ? rate : 0.0;
      }
      carried.push_back({decision.links[i], *decision.commodity[i], g});
    }

    NumIterate it;
    it.t = t;
    it.x = std::move(x);
    it.objective = decision.objective;
    it.scheduler_converged = decision.converged;
    if (!decision.converged) ++trace.non_converged;

    prices = dual_update(prices, arrivals, carried, config.stepsize);
    it.lambda = prices.lambda;
    trace.iterations.push_back(std::move(it));
  }
  return trace;
}

}  // namespace manet
