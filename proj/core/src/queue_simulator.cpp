#include "manet/queue_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "manet/channel.hpp"

namespace manet {

QueueMatrix QueueMatrix::empty(std::size_t nodes, std::vector<NodeId> destinations) {
  for (NodeId d : destinations) {
    if (d >= nodes) throw std::invalid_argument("destination out of range");
  }
  QueueMatrix q;
  q.u = Matrix(nodes, destinations.size());
  q.destinations = std::move(destinations);
  return q;
}

double QueueMatrix::total() const {
  double s = 0.0;
  for (double v : u.values()) s += v;
  return s;
}

std::vector<double> QueueMatrix::per_commodity() const {
  std::vector<double> s(u.cols(), 0.0);
  for (std::size_t n = 0; n < u.rows(); ++n) {
    for (std::size_t d = 0; d < u.cols(); ++d) s[d] += u(n, d);
  }
  return s;
}

Matrix ArrivalProcess::draw(Rng& rng) const {
  Matrix out(mean.rows(), mean.cols());
  for (std::size_t n = 0; n < mean.rows(); ++n) {
    for (std::size_t d = 0; d < mean.cols(); ++d) {
      const double m = mean(n, d);
      if (m < 0.0) throw std::invalid_argument("arrival means must be >= 0");
      if (m == 0.0) continue;
      out(n, d) = distribution == ArrivalDistribution::Deterministic
                      ? m
                      : static_cast<double>(rng.poisson(m));
    }
  }
  return out;
}

double DropPolicy::delta(const Link& link) const {
  for (const auto& [l, d] : overrides) {
    if (l == link) return d;
  }
  return default_delta;
}

void DropPolicy::validate() const {
  const auto ok = [](double d) { return d >= 0.0 && d <= 1.0; };
  if (!ok(default_delta)) throw std::invalid_argument("delta must lie in [0, 1]");
  for (const auto& o : overrides) {
    if (!ok(o.second)) throw std::invalid_argument("delta must lie in [0, 1]");
  }
}

void assign_success(const NetworkTopology& topology, std::span<Transmission> transmissions) {
  if (transmissions.empty()) return;
  std::vector<Link> links;
  std::vector<double> powers;
  for (const auto& t : transmissions) {
    links.push_back(t.link);
    powers.push_back(t.power);
  }
  const LinkChannel channel = LinkChannel::from_topology(topology, links);
  for (std::size_t i = 0; i < transmissions.size(); ++i) {
    transmissions[i].success = success_probability(channel, powers, i, transmissions[i].rate);
  }
}

StepStats& StepStats::operator+=(const StepStats& o) {
  sent += o.sent;
  delivered += o.delivered;
  dropped += o.dropped;
  attempts += o.attempts;
  failures += o.failures;
  drops += o.drops;
  return *this;
}

QueueMatrix step(const QueueMatrix& queues, std::span<const Transmission> schedule,
                 const DropPolicy& drops, const Matrix& arrivals, Rng& rng, StepStats* stats) {
  const std::size_t n = queues.u.rows();
  const std::size_t dd = queues.u.cols();
  if (arrivals.rows() != n || arrivals.cols() != dd)
    throw std::invalid_argument("arrival matrix must be nodes x commodities");

  StepStats local;
  Matrix departures(n, dd);
  Matrix transfers(n, dd);
  for (const auto& t : schedule) {
    if (t.link.origin >= n || t.link.end >= n || t.link.origin == t.link.end)
      throw std::invalid_argument("transmission link out of range");
    if (t.allocation.size() != dd) throw std::invalid_argument("need one allocation per commodity");
    double scheduled = 0.0;
    for (double a : t.allocation) {
      if (a < 0.0) throw std::invalid_argument("allocations must be >= 0");
      scheduled += a;
    }
    if (scheduled > t.rate * (1.0 + 1e-12))
      throw std::invalid_argument("allocations exceed the scheduled rate");

    const bool success = rng.bernoulli(t.success);
    const bool keep = rng.bernoulli(drops.delta(t.link));
    ++local.attempts;
    if (!success) ++local.failures;
    const bool dropped = !success && !keep;
    if (dropped) ++local.drops;

    for (std::size_t d = 0; d < dd; ++d) {
      const double sent = std::min(queues.u(t.link.origin, d), t.allocation[d]);
      if (sent <= 0.0) continue;
      local.sent += sent;
      if (success) {
        departures(t.link.origin, d) += sent;
        transfers(t.link.end, d) += sent;
        local.delivered += sent;
      } else if (dropped) {
        departures(t.link.origin, d) += sent;
        local.dropped += sent;
      }
    }
  }

  QueueMatrix next = queues;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dd; ++d) {
      next.u(i, d) =
          std::max(queues.u(i, d) - departures(i, d), 0.0) + transfers(i, d) + arrivals(i, d);
    }
  }
  for (std::size_t d = 0; d < dd; ++d) next.u(queues.destinations[d], d) = 0.0;
  if (stats) *stats += local;
  return next;
}

double regression_slope(std::span<const double> ys) {
  const std::size_t m = ys.size();
  if (m < 2) return 0.0;
  const double mean_t = (static_cast<double>(m) - 1.0) / 2.0;
  double mean_y = 0.0;
  for (double y : ys) mean_y += y;
  mean_y /= static_cast<double>(m);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    const double dt = static_cast<double>(t) - mean_t;
    num += dt * (ys[t] - mean_y);
    den += dt * dt;
  }
  return num / den;
}

StabilityReport run_stability_experiment(const NetworkTopology& topology,
                                         std::span<const Source> sources, double scale,
                                         const StabilityConfig& config, std::uint64_t seed) {
  const std::size_t n = topology.node_count();
  if (!(scale >= 0.0)) throw std::invalid_argument("scale must be >= 0");
  if (config.slots == 0) throw std::invalid_argument("slots must be > 0");
  if (config.node_rates.size() != n) throw std::invalid_argument("need one rate per node");
  config.drops.validate();

  std::vector<NodeId> destinations;
  for (const auto& s : sources) {
    if (s.source >= n || s.destination >= n || s.source == s.destination)
      throw std::invalid_argument("source endpoints must be distinct nodes in range");
    if (s.rate < 0.0) throw std::invalid_argument("source rates must be >= 0");
    if (std::find(destinations.begin(), destinations.end(), s.destination) == destinations.end())
      destinations.push_back(s.destination);
  }
  const auto commodity_of = [&](NodeId dest) {
    return static_cast<std::size_t>(std::find(destinations.begin(), destinations.end(), dest) -
                                    destinations.begin());
  };
  for (const auto& f : config.fixed) {
    topology.check_link(f.link);
    if (f.commodity >= destinations.size()) throw std::invalid_argument("fixed commodity out of range");
  }

  ArrivalProcess arrivals{Matrix(n, destinations.size()), config.arrivals};
  for (const auto& s : sources) arrivals.mean(s.source, commodity_of(s.destination)) += scale * s.rate;

  Rng arrival_rng = Rng::derive(seed, "queue-simulator/arrivals");
  Rng channel_rng = Rng::derive(seed, "queue-simulator/channel");

  std::optional<Scheduler> scheduler;
  if (config.policy == PolicyKind::GoodputBackpressure) {
    scheduler.emplace(topology, config.node_rates, config.scheduler, config.game,
                      config.oracle_points, config.oracle_sweeps);
  }
  const std::vector<Link> links = all_links(n);
  std::vector<double> powers(n, 0.0);

  StabilityReport report;
  report.destinations = destinations;
  report.total_backlog.reserve(config.slots);
  report.commodity_backlog = Matrix(config.slots, destinations.size());
  report.mean_backlog = Matrix(n, destinations.size());
  QueueMatrix queues = QueueMatrix::empty(n, destinations);

  for (std::size_t t = 0; t < config.slots; ++t) {
    std::vector<Transmission> schedule;
    if (config.policy == PolicyKind::Fixed) {
      for (const auto& f : config.fixed) {
        Transmission tx{f.link, f.power, std::vector<double>(destinations.size(), 0.0),
                        config.node_rates[f.link.origin], 0.0};
        tx.allocation[f.commodity] = tx.rate;
        schedule.push_back(std::move(tx));
      }
    } else {
      const BackpressureWeights w = backpressure_weights(queues.u, links);
      const ScheduleDecision decision = scheduler->decide(w, powers);
      std::fill(powers.begin(), powers.end(), 0.0);
      for (std::size_t i = 0; i < decision.links.size(); ++i) {
        const Link& l = decision.links[i];
        powers[l.origin] = decision.powers[i];
        Transmission tx{l, decision.powers[i], std::vector<double>(destinations.size(), 0.0),
                        config.node_rates[l.origin], 0.0};
        if (decision.commodity[i]) tx.allocation[*decision.commodity[i]] = tx.rate;
        schedule.push_back(std::move(tx));
      }
    }
    assign_success(topology, schedule);
    queues = step(queues, schedule, config.drops, arrivals.draw(arrival_rng), channel_rng,
                  &report.stats);

    report.total_backlog.push_back(queues.total());
    const std::vector<double> per = queues.per_commodity();
    for (std::size_t d = 0; d < per.size(); ++d) report.commodity_backlog(t, d) = per[d];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < destinations.size(); ++d) report.mean_backlog(i, d) += queues.u(i, d);
    }
  }

  const double slots = static_cast<double>(config.slots);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < destinations.size(); ++d) report.mean_backlog(i, d) /= slots;
  }
  for (double v : report.total_backlog) report.mean_total_backlog += v;
  report.mean_total_backlog /= slots;
  const std::size_t half = config.slots / 2;
  report.slope = regression_slope(std::span<const double>(report.total_backlog).subspan(half));
  report.stable = report.slope <= config.slope_threshold;
  return report;
}

}  // namespace manet
