#pragma once

// Slotted multi-commodity queues driven by sampled link outcomes, with ARQ
// retention, optional randomized dropping and a goodput backpressure policy.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "manet/matrix.hpp"
#include "manet/num_controller.hpp"
#include "manet/rng.hpp"
#include "manet/topology.hpp"

namespace manet {

/// Backlog u(n, d) per node and commodity; a destination's own entry is
/// absorbed and stays 0.
struct QueueMatrix {
  std::vector<NodeId> destinations;
  Matrix u;

  static QueueMatrix empty(std::size_t nodes, std::vector<NodeId> destinations);
  double total() const;
  std::vector<double> per_commodity() const;
};

enum class ArrivalDistribution { Deterministic, Poisson };

struct ArrivalProcess {
  /// Mean arrivals per slot, nodes x commodities.
  Matrix mean;
  ArrivalDistribution distribution = ArrivalDistribution::Poisson;

  Matrix draw(Rng& rng) const;
};

/// Continuation probability per link: after a failed transmission the packet
/// is kept for retransmission with probability delta and dropped otherwise.
/// delta = 1 never drops, delta = 0 always drops.
struct DropPolicy {
  double default_delta = 1.0;
  std::vector<std::pair<Link, double>> overrides;

  double delta(const Link& link) const;
  void validate() const;
};

struct Transmission {
  Link link;
  double power = 0.0;
  /// Scheduled amount per commodity; the sum must not exceed `rate`.
  std::vector<double> allocation;
  double rate = 0.0;
  /// Success probability q of this slot's transmission.
  double success = 0.0;
};

/// Fills Transmission::success from the Rayleigh outage model, treating the
/// given transmissions as the set of simultaneously active links.
void assign_success(const NetworkTopology& topology, std::span<Transmission> transmissions);

struct StepStats {
  double sent = 0.0;
  double delivered = 0.0;
  double dropped = 0.0;
  std::size_t attempts = 0;
  std::size_t failures = 0;
  std::size_t drops = 0;

  StepStats& operator+=(const StepStats& o);
};

/// One slot: each transmission sends min(backlog, allocation) per commodity;
/// the link succeeds with probability q. On success the sent amount leaves the
/// origin and reaches the end node; on failure it stays unless the drop draw
/// discards it. Arrivals are added afterwards.
QueueMatrix step(const QueueMatrix& queues, std::span<const Transmission> schedule,
                 const DropPolicy& drops, const Matrix& arrivals, Rng& rng,
                 StepStats* stats = nullptr);

enum class PolicyKind { GoodputBackpressure, Fixed };

struct FixedTransmission {
  Link link;
  double power = 0.0;
  std::size_t commodity = 0;
};

struct Source {
  NodeId source = 0;
  NodeId destination = 0;
  /// Mean arrival rate before scaling.
  double rate = 0.0;
};

struct StabilityConfig {
  PolicyKind policy = PolicyKind::GoodputBackpressure;
  SchedulerKind scheduler = SchedulerKind::Game;
  ArrivalDistribution arrivals = ArrivalDistribution::Poisson;
  std::size_t slots = 50000;
  /// Scheduled rate of each node's transmissions.
  std::vector<double> node_rates;
  /// Used by PolicyKind::Fixed every slot.
  std::vector<FixedTransmission> fixed;
  DropPolicy drops;
  GameConfig game;
  std::size_t oracle_points = 10;
  std::size_t oracle_sweeps = 50;
  double slope_threshold = 1e-3;
};

struct StabilityReport {
  /// Total backlog after every slot.
  std::vector<double> total_backlog;
  /// Per-commodity backlog after every slot, slots x commodities.
  Matrix commodity_backlog;
  std::vector<NodeId> destinations;
  /// Time-average backlog per node and commodity.
  Matrix mean_backlog;
  double mean_total_backlog = 0.0;
  /// Least-squares slope of the total backlog over the last half of the run.
  double slope = 0.0;
  bool stable = false;
  StepStats stats;
};

/// Least-squares slope of ys against their index.
double regression_slope(std::span<const double> ys);

/// Runs `slots` slots with arrivals scale * rate per source. The backpressure
/// policy weights links by queue differentials and schedules through the same
/// receiver selection and power solver as the utility-maximization loop.
StabilityReport run_stability_experiment(const NetworkTopology& topology,
                                         std::span<const Source> sources, double scale,
                                         const StabilityConfig& config, std::uint64_t seed);

}  // namespace manet
