#pragma once

// Dual decomposition of the utility maximization problem: per-source input
// rate control, backpressure weights per link, and the projected subgradient
// update of the per-(node, destination) prices.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "manet/matrix.hpp"
#include "manet/scheduling_game.hpp"
#include "manet/topology.hpp"

namespace manet {

/// U(x) = weight * log(x + offset).
struct UtilitySpec {
  double weight = 1.0;
  double offset = 0.0;

  double value(double x) const;
  double marginal(double x) const;
};

struct CommodityFlow {
  NodeId source = 0;
  NodeId destination = 0;
  UtilitySpec utility;
};

/// Destinations in order of first appearance in `flows`; commodity d is
/// destinations[d].
std::vector<NodeId> commodity_destinations(std::span<const CommodityFlow> flows);

/// Maximizer of U(x) - lambda x over x >= 0, capped at `rate_cap` (which is
/// also the answer for lambda = 0).
double input_rate(const UtilitySpec& utility, double lambda, double rate_cap = 10.0);

/// lambda(n, d) >= 0 per node and commodity; a destination's own entry stays 0.
struct DualPrices {
  std::vector<NodeId> destinations;
  Matrix lambda;

  static DualPrices zeros(std::size_t nodes, std::vector<NodeId> destinations);
  std::size_t commodities() const { return destinations.size(); }
};

struct BackpressureWeights {
  std::vector<Link> links;
  std::vector<double> weight;
  /// Commodity attaining the weight; empty when the weight is zero.
  std::vector<std::optional<std::size_t>> commodity;
};

/// w_l = max_d max(lambda(b, d) - lambda(e, d), 0); ties go to the smallest d.
BackpressureWeights backpressure_weights(const Matrix& lambda, std::span<const Link> links);
BackpressureWeights backpressure_weights(const DualPrices& prices, std::span<const Link> links);

/// Amount of commodity `commodity` carried over `link` in one iteration.
struct LinkFlow {
  Link link;
  std::size_t commodity = 0;
  double amount = 0.0;
};

/// lambda(n, d) <- [lambda(n, d) + step (x(n, d) - out(n, d) + in(n, d))]^+,
/// where `arrivals` is the N x D matrix of exogenous input rates.
DualPrices dual_update(const DualPrices& prices, const Matrix& arrivals,
                       std::span<const LinkFlow> flows, double stepsize);

/// Every directed link of an N-node network, ordered by (origin, end).
std::vector<Link> all_links(std::size_t nodes);

enum class SchedulerKind { Game, Oracle };
enum class GoodputMode { Expected, Realized };

struct NumConfig {
  double stepsize = 0.05;
  std::size_t iterations = 1000;
  SchedulerKind scheduler = SchedulerKind::Game;
  GoodputMode goodput_mode = GoodputMode::Expected;
  double rate_cap = 10.0;
  /// Fixed scheduled rate of each node's transmissions (nats/slot).
  std::vector<double> node_rates;
  GameConfig game;
  std::size_t oracle_points = 10;
  std::size_t oracle_sweeps = 50;
};

/// Per-iteration choice of transmitters, receivers and powers for given weights.
struct ScheduleDecision {
  std::vector<Link> links;
  std::vector<double> weights;
  std::vector<double> powers;
  std::vector<std::optional<std::size_t>> commodity;
  /// Expected goodput mu q per chosen link.
  std::vector<double> goodput;
  double objective = 0.0;
  bool converged = true;
};

/// Solves the weighted scheduling problem for one set of link weights: every
/// node with a positive-weight outgoing link picks one receiver by the
/// Markov-bound ratio among its links with positive gain (interference
/// measured from `previous_powers`, one entry
/// per node, 0 for silent nodes), then powers come from the game or the
/// refined brute-force oracle. Unit-weight price floors are cached per active
/// link set.
class Scheduler {
 public:
  Scheduler(NetworkTopology topology, std::vector<double> node_rates, SchedulerKind kind,
            GameConfig game = {}, std::size_t oracle_points = 10, std::size_t oracle_sweeps = 50);

  ScheduleDecision decide(const BackpressureWeights& weights,
                          std::span<const double> previous_powers);

  const NetworkTopology& topology() const { return topology_; }

 private:
  const Matrix& unit_floors(const std::vector<Link>& links);

  NetworkTopology topology_;
  std::vector<double> node_rates_;
  SchedulerKind kind_;
  GameConfig game_;
  std::size_t oracle_points_;
  std::size_t oracle_sweeps_;
  std::vector<std::pair<std::vector<Link>, Matrix>> floor_cache_;
};

struct NumIterate {
  std::size_t t = 0;
  Matrix lambda;
  /// Input rate per flow.
  std::vector<double> x;
  /// Weighted goodput sum_l w_l g_l of the schedule.
  double objective = 0.0;
  bool scheduler_converged = true;
};

struct NumTrace {
  std::vector<NodeId> destinations;
  std::vector<NumIterate> iterations;
  std::size_t non_converged = 0;

  /// Mean of objective and x over iterations [from, end).
  double mean_objective(std::size_t from) const;
  std::vector<double> mean_rates(std::size_t from) const;
};

/// Closed loop: rate control per source, backpressure weights, scheduling,
/// goodputs, dual update. Throws std::invalid_argument for inconsistent input.
NumTrace num_loop(const NetworkTopology& topology, std::span<const CommodityFlow> flows,
                  const NumConfig& config, std::uint64_t seed);

}  // namespace manet
