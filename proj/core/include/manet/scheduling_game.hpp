#pragma once

// Weighted-goodput scheduling under one active link per transmitting node and
// fixed rates, solved as a supermodular power/price game.
//
// Players are indexed 0..N-1 in the order of SchedulingInstance::links; player
// i transmits from links[i].origin with weight weights[i] and rate rates[i].

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "manet/channel.hpp"
#include "manet/matrix.hpp"
#include "manet/topology.hpp"

namespace manet {

class SchedulingInstance {
 public:
  /// Throws std::invalid_argument unless every link is valid, origins are
  /// distinct, and weights/rates are finite, non-negative and sized per link.
  SchedulingInstance(NetworkTopology topology, std::vector<Link> links,
                     std::vector<double> weights, std::vector<double> rates);

  std::size_t players() const { return links_.size(); }
  const NetworkTopology& topology() const { return topology_; }
  const LinkChannel& channel() const { return channel_; }
  std::span<const Link> links() const { return links_; }
  double weight(std::size_t i) const { return weights_[i]; }
  double rate(std::size_t i) const { return rates_[i]; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> rates() const { return rates_; }
  const PowerBounds& bounds(std::size_t i) const { return topology_.bounds(links_[i].origin); }

  /// Same links and rates, different weights.
  SchedulingInstance with_weights(std::vector<double> weights) const;

  /// Success probability q_i of player i's link.
  double success(std::span<const double> powers, std::size_t i) const;
  /// Weighted goodput sum_i w_i mu_i q_i.
  double objective(std::span<const double> powers) const;
  /// Gradient of objective() with respect to every power.
  std::vector<double> objective_gradient(std::span<const double> powers) const;

  std::vector<double> min_powers() const;
  std::vector<double> max_powers() const;

 private:
  NetworkTopology topology_;
  std::vector<Link> links_;
  std::vector<double> weights_;
  std::vector<double> rates_;
  LinkChannel channel_;
};

/// w_m mu_m dq_m/dp_n, the (non-positive) price player m charges player n.
double raw_price(const SchedulingInstance& inst, std::span<const double> powers, std::size_t m,
                 std::size_t n);

/// raw_price divided by q_n(p, mu_n).
double normalized_price(const SchedulingInstance& inst, std::span<const double> powers,
                        std::size_t m, std::size_t n);

/// J_n = w_n mu_n log q_n + p_n c_n with player n's power replaced by `own_power`.
double payoff(const SchedulingInstance& inst, std::size_t n, double own_power,
              std::span<const double> powers, double sum_price);

/// dJ_n / dp_n at `own_power`.
double payoff_slope(const SchedulingInstance& inst, std::size_t n, double own_power,
                    std::span<const double> powers, double sum_price);

/// Maximizer of J_n over [P_min, P_max]. Boundary solutions are detected from
/// the sign of the analytic slope; interior ones by golden-section search to a
/// width of 1e-8 (P_max - P_min), then polished on the slope's root.
double best_response_power(const SchedulingInstance& inst, std::size_t n,
                           std::span<const double> powers, double sum_price);

/// Lower ends of the feasible price intervals: the minimum of each normalized
/// price over a uniform power grid (`points` per axis), widened by `widen`.
/// Entry (m, n) bounds the price m charges n; the diagonal is zero.
Matrix price_floors(const SchedulingInstance& inst, std::size_t points = 8, double widen = 0.1);

/// Projection of normalized_price(p, m, n) onto [floors(m, n), 0].
double best_response_price(const SchedulingInstance& inst, std::span<const double> powers,
                           std::size_t m, std::size_t n, const Matrix& floors);

struct GameState {
  std::vector<double> powers;
  /// prices(m, n) for m != n; diagonal unused.
  Matrix prices;
  /// c_n = sum over m != n of prices(m, n).
  std::vector<double> sum_prices;
};

struct GameIterate {
  std::size_t iteration = 0;
  std::vector<double> powers;
  std::vector<double> sum_prices;
  double objective = 0.0;
};

struct GameConfig {
  double tolerance = 1e-7;
  std::size_t max_iterations = 200;
  std::size_t floor_grid_points = 8;
  double floor_widen = 0.1;
};

struct GameResult {
  GameState state;
  /// Iterate 0 is the least element the algorithm starts from.
  std::vector<GameIterate> trace;
  bool converged = false;
  /// Iterations that moved the state by at least the tolerance.
  std::size_t iterations = 0;
  /// Price updates that hit the floor of their interval.
  std::size_t floor_clamps = 0;
};

/// Round-robin power/price iteration from the least element: powers at P_min
/// and prices at their floors. Each iteration updates powers in ascending
/// player order against the freshest opponent powers, then recomputes every
/// price at the new power vector. Stops when both moved less than the
/// tolerance (sup norm) or after max_iterations (converged = false).
/// `floors` defaults to price_floors(inst, config.floor_grid_points, config.floor_widen).
GameResult run_round_robin(const SchedulingInstance& inst, const GameConfig& config = {},
                      const Matrix* floors = nullptr);

struct KktResidual {
  /// Per-player stationarity residual after choosing the multipliers.
  std::vector<double> stationarity;
  /// Per-player max(|nu_l (P_min - p)|, |nu_u (p - P_max)|).
  std::vector<double> complementarity;
  std::vector<double> nu_lower;
  std::vector<double> nu_upper;
  /// Raw objective gradient.
  std::vector<double> gradient;

  double max_residual() const;
};

/// Interior players get zero multipliers and residual |dF/dp_n|. Players at a
/// bound get the sign-consistent multiplier and residual max(0, wrong-sign slope).
KktResidual kkt_residual(const SchedulingInstance& inst, std::span<const double> powers);

struct ScheduleSolution {
  std::vector<double> powers;
  double objective = 0.0;
};

inline constexpr std::size_t kMaxBruteForcePlayers = 5;

/// Exhaustive maximization of the weighted goodput over a uniform grid with
/// `points` per axis. Ties keep the lexicographically smallest power vector.
/// Throws std::invalid_argument above kMaxBruteForcePlayers.
ScheduleSolution brute_force_schedule(const SchedulingInstance& inst, std::size_t points);

/// Cyclic coordinate ascent from `start`: each coordinate is globally maximized
/// on a 1-D grid and polished on the gradient root. Converges to a point that
/// satisfies the KKT conditions of the weighted goodput problem.
ScheduleSolution local_kkt_search(const SchedulingInstance& inst, std::span<const double> start,
                                  std::size_t max_sweeps = 2000, double tolerance = 1e-13);

/// brute_force_schedule followed by local_kkt_search from the best grid point.
ScheduleSolution refined_brute_force_schedule(const SchedulingInstance& inst, std::size_t points);

struct ReceiverCandidate {
  Link link;
  double weight = 0.0;
  double rate = 0.0;
  /// Interference power measured at link.end.
  double interference = 0.0;
};

/// Markov-bound ratio w mu / (e^mu - 1) * G p / (I + noise).
double receiver_score(const NetworkTopology& topo, const ReceiverCandidate& c, double power);

/// Candidate with the largest receiver_score; ties go to the smallest link.
/// Throws std::invalid_argument for an empty set or a candidate not leaving `node`.
Link select_receiver(const NetworkTopology& topo, NodeId node,
                     std::span<const ReceiverCandidate> candidates, double power);

}  // namespace manet
