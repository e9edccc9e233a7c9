#pragma once

// Price exchange through measured interference and simultaneous broadcasts:
// every node only needs its own direct gain, its measured interference and
// the superposition of the other nodes' broadcast prices.

#include <cstddef>
#include <span>
#include <vector>

#include "manet/rng.hpp"
#include "manet/scheduling_game.hpp"

namespace manet {

/// Mean interference power at player i's receiver, sum over other players m of
/// G(end_i, origin_m) p_m.
double measured_interference(const SchedulingInstance& inst, std::span<const double> powers,
                             std::size_t i);

/// phi_m = w_m mu_m q_hat_m gamma_m / (G_mm p_m), the single price a node broadcasts.
double broadcast_price(double weight, double rate, double q_measured, double direct_gain,
                       double power);

/// Broadcast prices of every player of the instance at `powers`, using the
/// measured-interference success probability.
std::vector<double> broadcast_prices(const SchedulingInstance& inst,
                                     std::span<const double> powers);

struct OverAirOptions {
  std::size_t symbols = 10000;
  /// Unit-mean exponential power fading per symbol; otherwise F = 1.
  bool rayleigh = true;
  /// Draw the noise power per symbol (exponential, mean sigma^2). Off by
  /// default: the received power is taken as the fading sum plus sigma^2.
  bool noisy = false;
};

/// Sum price recovered by node `receiver` from the averaged received power of
/// the simultaneous broadcasts: -(mean |Y|^2 - sigma^2) / q. `phi` has one
/// entry per node of the topology (zero for silent nodes); the broadcast of
/// node m reaches `receiver` with gain G(receiver, m) by reciprocity.
double aggregate_prices_over_air(const NetworkTopology& topo, std::span<const double> phi,
                                 NodeId receiver, double q_receiver, const OverAirOptions& options,
                                 Rng& rng);

/// The noiseless, fading-free reference -(1/q) sum_m G(receiver, m) phi_m.
double aggregate_prices_reference(const NetworkTopology& topo, std::span<const double> phi,
                                  NodeId receiver, double q_receiver);

}  // namespace manet
