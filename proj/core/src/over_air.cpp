#include "manet/over_air.hpp"

#include <cmath>
#include <stdexcept>

namespace manet {

double measured_interference(const SchedulingInstance& inst, std::span<const double> powers,
                             std::size_t i) {
  const auto links = inst.links();
  double sum = 0.0;
  for (std::size_t m = 0; m < links.size(); ++m) {
    if (m == i) continue;
    sum += inst.topology().gain(links[i].end, links[m].origin) * powers[m];
  }
  return sum;
}

double broadcast_price(double weight, double rate, double q_measured, double direct_gain,
                       double power) {
  if (!(power > 0.0) || !(direct_gain > 0.0))
    throw std::invalid_argument("broadcast price needs positive power and direct gain");
  return weight * rate * q_measured * sinr_threshold(rate) / (direct_gain * power);
}

std::vector<double> broadcast_prices(const SchedulingInstance& inst,
                                     std::span<const double> powers) {
  std::vector<double> phi(inst.players());
  for (std::size_t m = 0; m < inst.players(); ++m) {
    const Link& l = inst.links()[m];
    const double g = inst.topology().gain(l.end, l.origin);
    const double q_hat = success_probability_measured(
        powers[m], measured_interference(inst, powers, m), inst.topology().noise(l.end), g,
        inst.rate(m));
    phi[m] = broadcast_price(inst.weight(m), inst.rate(m), q_hat, g, powers[m]);
  }
  return phi;
}

double aggregate_prices_over_air(const NetworkTopology& topo, std::span<const double> phi,
                                 NodeId receiver, double q_receiver, const OverAirOptions& options,
                                 Rng& rng) {
  if (phi.size() != topo.node_count())
    throw std::invalid_argument("one broadcast price per node required");
  if (options.symbols == 0) throw std::invalid_argument("need at least one symbol");
  if (!(q_receiver > 0.0)) throw std::invalid_argument("receiver success probability must be > 0");
  for (double v : phi)
    if (!(v >= 0.0)) throw std::invalid_argument("broadcast prices must be >= 0");
  const double sigma2 = topo.noise(receiver);
  // The known noise power is subtracted symbol by symbol. Averaging |Y|^2 first
  // and subtracting afterwards is the same quantity but cancels catastrophically
  // when the broadcast sum is far below sigma^2.
  double total = 0.0;
  for (std::size_t s = 0; s < options.symbols; ++s) {
    double excess = options.noisy ? rng.exponential(sigma2) - sigma2 : 0.0;
    for (NodeId m = 0; m < topo.node_count(); ++m) {
      if (m == receiver || phi[m] == 0.0) continue;
      const double fading = options.rayleigh ? rng.exponential(1.0) : 1.0;
      excess += topo.gain(receiver, m) * fading * phi[m];
    }
    total += excess;
  }
  return -(total / static_cast<double>(options.symbols)) / q_receiver;
}

double aggregate_prices_reference(const NetworkTopology& topo, std::span<const double> phi,
                                  NodeId receiver, double q_receiver) {
  if (phi.size() != topo.node_count())
    throw std::invalid_argument("one broadcast price per node required");
  double sum = 0.0;
  for (NodeId m = 0; m < topo.node_count(); ++m)
    if (m != receiver) sum += topo.gain(receiver, m) * phi[m];
  return -sum / q_receiver;
}

}  // namespace manet
