#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "manet/matrix.hpp"

namespace manet {

using NodeId = std::size_t;

/// Directed link from `origin` (transmitter) to `end` (receiver).
struct Link {
  NodeId origin = 0;
  NodeId end = 0;

  bool operator==(const Link&) const = default;
  auto operator<=>(const Link&) const = default;
};

struct PowerBounds {
  double min = 0.0;
  double max = 0.0;
};

/// Node-level description of the network: slow-fading gains, receiver noise
/// and per-node transmit power limits (Watt).
///
/// gain(rx, tx) is the path gain from node `tx` to node `rx`.
class NetworkTopology {
 public:
  /// Throws std::invalid_argument on any invariant violation: fewer than two
  /// nodes, shape mismatch, negative or non-finite gains, negative noise,
  /// P_min <= 0 or P_min > P_max.
  NetworkTopology(Matrix gains, std::vector<double> noise, std::vector<PowerBounds> bounds);

  std::size_t node_count() const { return noise_.size(); }
  double gain(NodeId rx, NodeId tx) const { return gains_(rx, tx); }
  double noise(NodeId n) const { return noise_[n]; }
  const PowerBounds& bounds(NodeId n) const { return bounds_[n]; }

  const Matrix& gains() const { return gains_; }
  std::span<const double> noise() const { return noise_; }
  std::span<const PowerBounds> bounds() const { return bounds_; }

  /// Throws std::invalid_argument if the link is a self loop or names an unknown node.
  void check_link(const Link& link) const;

 private:
  Matrix gains_;
  std::vector<double> noise_;
  std::vector<PowerBounds> bounds_;
};

/// Link-level view used by the success-probability model.
///
/// gain(l, j) is the gain from the transmitter of link j to the receiver of
/// link l; gain(l, l) is the direct gain. A zero off-diagonal entry means link
/// j does not interfere with link l.
struct LinkChannel {
  Matrix gain;
  std::vector<double> noise;

  std::size_t link_count() const { return noise.size(); }

  /// Builds the view for the given active links. Links sharing a transmitter
  /// do not interfere with each other (one active link per node in practice).
  static LinkChannel from_topology(const NetworkTopology& topo, std::span<const Link> links);

  /// Throws std::invalid_argument on shape mismatch or negative entries.
  void validate() const;
};

}  // namespace manet
