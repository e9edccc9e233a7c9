#include "manet/topology.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace manet {

NetworkTopology::NetworkTopology(Matrix gains, std::vector<double> noise,
                                 std::vector<PowerBounds> bounds)
    : gains_(std::move(gains)), noise_(std::move(noise)), bounds_(std::move(bounds)) {
  const std::size_t n = noise_.size();
  if (n < 2) throw std::invalid_argument("topology needs at least 2 nodes");
  if (gains_.rows() != n || gains_.cols() != n)
    throw std::invalid_argument("gain matrix must be " + std::to_string(n) + "x" +
                                std::to_string(n));
  if (bounds_.size() != n) throw std::invalid_argument("one power bound per node required");
  for (double g : gains_.values())
    if (!std::isfinite(g) || g < 0.0)
      throw std::invalid_argument("gains must be finite and non-negative");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(noise_[i]) || noise_[i] < 0.0)
      throw std::invalid_argument("noise of node " + std::to_string(i) + " must be >= 0");
    const auto& b = bounds_[i];
    if (!(b.min > 0.0))
      throw std::invalid_argument("power_min of node " + std::to_string(i) + " must be > 0");
    if (!(b.max >= b.min) || !std::isfinite(b.max))
      throw std::invalid_argument("power_max of node " + std::to_string(i) +
                                  " must be >= power_min");
  }
}

void NetworkTopology::check_link(const Link& link) const {
  if (link.origin >= node_count() || link.end >= node_count())
    throw std::invalid_argument("link references unknown node");
  if (link.origin == link.end) throw std::invalid_argument("link origin equals end");
}

LinkChannel LinkChannel::from_topology(const NetworkTopology& topo, std::span<const Link> links) {
  LinkChannel ch;
  const std::size_t l_count = links.size();
  ch.gain = Matrix(l_count, l_count);
  ch.noise.resize(l_count);
  for (std::size_t l = 0; l < l_count; ++l) {
    topo.check_link(links[l]);
    ch.noise[l] = topo.noise(links[l].end);
    for (std::size_t j = 0; j < l_count; ++j) {
      if (j != l && links[j].origin == links[l].origin) continue;
      ch.gain(l, j) = topo.gain(links[l].end, links[j].origin);
    }
  }
  return ch;
}

void LinkChannel::validate() const {
  const std::size_t l_count = noise.size();
  if (gain.rows() != l_count || gain.cols() != l_count)
    throw std::invalid_argument("link gain matrix shape does not match link count");
  for (double g : gain.values())
    if (!std::isfinite(g) || g < 0.0)
      throw std::invalid_argument("link gains must be finite and non-negative");
  for (double s : noise)
    if (!std::isfinite(s) || s < 0.0) throw std::invalid_argument("noise must be >= 0");
}

}  // namespace manet
