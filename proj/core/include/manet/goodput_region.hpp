#pragma once

// Brute-force construction of the achievable goodput set over a power grid,
// with per-link randomized dropping, and planar convex hulls for two links.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "manet/channel.hpp"

namespace manet {

/// Per-link expected goodputs (nats/slot).
struct GoodputPoint {
  std::vector<double> g;
};

/// Continuation probability delta_l per link; 1 - delta_l is the drop
/// probability after an erroneous transmission. delta = 1 never drops.
struct DroppingProfile {
  std::vector<double> delta;

  static DroppingProfile uniform(std::size_t links, double delta);
  void validate(std::size_t links) const;
};

/// Finite set of power vectors over which the achievable set is enumerated.
struct PowerGrid {
  enum class Kind {
    /// Independent uniform axes [lo_l, hi_l]. A zero power means the link is silent.
    Box,
    /// All links share one transmitter: p_l >= 0, sum p_l <= total, on a
    /// uniform lattice with `points` steps per axis.
    SumSimplex,
  };

  Kind kind = Kind::Box;
  std::vector<PowerBounds> axes;
  double total = 0.0;
  std::size_t points = 50;

  static PowerGrid box(std::vector<PowerBounds> axes, std::size_t points = 50);
  static PowerGrid simplex(std::size_t links, double total, std::size_t points = 50);

  std::size_t dimension() const;
  /// Calls `visit` for every power vector on the grid, in lexicographic order.
  void for_each(const std::function<void(std::span<const double>)>& visit) const;
};

/// Per-link best dropping-aware expected goodput max over rates of
/// mu (1 - delta (1 - q)), with the smallest maximizing rate. A silent link
/// (zero power) contributes zero goodput and no interference.
std::vector<MaxGoodput> dropping_goodputs(const LinkChannel& channel,
                                          std::span<const double> powers, const RateSet& rates,
                                          const DroppingProfile& delta);

struct GoodputRegion {
  std::vector<GoodputPoint> raw_points;
  /// Counter-clockwise hull vertices (two-link regions only).
  std::optional<std::vector<std::array<double, 2>>> hull;

  std::size_t link_count() const { return raw_points.empty() ? 0 : raw_points.front().g.size(); }
};

/// Throws std::invalid_argument on shape mismatch or an empty rate set.
GoodputRegion enumerate_region(const LinkChannel& channel, const RateSet& rates,
                               const PowerGrid& grid, const DroppingProfile& delta);

using Point2 = std::array<double, 2>;

/// Convex hull of the points together with the origin and every point's axis
/// projections (time sharing with silence is always feasible). Vertices are in
/// counter-clockwise order starting from the origin, collinear points dropped.
std::vector<Point2> convex_hull_2d(std::span<const Point2> points);

/// Inside or on the hull within `tolerance` for two-link regions; for more
/// links, componentwise dominance by some raw point. Throws std::logic_error
/// for a two-link region whose hull has not been computed.
bool contains(const GoodputRegion& region, const GoodputPoint& point, double tolerance = 1e-9);

/// Area enclosed by a counter-clockwise polygon.
double polygon_area(std::span<const Point2> polygon);

}  // namespace manet
