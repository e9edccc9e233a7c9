#include "manet/goodput_region.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace manet {

DroppingProfile DroppingProfile::uniform(std::size_t links, double delta) {
  DroppingProfile d{std::vector<double>(links, delta)};
  d.validate(links);
  return d;
}

void DroppingProfile::validate(std::size_t links) const {
  if (delta.size() != links)
    throw std::invalid_argument("dropping profile needs one entry per link");
  for (double d : delta)
    if (!(d >= 0.0 && d <= 1.0))
      throw std::invalid_argument("continuation probabilities must lie in [0, 1]");
}

PowerGrid PowerGrid::box(std::vector<PowerBounds> axes, std::size_t points) {
  PowerGrid g;
  g.kind = Kind::Box;
  g.axes = std::move(axes);
  g.points = points;
  return g;
}

PowerGrid PowerGrid::simplex(std::size_t links, double total, std::size_t points) {
  PowerGrid g;
  g.kind = Kind::SumSimplex;
  g.axes.assign(links, PowerBounds{0.0, total});
  g.total = total;
  g.points = points;
  return g;
}

std::size_t PowerGrid::dimension() const { return axes.size(); }

void PowerGrid::for_each(const std::function<void(std::span<const double>)>& visit) const {
  const std::size_t dim = axes.size();
  if (dim == 0 || points < 2) throw std::invalid_argument("power grid needs >= 2 points per axis");
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> p(dim);
  const std::size_t last = (kind == Kind::Box) ? points - 1 : points;
  while (true) {
    std::size_t used = 0;
    for (std::size_t a = 0; a < dim; ++a) used += idx[a];
    if (kind == Kind::Box) {
      for (std::size_t a = 0; a < dim; ++a)
        p[a] = axes[a].min + (axes[a].max - axes[a].min) * static_cast<double>(idx[a]) /
                                 static_cast<double>(points - 1);
      visit(p);
    } else if (used <= points) {
      for (std::size_t a = 0; a < dim; ++a)
        p[a] = total * static_cast<double>(idx[a]) / static_cast<double>(points);
      visit(p);
    }
    // Odometer increment, last axis fastest.
    std::size_t a = dim;
    while (a > 0) {
      --a;
      if (idx[a] < last) {
        ++idx[a];
        break;
      }
      idx[a] = 0;
      if (a == 0) return;
    }
  }
}

std::vector<MaxGoodput> dropping_goodputs(const LinkChannel& channel,
                                          std::span<const double> powers, const RateSet& rates,
                                          const DroppingProfile& delta) {
  const std::size_t n = channel.link_count();
  std::vector<MaxGoodput> out(n);
  for (std::size_t l = 0; l < n; ++l) {
    if (!(powers[l] > 0.0)) continue;
    MaxGoodput best{-1.0, 0.0};
    for (double mu : rates.values()) {
      const double d = delta.delta[l];
      // delta = 0 never needs q; skip the evaluation so the box is exact.
      const double eff = (d == 0.0) ? mu
                                    : mu * (1.0 - d * (1.0 - success_probability(channel, powers, l, mu)));
      if (eff > best.goodput) best = {eff, mu};
    }
    out[l] = best;
  }
  return out;
}

GoodputRegion enumerate_region(const LinkChannel& channel, const RateSet& rates,
                               const PowerGrid& grid, const DroppingProfile& delta) {
  channel.validate();
  const std::size_t n = channel.link_count();
  if (grid.dimension() != n) throw std::invalid_argument("power grid dimension != link count");
  delta.validate(n);

  GoodputRegion region;
  grid.for_each([&](std::span<const double> p) {
    const auto best = dropping_goodputs(channel, p, rates, delta);
    GoodputPoint pt;
    pt.g.reserve(n);
    for (const auto& b : best) pt.g.push_back(b.goodput);
    region.raw_points.push_back(std::move(pt));
  });

  if (n == 2) {
    std::vector<Point2> pts;
    pts.reserve(region.raw_points.size());
    for (const auto& p : region.raw_points) pts.push_back({p.g[0], p.g[1]});
    region.hull = convex_hull_2d(pts);
  }
  return region;
}

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

}  // namespace

std::vector<Point2> convex_hull_2d(std::span<const Point2> points) {
  std::vector<Point2> pts;
  pts.reserve(3 * points.size() + 1);
  pts.push_back({0.0, 0.0});
  for (const auto& p : points) {
    pts.push_back(p);
    pts.push_back({p[0], 0.0});
    pts.push_back({0.0, p[1]});
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  // Andrew's monotone chain.
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double polygon_area(std::span<const Point2> polygon) {
  double twice = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const auto& a = polygon[i];
    const auto& b = polygon[(i + 1) % polygon.size()];
    twice += a[0] * b[1] - b[0] * a[1];
  }
  return 0.5 * twice;
}

namespace {

bool hull_contains(const std::vector<Point2>& hull, const Point2& p, double tol) {
  if (hull.empty()) return false;
  if (hull.size() == 1) return std::hypot(p[0] - hull[0][0], p[1] - hull[0][1]) <= tol;
  if (hull.size() == 2) {
    const auto& a = hull[0];
    const auto& b = hull[1];
    const double len2 = (b[0] - a[0]) * (b[0] - a[0]) + (b[1] - a[1]) * (b[1] - a[1]);
    double t = ((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p[0] - a[0] - t * (b[0] - a[0]), p[1] - a[1] - t * (b[1] - a[1])) <= tol;
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    // Signed distance to the edge line, positive on the inner (left) side.
    if (cross(a, b, p) / len < -tol) return false;
  }
  return true;
}

}  // namespace

bool contains(const GoodputRegion& region, const GoodputPoint& point, double tolerance) {
  const std::size_t n = point.g.size();
  if (n == 2) {
    if (!region.hull) throw std::logic_error("two-link region has no hull");
    return hull_contains(*region.hull, {point.g[0], point.g[1]}, tolerance);
  }
  for (double v : point.g)
    if (v < -tolerance) return false;
  return std::any_of(region.raw_points.begin(), region.raw_points.end(), [&](const auto& r) {
    if (r.g.size() != n) return false;
    for (std::size_t l = 0; l < n; ++l)
      if (point.g[l] > r.g[l] + tolerance) return false;
    return true;
  });
}

}  // namespace manet
