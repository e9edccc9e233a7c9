#include "manet/scheduling_game.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace manet {

SchedulingInstance::SchedulingInstance(NetworkTopology topology, std::vector<Link> links,
                                       std::vector<double> weights, std::vector<double> rates)
    : topology_(std::move(topology)),
      links_(std::move(links)),
      weights_(std::move(weights)),
      rates_(std::move(rates)) {
  const std::size_t n = links_.size();
  if (n == 0) throw std::invalid_argument("scheduling instance needs at least one link");
  if (weights_.size() != n || rates_.size() != n)
    throw std::invalid_argument("one weight and one rate per active link required");
  for (std::size_t i = 0; i < n; ++i) {
    topology_.check_link(links_[i]);
    for (std::size_t j = 0; j < i; ++j)
      if (links_[j].origin == links_[i].origin)
        throw std::invalid_argument("node " + std::to_string(links_[i].origin) +
                                    " has more than one active link");
    if (!std::isfinite(weights_[i]) || weights_[i] < 0.0)
      throw std::invalid_argument("weights must be finite and non-negative");
    if (!std::isfinite(rates_[i]) || rates_[i] < 0.0)
      throw std::invalid_argument("rates must be finite and non-negative");
  }
  channel_ = LinkChannel::from_topology(topology_, links_);
}

SchedulingInstance SchedulingInstance::with_weights(std::vector<double> weights) const {
  return SchedulingInstance(topology_, links_, std::move(weights), rates_);
}

double SchedulingInstance::success(std::span<const double> powers, std::size_t i) const {
  return success_probability(channel_, powers, i, rates_[i]);
}

double SchedulingInstance::objective(std::span<const double> powers) const {
  double f = 0.0;
  for (std::size_t i = 0; i < players(); ++i) {
    if (weights_[i] == 0.0 || rates_[i] == 0.0) continue;
    f += weights_[i] * rates_[i] * success(powers, i);
  }
  return f;
}

std::vector<double> SchedulingInstance::objective_gradient(std::span<const double> powers) const {
  std::vector<double> grad(players(), 0.0);
  for (std::size_t m = 0; m < players(); ++m) {
    const double scale = weights_[m] * rates_[m];
    if (scale == 0.0) continue;
    const double q = success(powers, m);
    const auto g = log_success_gradient(channel_, powers, m, rates_[m]);
    for (std::size_t n = 0; n < players(); ++n) grad[n] += scale * q * g[n];
  }
  return grad;
}

std::vector<double> SchedulingInstance::min_powers() const {
  std::vector<double> p(players());
  for (std::size_t i = 0; i < players(); ++i) p[i] = bounds(i).min;
  return p;
}

std::vector<double> SchedulingInstance::max_powers() const {
  std::vector<double> p(players());
  for (std::size_t i = 0; i < players(); ++i) p[i] = bounds(i).max;
  return p;
}

double raw_price(const SchedulingInstance& inst, std::span<const double> powers, std::size_t m,
                 std::size_t n) {
  if (m == n) throw std::invalid_argument("prices are only defined between distinct players");
  const double scale = inst.weight(m) * inst.rate(m);
  if (scale == 0.0) return 0.0;
  const auto g = log_success_gradient(inst.channel(), powers, m, inst.rate(m));
  return scale * inst.success(powers, m) * g[n];
}

double normalized_price(const SchedulingInstance& inst, std::span<const double> powers,
                        std::size_t m, std::size_t n) {
  const double pi = raw_price(inst, powers, m, n);
  if (pi == 0.0) return 0.0;
  // pi / q_n, combined in log space so tiny q values do not underflow first.
  const double log_ratio = std::log(-pi) - log_success_probability(inst.channel(), powers, n,
                                                                   inst.rate(n));
  return -std::exp(log_ratio);
}

double payoff(const SchedulingInstance& inst, std::size_t n, double own_power,
              std::span<const double> powers, double sum_price) {
  std::vector<double> p(powers.begin(), powers.end());
  p[n] = own_power;
  const double scale = inst.weight(n) * inst.rate(n);
  const double log_term =
      scale == 0.0 ? 0.0 : scale * log_success_probability(inst.channel(), p, n, inst.rate(n));
  return log_term + own_power * sum_price;
}

double payoff_slope(const SchedulingInstance& inst, std::size_t n, double own_power,
                    std::span<const double> powers, double sum_price) {
  std::vector<double> p(powers.begin(), powers.end());
  p[n] = own_power;
  const double scale = inst.weight(n) * inst.rate(n);
  if (scale == 0.0) return sum_price;
  const auto g = log_success_gradient(inst.channel(), p, n, inst.rate(n));
  return scale * g[n] + sum_price;
}

namespace {

constexpr double kInvPhi = 0.6180339887498949;

/// Golden-section maximization of f on [a, b] down to `width`; returns the final bracket.
std::pair<double, double> golden_section(const std::function<double(double)>& f, double a,
                                         double b, double width) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > width) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return {a, b};
}

/// Root of a decreasing slope on [a, b] with slope(a) > 0 > slope(b).
double bisect_slope(const std::function<double(double)>& slope, double a, double b) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    (slope(mid) > 0.0 ? a : b) = mid;
  }
  return 0.5 * (a + b);
}

/// Maximizer of f on [lo, hi], searching inside [a, b]. Golden section alone
/// only resolves the optimum to about sqrt(machine epsilon) because f is flat
/// there, so the bracket is grown around its result until the slope changes
/// sign and the root is then bisected to full precision.
double maximize_in_bracket(const std::function<double(double)>& f,
                           const std::function<double(double)>& slope, double lo, double hi,
                           double a, double b) {
  const double width = 1e-8 * (hi - lo);
  auto [ga, gb] = golden_section(f, a, b, width);
  double pad = std::max(gb - ga, width);
  while (true) {
    const double wa = std::max(lo, ga - pad);
    const double wb = std::min(hi, gb + pad);
    const double sa = slope(wa), sb = slope(wb);
    if (sa > 0.0 && sb < 0.0) return bisect_slope(slope, wa, wb);
    if (wa == lo && sa <= 0.0 && sb <= 0.0) return lo;
    if (wb == hi && sa >= 0.0 && sb >= 0.0) return hi;
    if (wa == lo && wb == hi) return 0.5 * (ga + gb);
    pad *= 4.0;
  }
}

}  // namespace

double best_response_power(const SchedulingInstance& inst, std::size_t n,
                           std::span<const double> powers, double sum_price) {
  const auto& b = inst.bounds(n);
  if (b.max <= b.min) return b.min;
  auto slope = [&](double x) { return payoff_slope(inst, n, x, powers, sum_price); };
  auto value = [&](double x) { return payoff(inst, n, x, powers, sum_price); };
  // J_n is concave in its own power, so the slope decides boundary optima.
  if (slope(b.max) >= 0.0) return b.max;
  if (slope(b.min) <= 0.0) return b.min;
  const double x = maximize_in_bracket(value, slope, b.min, b.max, b.min, b.max);
  if (!std::isfinite(x)) throw std::runtime_error("best response produced a non-finite power");
  return x;
}

Matrix price_floors(const SchedulingInstance& inst, std::size_t points, double widen) {
  const std::size_t n = inst.players();
  if (points < 2) throw std::invalid_argument("price floor grid needs >= 2 points per axis");
  Matrix floors(n, n, 0.0);
  if (n < 2) return floors;
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> p(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& b = inst.bounds(i);
      p[i] = b.min + (b.max - b.min) * static_cast<double>(idx[i]) / static_cast<double>(points - 1);
    }
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t k = 0; k < n; ++k)
        if (m != k) floors(m, k) = std::min(floors(m, k), normalized_price(inst, p, m, k));
    std::size_t a = n;
    bool done = true;
    while (a > 0) {
      --a;
      if (idx[a] + 1 < points) {
        ++idx[a];
        done = false;
        break;
      }
      idx[a] = 0;
    }
    if (done) break;
  }
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k) floors(m, k) *= 1.0 + widen;
  return floors;
}

double best_response_price(const SchedulingInstance& inst, std::span<const double> powers,
                           std::size_t m, std::size_t n, const Matrix& floors) {
  return std::clamp(normalized_price(inst, powers, m, n), floors(m, n), 0.0);
}

GameResult run_round_robin(const SchedulingInstance& inst, const GameConfig& config,
                      const Matrix* floors) {
  if (!(config.tolerance > 0.0)) throw std::invalid_argument("game tolerance must be > 0");
  const std::size_t n = inst.players();
  Matrix own_floors;
  if (!floors) {
    own_floors = price_floors(inst, config.floor_grid_points, config.floor_widen);
    floors = &own_floors;
  }
  if (floors->rows() != n || floors->cols() != n)
    throw std::invalid_argument("price floor matrix does not match the player count");

  GameResult result;
  GameState& s = result.state;
  s.powers = inst.min_powers();
  s.prices = *floors;
  s.sum_prices.assign(n, 0.0);
  auto sum_columns = [&] {
    for (std::size_t k = 0; k < n; ++k) {
      double c = 0.0;
      for (std::size_t m = 0; m < n; ++m)
        if (m != k) c += s.prices(m, k);
      s.sum_prices[k] = c;
    }
  };
  sum_columns();
  auto record = [&](std::size_t t) {
    result.trace.push_back({t, s.powers, s.sum_prices, inst.objective(s.powers)});
  };
  record(0);

  for (std::size_t t = 1; t <= config.max_iterations; ++t) {
    const std::vector<double> prev_powers = s.powers;
    const Matrix prev_prices = s.prices;

    // Power phase: Gauss-Seidel in ascending player order.
    for (std::size_t k = 0; k < n; ++k)
      s.powers[k] = best_response_power(inst, k, s.powers, s.sum_prices[k]);

    // Price phase at the updated power vector.
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t k = 0; k < n; ++k) {
        if (m == k) continue;
        const double raw = normalized_price(inst, s.powers, m, k);
        if (raw < (*floors)(m, k)) ++result.floor_clamps;
        s.prices(m, k) = std::clamp(raw, (*floors)(m, k), 0.0);
      }
    sum_columns();
    record(t);

    double dp = 0.0, dpi = 0.0;
    for (std::size_t k = 0; k < n; ++k) dp = std::max(dp, std::abs(s.powers[k] - prev_powers[k]));
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t k = 0; k < n; ++k)
        dpi = std::max(dpi, std::abs(s.prices(m, k) - prev_prices(m, k)));
    if (dp < config.tolerance && dpi < config.tolerance) {
      result.converged = true;
      result.iterations = t - 1;
      return result;
    }
  }
  result.iterations = config.max_iterations;
  return result;
}

double KktResidual::max_residual() const {
  double r = 0.0;
  for (double v : stationarity) r = std::max(r, v);
  for (double v : complementarity) r = std::max(r, v);
  return r;
}

KktResidual kkt_residual(const SchedulingInstance& inst, std::span<const double> powers) {
  const std::size_t n = inst.players();
  KktResidual k;
  k.gradient = inst.objective_gradient(powers);
  k.stationarity.assign(n, 0.0);
  k.complementarity.assign(n, 0.0);
  k.nu_lower.assign(n, 0.0);
  k.nu_upper.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b = inst.bounds(i);
    const double eps = 1e-12 * std::max(1.0, b.max - b.min);
    const double s = k.gradient[i];
    const bool at_lower = powers[i] <= b.min + eps;
    const bool at_upper = powers[i] >= b.max - eps;
    if (at_upper && s >= 0.0) {
      k.nu_upper[i] = s;
    } else if (at_lower && s <= 0.0) {
      k.nu_lower[i] = -s;
    } else {
      k.stationarity[i] = std::abs(s);
    }
    k.complementarity[i] = std::max(std::abs(k.nu_lower[i] * (b.min - powers[i])),
                                    std::abs(k.nu_upper[i] * (powers[i] - b.max)));
  }
  return k;
}

ScheduleSolution brute_force_schedule(const SchedulingInstance& inst, std::size_t points) {
  const std::size_t n = inst.players();
  if (n > kMaxBruteForcePlayers)
    throw std::invalid_argument("brute force limited to " + std::to_string(kMaxBruteForcePlayers) +
                                " players");
  if (points < 2) throw std::invalid_argument("brute force grid needs >= 2 points per axis");
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> p(n);
  ScheduleSolution best{{}, -std::numeric_limits<double>::infinity()};
  while (true) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& b = inst.bounds(i);
      p[i] = b.min + (b.max - b.min) * static_cast<double>(idx[i]) / static_cast<double>(points - 1);
    }
    const double f = inst.objective(p);
    if (f > best.objective) best = {p, f};
    std::size_t a = n;
    bool done = true;
    while (a > 0) {
      --a;
      if (idx[a] + 1 < points) {
        ++idx[a];
        done = false;
        break;
      }
      idx[a] = 0;
    }
    if (done) break;
  }
  return best;
}

ScheduleSolution local_kkt_search(const SchedulingInstance& inst, std::span<const double> start,
                                  std::size_t max_sweeps, double tolerance) {
  const std::size_t n = inst.players();
  std::vector<double> p(start.begin(), start.end());
  if (p.size() != n) throw std::invalid_argument("start point has the wrong dimension");
  constexpr std::size_t kLinePoints = 65;

  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& b = inst.bounds(i);
      if (b.max <= b.min) continue;
      std::vector<double> q = p;
      auto value = [&](double x) {
        q[i] = x;
        return inst.objective(q);
      };
      auto slope = [&](double x) {
        q[i] = x;
        return inst.objective_gradient(q)[i];
      };
      // Global 1-D search on a line grid, keeping the current point as a candidate.
      double best_x = p[i];
      double best_f = value(p[i]);
      std::size_t best_k = kLinePoints;
      const double step = (b.max - b.min) / static_cast<double>(kLinePoints - 1);
      for (std::size_t k = 0; k < kLinePoints; ++k) {
        const double x = b.min + step * static_cast<double>(k);
        const double f = value(x);
        if (f > best_f) {
          best_f = f;
          best_x = x;
          best_k = k;
        }
      }
      double lo, hi;
      if (best_k == kLinePoints) {
        lo = std::max(b.min, best_x - step);
        hi = std::min(b.max, best_x + step);
      } else {
        lo = b.min + step * static_cast<double>(best_k == 0 ? 0 : best_k - 1);
        hi = std::min(b.max, b.min + step * static_cast<double>(best_k + 1));
      }
      double x = maximize_in_bracket(value, slope, b.min, b.max, lo, hi);
      if (value(x) < best_f) x = best_x;
      change = std::max(change, std::abs(x - p[i]));
      p[i] = x;
    }
    if (change < tolerance) break;
  }
  return {p, inst.objective(p)};
}

ScheduleSolution refined_brute_force_schedule(const SchedulingInstance& inst,
                                              std::size_t points) {
  const auto coarse = brute_force_schedule(inst, points);
  auto fine = local_kkt_search(inst, coarse.powers);
  return fine.objective >= coarse.objective ? fine : coarse;
}

double receiver_score(const NetworkTopology& topo, const ReceiverCandidate& c, double power) {
  // mu / (e^mu - 1) tends to 1 as mu -> 0.
  const double rate_factor = c.rate > 0.0 ? c.rate / std::expm1(c.rate) : 1.0;
  return c.weight * rate_factor * topo.gain(c.link.end, c.link.origin) * power /
         (c.interference + topo.noise(c.link.end));
}

Link select_receiver(const NetworkTopology& topo, NodeId node,
                     std::span<const ReceiverCandidate> candidates, double power) {
  if (candidates.empty()) throw std::invalid_argument("connectivity set is empty");
  const ReceiverCandidate* best = nullptr;
  double best_score = -std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    topo.check_link(c.link);
    if (c.link.origin != node)
      throw std::invalid_argument("candidate link does not leave node " + std::to_string(node));
    const double s = receiver_score(topo, c, power);
    if (s > best_score || (s == best_score && best && c.link < best->link)) {
      best = &c;
      best_score = s;
    }
  }
  return best->link;
}

}  // namespace manet
