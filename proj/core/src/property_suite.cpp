#include "manet/property_suite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace manet {

namespace {

/// Tracks one inequality family. `slack` >= 0 means the inequality held.
class Tally {
 public:
  explicit Tally(std::string id) { report_.property_id = std::move(id); }

  void begin_sample() { ++report_.samples; sample_failed_ = false; }

  void check(double slack, double tolerance) {
    record(slack, slack < -tolerance);
  }
  void check_strict(double slack) { record(slack, !(slack > kStrictMargin)); }

  PropertyReport report() const {
    PropertyReport r = report_;
    if (r.samples == 0) r.worst_margin = 0.0;
    return r;
  }

 private:
  void record(double slack, bool failed) {
    report_.worst_margin = std::min(report_.worst_margin, slack);
    if (failed && !sample_failed_) {
      ++report_.violations;
      sample_failed_ = true;
    }
  }

  PropertyReport report_{"", 0, 0, std::numeric_limits<double>::infinity()};
  bool sample_failed_ = false;
};

/// Second point strictly above `x`, by a random relative step in [1%, 100%].
double bump(double x, Rng& rng) { return x * (1.0 + rng.uniform(0.01, 1.0)); }

}  // namespace

SuccessModel SuccessModel::rayleigh() {
  SuccessModel m;
  m.log_q = [](const LinkChannel& ch, std::span<const double> p, std::size_t l, double mu) {
    return log_success_probability(ch, p, l, mu);
  };
  m.derivatives = [](const LinkChannel& ch, std::span<const double> p, std::size_t l,
                     double mu) { return manet::derivatives(ch, p, l, mu); };
  return m;
}

LinkChannel random_link_channel(std::size_t links, Rng& rng) {
  LinkChannel ch;
  ch.gain = Matrix(links, links);
  ch.noise.resize(links);
  for (std::size_t l = 0; l < links; ++l) {
    ch.noise[l] = rng.log_uniform(0.01, 1.0);
    for (std::size_t j = 0; j < links; ++j)
      ch.gain(l, j) = (l == j) ? rng.log_uniform(0.5, 2.0) : rng.log_uniform(0.01, 1.0);
  }
  return ch;
}

SuccessPropertyResult check_success_properties(const SampleSpace& space,
                                               std::size_t sample_count, std::uint64_t seed,
                                               double tolerance, const SuccessModel& model) {
  if (sample_count == 0) throw std::invalid_argument("sample_count must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (space.channel) space.channel->validate();
  if (!space.channel && (space.min_links < 2 || space.max_links < space.min_links))
    throw std::invalid_argument("random channels need 2 <= min_links <= max_links");

  Rng rng(seed);
  Tally p1("P1"), p2("P2"), p3("P3"), p4("P4"), p5("P5");
  SuccessPropertyResult result;

  const auto& log_q = model.log_q;
  for (std::size_t s = 0; s < sample_count; ++s) {
    LinkChannel drawn;
    if (!space.channel) {
      const auto span = space.max_links - space.min_links + 1;
      drawn = random_link_channel(space.min_links + rng.below(span), rng);
    }
    const LinkChannel& ch = space.channel ? *space.channel : drawn;
    const std::size_t n = ch.link_count();
    if (n < 2) throw std::invalid_argument("property checks need at least 2 links");

    std::vector<double> p(n);
    for (auto& x : p) x = rng.log_uniform(space.power.min, space.power.max);
    const std::size_t l = rng.below(n);
    std::size_t k = rng.below(n - 1);
    if (k >= l) ++k;
    const double mu = rng.uniform(space.rate_min, space.rate_max);
    const double mu_hi = mu + rng.uniform(0.01, 1.0);

    auto eval = [&](std::size_t idx_a, double a, std::size_t idx_b, double b, double rate) {
      std::vector<double> q = p;
      q[idx_a] = a;
      q[idx_b] = b;
      return log_q(ch, q, l, rate);
    };
    auto eval1 = [&](std::size_t idx, double v, double rate) { return eval(idx, v, idx, v, rate); };

    const double pl = p[l], pl_hi = bump(pl, rng), pl_mid = 0.5 * (pl + pl_hi);
    const double pk = p[k], pk_hi = bump(pk, rng), pk_mid = 0.5 * (pk + pk_hi);
    const double base = log_q(ch, p, l, mu);

    // P1: increasing in own power, log-concave in own power.
    p1.begin_sample();
    const double l_hi = eval1(l, pl_hi, mu);
    const double l_mid = eval1(l, pl_mid, mu);
    p1.check_strict(l_hi - base);
    p1.check(l_mid - 0.5 * (base + l_hi), tolerance);

    // P2: decreasing and convex in an interferer's power.
    p2.begin_sample();
    const double k_hi = eval1(k, pk_hi, mu);
    const double k_mid = eval1(k, pk_mid, mu);
    p2.check_strict(base - k_hi);
    p2.check(0.5 * (std::exp(base) + std::exp(k_hi)) - std::exp(k_mid), tolerance);

    // P3: decreasing in the rate.
    p3.begin_sample();
    const double mu_up = log_q(ch, p, l, mu_hi);
    p3.check_strict(base - mu_up);

    // P4: increasing differences of log q in (p_l, mu).
    p4.begin_sample();
    const double l_hi_mu_hi = eval1(l, pl_hi, mu_hi);
    p4.check((l_hi_mu_hi - mu_up) - (l_hi - base), tolerance);

    // P5: increasing differences in (p_l, p_k); constant differences between
    // two powers other than the link's own.
    p5.begin_sample();
    const double both_hi = eval(l, pl_hi, k, pk_hi, mu);
    p5.check((both_hi - k_hi) - (l_hi - base), tolerance);
    if (n >= 3) {
      std::size_t i = rng.below(n - 1);
      if (i >= l) ++i;
      std::size_t j = i;
      while (j == i || j == l) j = rng.below(n);
      const double pi_hi = bump(p[i], rng), pj_hi = bump(p[j], rng);
      const double a = eval(i, pi_hi, j, pj_hi, mu) - eval1(j, pj_hi, mu);
      const double b = eval1(i, pi_hi, mu) - base;
      const double delta = std::abs(a - b);
      result.max_constant_difference = std::max(result.max_constant_difference, delta);
      ++result.constant_difference_samples;
      p5.check(kConstantDifferenceTolerance - delta, 0.0);
    }

    if (model.derivatives) {
      const auto d = model.derivatives(ch, p, l, mu);
      p1.check(d.dq_dpl, tolerance);
      p1.check(-d.d2logq_dpl2, tolerance);
      p2.check(-d.dq_dp[k], tolerance);
      p3.check(-d.dq_dmu, tolerance);
      p5.check(d.d2logq_dpl_dp[k], tolerance);
    }
  }

  result.reports = {p1.report(), p2.report(), p3.report(), p4.report(), p5.report()};
  return result;
}

std::vector<double> GoodputSweep::grid() const {
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = from + (to - from) * static_cast<double>(i + 1) / static_cast<double>(points);
  return g;
}

GoodputSweepTrace trace_goodput_sweep(const LinkChannel& channel, const RateSet& rates,
                                      const GoodputSweep& sweep) {
  if (sweep.base_powers.size() != channel.link_count())
    throw std::invalid_argument("sweep base powers must cover every link");
  if (sweep.link >= channel.link_count() || sweep.swept >= channel.link_count())
    throw std::invalid_argument("sweep link index out of range");
  if (!(sweep.to > sweep.from)) throw std::invalid_argument("sweep range is empty");

  GoodputSweepTrace trace;
  std::vector<double> p = sweep.base_powers;
  for (double x : sweep.grid()) {
    p[sweep.swept] = x;
    const auto best = max_goodput(channel, p, sweep.link, rates);
    trace.power.push_back(x);
    trace.goodput.push_back(best.goodput);
    trace.rate.push_back(best.rate);
  }
  return trace;
}

std::vector<PropertyReport> check_goodput_properties(const LinkChannel& channel,
                                                     const RateSet& rates,
                                                     const GoodputSweep& sweep,
                                                     double tolerance) {
  if (sweep.points < 10) throw std::invalid_argument("goodput sweeps need >= 10 points");
  const auto t = trace_goodput_sweep(channel, rates, sweep);
  const bool own = sweep.swept == sweep.link;
  const std::size_t n = t.power.size();

  Tally value(own ? "P'1" : "P'2");
  Tally rate(own ? "P'3" : "P'4");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    value.begin_sample();
    rate.begin_sample();
    const double dg = t.goodput[i + 1] - t.goodput[i];
    const double dmu = t.rate[i + 1] - t.rate[i];
    if (own) {
      value.check_strict(dg);
      rate.check(dmu, 0.0);
    } else {
      value.check_strict(-dg);
      if (i > 0) value.check(0.5 * (t.goodput[i - 1] + t.goodput[i + 1]) - t.goodput[i], tolerance);
      rate.check(-dmu, 0.0);
    }
  }
  return {value.report(), rate.report()};
}

}  // namespace manet
