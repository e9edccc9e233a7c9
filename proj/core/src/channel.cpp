#include "manet/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace manet {

namespace {

void check_inputs(const LinkChannel& channel, std::span<const double> powers, std::size_t link,
                  double mu) {
  if (powers.size() != channel.link_count())
    throw std::invalid_argument("power vector length " + std::to_string(powers.size()) +
                                " does not match link count " +
                                std::to_string(channel.link_count()));
  if (link >= channel.link_count()) throw std::invalid_argument("link index out of range");
  if (!(powers[link] > 0.0))
    throw std::invalid_argument("own transmit power must be > 0 (closed form is singular)");
  if (!(channel.gain(link, link) > 0.0))
    throw std::invalid_argument("direct gain must be > 0");
  if (!(mu >= 0.0)) throw std::invalid_argument("rate must be >= 0");
}

}  // namespace

RateSet::RateSet(std::vector<double> rates) : rates_(std::move(rates)) {
  if (rates_.empty()) throw std::invalid_argument("rate set must not be empty");
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    if (!(rates_[i] > 0.0) || !std::isfinite(rates_[i]))
      throw std::invalid_argument("rates must be positive and finite");
    if (i > 0 && !(rates_[i] > rates_[i - 1]))
      throw std::invalid_argument("rates must be strictly ascending");
  }
}

RateSet RateSet::arithmetic(double first, double step, double last) {
  if (!(step > 0.0)) throw std::invalid_argument("rate step must be > 0");
  std::vector<double> r;
  const auto n = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) r.push_back(first + static_cast<double>(i) * step);
  return RateSet(std::move(r));
}

double sinr_threshold(double mu) {
  if (!(mu >= 0.0)) throw std::invalid_argument("rate must be >= 0");
  return std::expm1(mu);
}

double log_success_probability(const LinkChannel& channel, std::span<const double> powers,
                               std::size_t link, double mu) {
  check_inputs(channel, powers, link, mu);
  const double gamma = std::expm1(mu);
  const double received = channel.gain(link, link) * powers[link];
  double log_q = -channel.noise[link] * gamma / received;
  for (std::size_t j = 0; j < powers.size(); ++j) {
    if (j == link) continue;
    log_q -= std::log1p(gamma * channel.gain(link, j) * powers[j] / received);
  }
  return log_q;
}

double success_probability(const LinkChannel& channel, std::span<const double> powers,
                           std::size_t link, double mu) {
  return std::exp(log_success_probability(channel, powers, link, mu));
}

double success_probability_measured(double power, double interference, double noise,
                                    double direct_gain, double mu) {
  if (!(power > 0.0)) throw std::invalid_argument("own transmit power must be > 0");
  if (!(direct_gain > 0.0)) throw std::invalid_argument("direct gain must be > 0");
  if (!(interference >= 0.0)) throw std::invalid_argument("interference must be >= 0");
  const double gamma = sinr_threshold(mu);
  return std::exp(-(interference + noise) * gamma / (direct_gain * power));
}

double goodput(const LinkChannel& channel, std::span<const double> powers, std::size_t link,
               double mu) {
  return mu * success_probability(channel, powers, link, mu);
}

MaxGoodput max_goodput(const LinkChannel& channel, std::span<const double> powers,
                       std::size_t link, const RateSet& rates) {
  MaxGoodput best{-1.0, 0.0};
  for (double mu : rates.values()) {
    const double g = goodput(channel, powers, link, mu);
    if (g > best.goodput) best = {g, mu};
  }
  return best;
}

SuccessDerivatives derivatives(const LinkChannel& channel, std::span<const double> powers,
                               std::size_t link, double mu) {
  check_inputs(channel, powers, link, mu);
  const std::size_t n = powers.size();
  const double gamma = std::expm1(mu);
  const double e_mu = std::exp(mu);
  const double g_ll = channel.gain(link, link);
  const double p_l = powers[link];
  const double received = g_ll * p_l;
  const double sigma2 = channel.noise[link];

  SuccessDerivatives d;
  d.dq_dp.assign(n, 0.0);
  d.d2logq_dpl_dp.assign(n, 0.0);

  double log_q = -sigma2 * gamma / received;
  double dlog_dpl = sigma2 * gamma / (received * p_l);
  double dlog_dmu = -sigma2 * e_mu / received;
  double d2log_dpl2 = -2.0 * sigma2 * gamma / (received * p_l * p_l);
  std::vector<double> dlog_dp(n, 0.0);

  for (std::size_t j = 0; j < n; ++j) {
    if (j == link) continue;
    const double g_lj = channel.gain(link, j);
    const double b = gamma * g_lj * powers[j] / received;
    const double one_b = 1.0 + b;
    log_q -= std::log1p(b);
    dlog_dpl += b / (p_l * one_b);
    dlog_dp[j] = -(gamma * g_lj / received) / one_b;
    dlog_dmu -= (e_mu * g_lj * powers[j] / received) / one_b;
    d2log_dpl2 -= b * (2.0 + b) / (p_l * p_l * one_b * one_b);
    d.d2logq_dpl_dp[j] = (gamma * g_lj / g_ll) / (p_l * p_l * one_b * one_b);
  }
  dlog_dp[link] = dlog_dpl;
  d.d2logq_dpl_dp[link] = d2log_dpl2;

  d.q = std::exp(log_q);
  d.dq_dpl = d.q * dlog_dpl;
  for (std::size_t j = 0; j < n; ++j) d.dq_dp[j] = d.q * dlog_dp[j];
  d.dq_dmu = d.q * dlog_dmu;
  d.d2logq_dpl2 = d2log_dpl2;
  return d;
}

std::vector<double> log_success_gradient(const LinkChannel& channel,
                                         std::span<const double> powers, std::size_t link,
                                         double mu) {
  check_inputs(channel, powers, link, mu);
  const std::size_t n = powers.size();
  const double gamma = std::expm1(mu);
  const double p_l = powers[link];
  const double received = channel.gain(link, link) * p_l;
  std::vector<double> grad(n, 0.0);
  double own = channel.noise[link] * gamma / (received * p_l);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == link) continue;
    const double g_lj = channel.gain(link, j);
    const double b = gamma * g_lj * powers[j] / received;
    own += b / (p_l * (1.0 + b));
    grad[j] = -(gamma * g_lj / received) / (1.0 + b);
  }
  grad[link] = own;
  return grad;
}

int sample_transmission(double q, Rng& rng) { return rng.bernoulli(q) ? 1 : 0; }

}  // namespace manet
