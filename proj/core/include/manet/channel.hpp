#pragma once

// Rayleigh/Rayleigh outage model: success probability of a link transmitting
// at a scheduled rate mu (nats/slot) given the joint power allocation, the
// goodput maps built on it, and the closed-form partial derivatives.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "manet/rng.hpp"
#include "manet/topology.hpp"

namespace manet {

/// Finite, strictly ascending set of positive scheduled rates.
class RateSet {
 public:
  /// Throws std::invalid_argument when empty, unsorted, duplicated or non-positive.
  explicit RateSet(std::vector<double> rates);
  RateSet(std::initializer_list<double> rates) : RateSet(std::vector<double>(rates)) {}

  /// {first, first + step, ..., last} with last included up to rounding.
  static RateSet arithmetic(double first, double step, double last);

  std::span<const double> values() const { return rates_; }
  std::size_t size() const { return rates_.size(); }
  double max() const { return rates_.back(); }
  double operator[](std::size_t i) const { return rates_[i]; }

 private:
  std::vector<double> rates_;
};

/// SINR threshold e^mu - 1 needed to decode at rate mu. Throws for mu < 0.
double sinr_threshold(double mu);

/// Closed-form success probability of `link`. `powers` holds one entry per
/// link of the channel. Throws std::invalid_argument when powers[link] <= 0,
/// the direct gain is zero, or the shapes disagree.
double success_probability(const LinkChannel& channel, std::span<const double> powers,
                           std::size_t link, double mu);

/// log of success_probability, evaluated without the exp/log round trip.
double log_success_probability(const LinkChannel& channel, std::span<const double> powers,
                               std::size_t link, double mu);

/// Success probability when the receiver measures its interference power
/// instead of knowing the interferers' powers: exp(-(I + noise) gamma / (G p)).
double success_probability_measured(double power, double interference, double noise,
                                    double direct_gain, double mu);

/// Expected rate mu * q.
double goodput(const LinkChannel& channel, std::span<const double> powers, std::size_t link,
               double mu);

struct MaxGoodput {
  double goodput = 0.0;
  /// Smallest rate attaining the maximum.
  double rate = 0.0;
};

MaxGoodput max_goodput(const LinkChannel& channel, std::span<const double> powers,
                       std::size_t link, const RateSet& rates);

/// First and second order partial derivatives of q for one link.
struct SuccessDerivatives {
  double q = 0.0;
  double dq_dpl = 0.0;
  /// dq/dp_j for every link j; entry `link` equals dq_dpl.
  std::vector<double> dq_dp;
  double dq_dmu = 0.0;
  double d2logq_dpl2 = 0.0;
  /// d^2 log q / dp_l dp_j for every link j; entry `link` equals d2logq_dpl2.
  std::vector<double> d2logq_dpl_dp;
};

SuccessDerivatives derivatives(const LinkChannel& channel, std::span<const double> powers,
                               std::size_t link, double mu);

/// d log q / d p_j for every link j (the game and the KKT residual only need these).
std::vector<double> log_success_gradient(const LinkChannel& channel,
                                         std::span<const double> powers, std::size_t link,
                                         double mu);

/// Bernoulli(q) outcome of a single transmission: 1 on success.
int sample_transmission(double q, Rng& rng);

}  // namespace manet
