#pragma once

// Randomized and sweep-based verification of the structural properties of the
// success function (P1..P5) and of the maximum goodput function (P'1..P'4).

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "manet/channel.hpp"

namespace manet {

struct PropertyReport {
  std::string property_id;
  std::size_t samples = 0;
  std::size_t violations = 0;
  /// Most negative slack observed (slack >= 0 means the inequality held).
  double worst_margin = 0.0;

  bool passed() const { return violations == 0; }
};

/// log q evaluator the harness probes. The default is the Rayleigh closed form;
/// tests swap in corrupted models to check the harness actually detects failures.
using LogSuccessFn = std::function<double(const LinkChannel&, std::span<const double> powers,
                                          std::size_t link, double mu)>;

struct SuccessModel {
  LogSuccessFn log_q;
  /// When set, the closed-form signs of the log-concavity and cross terms are
  /// checked alongside the finite differences.
  std::function<SuccessDerivatives(const LinkChannel&, std::span<const double>, std::size_t,
                                   double)>
      derivatives;

  static SuccessModel rayleigh();
};

/// Where samples come from: a fixed channel, or freshly drawn random channels
/// with a link count in [min_links, max_links].
struct SampleSpace {
  std::optional<LinkChannel> channel;
  std::size_t min_links = 2;
  std::size_t max_links = 5;
  /// Powers are drawn log-uniform on [power.min, power.max].
  PowerBounds power{0.5, 20.0};
  double rate_min = 0.1;
  double rate_max = 3.0;
};

/// Draws a random link channel with `links` links (direct gains in [0.5, 2],
/// cross gains in [0.01, 1], noise in [0.01, 1], all log-uniform).
LinkChannel random_link_channel(std::size_t links, Rng& rng);

struct SuccessPropertyResult {
  /// P1..P5 in order.
  std::vector<PropertyReport> reports;
  /// Largest |cross difference| of log q over pairs of links other than the
  /// probed one; identically zero for the Rayleigh form.
  double max_constant_difference = 0.0;
  std::size_t constant_difference_samples = 0;
};

/// Margin for "strictly" monotone checks on log q.
inline constexpr double kStrictMargin = 1e-12;
/// Absolute tolerance for the constant-differences sub-check of P5.
inline constexpr double kConstantDifferenceTolerance = 1e-12;

SuccessPropertyResult check_success_properties(const SampleSpace& space,
                                               std::size_t sample_count, std::uint64_t seed,
                                               double tolerance = 1e-9,
                                               const SuccessModel& model = SuccessModel::rayleigh());

/// One-dimensional power sweep for the maximum goodput properties.
struct GoodputSweep {
  /// Link whose maximum goodput is observed.
  std::size_t link = 0;
  /// Power being swept; equal to `link` probes P'1/P'3, otherwise P'2/P'4.
  std::size_t swept = 0;
  /// Powers of every link; the swept entry is overwritten.
  std::vector<double> base_powers;
  double from = 0.0;  ///< exclusive lower end
  double to = 0.0;
  std::size_t points = 200;

  /// from + (to - from) i / points for i = 1..points.
  std::vector<double> grid() const;
};

struct GoodputSweepTrace {
  std::vector<double> power;
  std::vector<double> goodput;
  std::vector<double> rate;
};

GoodputSweepTrace trace_goodput_sweep(const LinkChannel& channel, const RateSet& rates,
                                      const GoodputSweep& sweep);

/// P'1 and P'3 when sweep.swept == sweep.link, P'2 and P'4 otherwise.
/// Requires at least 10 sweep points. The rate checks run on the discrete
/// staircase of the finite rate set.
std::vector<PropertyReport> check_goodput_properties(const LinkChannel& channel,
                                                     const RateSet& rates,
                                                     const GoodputSweep& sweep,
                                                     double tolerance = 1e-9);

}  // namespace manet
