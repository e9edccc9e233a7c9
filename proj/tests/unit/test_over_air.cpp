#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "instances.hpp"
#include "manet/over_air.hpp"

using namespace manet;

namespace {

NetworkTopology four_nodes(double noise) {
  Matrix g(4, 4, 0.0);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t t = 0; t < 4; ++t)
      if (r != t) g(r, t) = 0.1 * static_cast<double>(1 + r + 2 * t);
  return NetworkTopology(g, std::vector<double>(4, noise), std::vector<PowerBounds>(4, PowerBounds{0.1, 2}));
}

}  // namespace

TEST_SUITE("over_air") {
  TEST_CASE("reference sum by hand") {
    const auto topo = four_nodes(0.5);
    const std::vector<double> phi{0.2, 0.0, 0.7, 1.1};
    const double expect = -(topo.gain(1, 0) * 0.2 + topo.gain(1, 2) * 0.7 + topo.gain(1, 3) * 1.1) / 0.4;
    CHECK(aggregate_prices_reference(topo, phi, 1, 0.4) == doctest::Approx(expect).epsilon(1e-15));
  }

  TEST_CASE("no fading and no noise reproduces the sum exactly") {
    const auto topo = four_nodes(0.0);
    const std::vector<double> phi{0.2, 0.3, 0.7, 1.1};
    Rng rng(1);
    OverAirOptions opt;
    opt.rayleigh = false;
    opt.symbols = 17;
    for (NodeId n = 0; n < 4; ++n) {
      CHECK(aggregate_prices_over_air(topo, phi, n, 0.3, opt, rng) ==
            doctest::Approx(aggregate_prices_reference(topo, phi, n, 0.3)).epsilon(1e-14));
    }
  }

  TEST_CASE("silent broadcasts give zero up to noise") {
    const auto topo = four_nodes(0.2);
    const std::vector<double> phi(4, 0.0);
    Rng rng(2);
    CHECK(std::abs(aggregate_prices_over_air(topo, phi, 0, 0.5, OverAirOptions{}, rng)) < 1e-12);
    OverAirOptions noisy_rx;
    noisy_rx.noisy = true;
    const double noisy = aggregate_prices_over_air(topo, phi, 0, 0.5, noisy_rx, rng);
    CHECK(std::abs(noisy) < 5 * 0.2 / std::sqrt(10000.0) / 0.5);
  }

  TEST_CASE("Rayleigh averaging over 1e4 symbols is within 5 percent") {
    Rng draw(42);
    Rng air(43);
    for (int s = 0; s < 20; ++s) {
      const auto inst = testing_support::random_instance(4, draw);
      std::vector<double> p(4);
      for (std::size_t i = 0; i < 4; ++i) p[i] = draw.uniform(inst.bounds(i).min, inst.bounds(i).max);
      const auto phi_player = broadcast_prices(inst, p);
      for (std::size_t n = 0; n < 4; ++n) {
        std::vector<double> phi(4, 0.0);
        for (std::size_t m = 0; m < 4; ++m)
          if (m != n) phi[inst.links()[m].end] += phi_player[m];
        const NodeId listener = inst.links()[n].origin;
        phi[listener] = 0.0;
        const double q = 0.5;
        const double ref = aggregate_prices_reference(inst.topology(), phi, listener, q);
        const double got = aggregate_prices_over_air(inst.topology(), phi, listener, q, OverAirOptions{}, air);
        if (ref != 0.0) CHECK(std::abs(got - ref) / std::abs(ref) <= 0.05);
      }
    }
  }

  TEST_CASE("broadcast price formula") {
    const double mu = 0.7;
    CHECK(broadcast_price(2.0, mu, 0.4, 0.5, 3.0) ==
          doctest::Approx(2.0 * mu * 0.4 * (std::exp(mu) - 1.0) / (0.5 * 3.0)));
    CHECK_THROWS_AS((void)broadcast_price(1, 1, 1, 1, 0.0), std::invalid_argument);
  }

  TEST_CASE("measured-model prices equal minus phi times the cross gain") {
    // Without the interference product, d q_m / d p_n = -q_m gamma_m G(e_m, b_n) / (G_mm p_m),
    // so the price m charges n is -phi_m G(e_m, b_n).
    Rng rng(9);
    const auto inst = testing_support::random_instance(3, rng);
    const std::vector<double> p{0.5, 1.0, 1.5};
    const auto phi = broadcast_prices(inst, p);
    for (std::size_t m = 0; m < 3; ++m) {
      for (std::size_t n = 0; n < 3; ++n) {
        if (m == n) continue;
        const Link lm = inst.links()[m];
        const Link ln = inst.links()[n];
        const auto q_at = [&](double x) {
          std::vector<double> pp = p;
          pp[n] = x;
          return success_probability_measured(pp[m], measured_interference(inst, pp, m),
                                              inst.topology().noise(lm.end),
                                              inst.topology().gain(lm.end, lm.origin), inst.rate(m));
        };
        const double h = 1e-6;
        const double dq = (q_at(p[n] + h) - q_at(p[n] - h)) / (2 * h);
        const double price = inst.weight(m) * inst.rate(m) * dq;
        CHECK(price == doctest::Approx(-phi[m] * inst.topology().gain(lm.end, ln.origin)).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("input validation") {
    const auto topo = four_nodes(0.1);
    Rng rng(3);
    const std::vector<double> short_phi{1.0};
    CHECK_THROWS_AS((void)aggregate_prices_over_air(topo, short_phi, 0, 0.5, {}, rng), std::invalid_argument);
    const std::vector<double> neg{0, -1, 0, 0};
    CHECK_THROWS_AS((void)aggregate_prices_over_air(topo, neg, 0, 0.5, {}, rng), std::invalid_argument);
    const std::vector<double> ok(4, 1.0);
    CHECK_THROWS_AS((void)aggregate_prices_over_air(topo, ok, 0, 0.0, {}, rng), std::invalid_argument);
  }
}
