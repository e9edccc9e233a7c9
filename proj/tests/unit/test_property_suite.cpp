#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "manet/property_suite.hpp"
#include "manet/scenario.hpp"

using namespace manet;

namespace {

// Interference enters with p_j^2: still decreasing in p_j, but no longer convex near 0.
SuccessModel squared_interference_model() {
  SuccessModel m;
  m.log_q = [](const LinkChannel& ch, std::span<const double> p, std::size_t l, double mu) {
    const double gamma = std::exp(mu) - 1.0;
    const double s = ch.gain(l, l) * p[l];
    double v = -ch.noise[l] * gamma / s;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (j != l) v -= std::log1p(gamma * ch.gain(l, j) * p[j] * p[j] / s);
    }
    return v;
  };
  return m;
}

// Success that improves with the rate: breaks P3.
SuccessModel rate_inverted_model() {
  SuccessModel m;
  m.log_q = [](const LinkChannel& ch, std::span<const double> p, std::size_t l, double mu) {
    return SuccessModel::rayleigh().log_q(ch, p, l, 4.0 / (1.0 + mu));
  };
  return m;
}

const PropertyReport& find(const std::vector<PropertyReport>& rs, const std::string& id) {
  for (const auto& r : rs) {
    if (r.property_id == id) return r;
  }
  throw std::runtime_error("missing report " + id);
}

}  // namespace

TEST_SUITE("property_suite") {
  TEST_CASE("Rayleigh success function passes on a fixed symmetric channel") {
    SampleSpace space;
    space.channel = LinkChannel{Matrix(2, 2, 1.0), {1.0, 1.0}};
    const auto res = check_success_properties(space, 1000, 3);
    REQUIRE(res.reports.size() == 5);
    for (const auto& r : res.reports) {
      CAPTURE(r.property_id);
      CHECK(r.passed());
      CHECK(r.samples > 0);
      CHECK(r.worst_margin >= -1e-9);
    }
  }

  TEST_CASE("random channels with 2 to 5 links pass and differences are constant") {
    SampleSpace space;
    const auto res = check_success_properties(space, 1000, 17);
    for (const auto& r : res.reports) {
      CAPTURE(r.property_id);
      CHECK(r.violations == 0);
    }
    CHECK(res.constant_difference_samples > 0);
    CHECK(res.max_constant_difference <= kConstantDifferenceTolerance);
  }

  TEST_CASE("same seed gives the same report") {
    SampleSpace space;
    const auto a = check_success_properties(space, 200, 9);
    const auto b = check_success_properties(space, 200, 9);
    for (std::size_t i = 0; i < a.reports.size(); ++i) {
      CHECK(a.reports[i].samples == b.reports[i].samples);
      CHECK(a.reports[i].worst_margin == b.reports[i].worst_margin);
    }
  }

  TEST_CASE("squared interference mutation is detected") {
    SampleSpace space;
    space.power = PowerBounds{0.01, 20.0};
    const auto res = check_success_properties(space, 1000, 5, 1e-9, squared_interference_model());
    CHECK(find(res.reports, "P2").violations > 0);
  }

  TEST_CASE("rate inverted mutation is detected") {
    SampleSpace space;
    const auto res = check_success_properties(space, 300, 5, 1e-9, rate_inverted_model());
    CHECK(find(res.reports, "P3").violations > 0);
  }

  TEST_CASE("argument validation") {
    SampleSpace space;
    CHECK_THROWS_AS((void)check_success_properties(space, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)check_success_properties(space, 10, 1, 0.0), std::invalid_argument);
    GoodputSweep s{0, 0, {1.0, 1.0}, 0.0, 1.0, 5};
    CHECK_THROWS_AS((void)check_goodput_properties(LinkChannel{Matrix(2, 2, 1.0), {1, 1}},
                                                   RateSet({1.0}), s),
                    std::invalid_argument);
  }

  TEST_CASE("own power sweep") {
    const SweepSetup f = figure2_setup(200);
    const auto reports = check_goodput_properties(f.channel, f.rates, f.sweep);
    REQUIRE(reports.size() == 2);
    CHECK(find(reports, "P'1").passed());
    CHECK(find(reports, "P'3").passed());
    const auto t = trace_goodput_sweep(f.channel, f.rates, f.sweep);
    REQUIRE(t.power.size() == 200);
    CHECK(t.power.back() == doctest::Approx(20.0));
    for (std::size_t i = 1; i < t.goodput.size(); ++i) {
      CHECK(t.goodput[i] > t.goodput[i - 1]);
      CHECK(t.rate[i] >= t.rate[i - 1]);
    }
    CHECK(t.rate.front() < t.rate.back());
  }

  TEST_CASE("interferer power sweep") {
    const SweepSetup f = figure3_setup(200);
    const auto reports = check_goodput_properties(f.channel, f.rates, f.sweep);
    CHECK(find(reports, "P'2").passed());
    CHECK(find(reports, "P'4").passed());
    const auto t = trace_goodput_sweep(f.channel, f.rates, f.sweep);
    for (std::size_t i = 1; i < t.goodput.size(); ++i) {
      CHECK(t.goodput[i] < t.goodput[i - 1]);
      CHECK(t.rate[i] <= t.rate[i - 1]);
    }
  }

  TEST_CASE("singleton rate set keeps the rate constant") {
    const SweepSetup f = figure2_setup(50);
    const RateSet one({0.8});
    const auto reports = check_goodput_properties(f.channel, one, f.sweep);
    CHECK(find(reports, "P'3").passed());
    const auto t = trace_goodput_sweep(f.channel, one, f.sweep);
    for (double r : t.rate) CHECK(r == 0.8);
  }
}
