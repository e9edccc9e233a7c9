#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "manet/queue_simulator.hpp"

using namespace manet;

namespace {

Transmission certain(Link l, std::vector<double> alloc, double rate, double q = 1.0) {
  Transmission t;
  t.link = l;
  t.power = 1.0;
  t.allocation = std::move(alloc);
  t.rate = rate;
  t.success = q;
  return t;
}

// 0 - 1 - 2 with a weak 0 - 2 path.
NetworkTopology chain() {
  Matrix g(3, 3, 0.0);
  g(1, 0) = g(0, 1) = g(2, 1) = g(1, 2) = 1.0;
  g(2, 0) = g(0, 2) = 0.05;
  return NetworkTopology(g, {0.1, 0.1, 0.1}, std::vector<PowerBounds>(3, PowerBounds{0.1, 2.0}));
}

}  // namespace

TEST_SUITE("queue_simulator") {
  TEST_CASE("one slot of queue arithmetic") {
    QueueMatrix q = QueueMatrix::empty(3, {2});
    q.u(0, 0) = 1.0;
    q.u(1, 0) = 5.0;
    const std::vector<Transmission> s{certain({0, 1}, {1.0}, 1.0), certain({1, 2}, {2.0}, 2.0)};
    Matrix arrivals(3, 1, 0.0);
    arrivals(1, 0) = 0.5;
    Rng rng(1);
    const auto next = step(q, s, DropPolicy{}, arrivals, rng);
    CHECK(next.u(1, 0) == doctest::Approx(4.5));
    CHECK(next.u(0, 0) == 0.0);
    CHECK(next.u(2, 0) == 0.0);
  }

  TEST_CASE("service never exceeds the backlog") {
    QueueMatrix q = QueueMatrix::empty(2, {1});
    q.u(0, 0) = 0.3;
    const std::vector<Transmission> s{certain({0, 1}, {1.0}, 1.0)};
    Rng rng(1);
    StepStats st;
    const auto next = step(q, s, DropPolicy{}, Matrix(2, 1, 0.0), rng, &st);
    CHECK(next.u(0, 0) == 0.0);
    CHECK(st.sent == doctest::Approx(0.3));
    CHECK(st.delivered == doctest::Approx(0.3));
  }

  TEST_CASE("certain success drains a relay chain at the link rate") {
    QueueMatrix q = QueueMatrix::empty(3, {2});
    q.u(0, 0) = 5.0;
    const std::vector<Transmission> s{certain({0, 1}, {1.0}, 1.0), certain({1, 2}, {1.0}, 1.0)};
    Rng rng(1);
    for (int t = 1; t <= 5; ++t) {
      q = step(q, s, DropPolicy{}, Matrix(3, 1, 0.0), rng);
      CHECK(q.u(0, 0) == doctest::Approx(5.0 - t));
      CHECK(q.u(1, 0) == doctest::Approx(1.0));  // one unit in flight at the relay
    }
    q = step(q, s, DropPolicy{}, Matrix(3, 1, 0.0), rng);
    CHECK(q.total() == 0.0);
  }

  TEST_CASE("failures without dropping keep everything") {
    QueueMatrix q = QueueMatrix::empty(3, {2});
    q.u(0, 0) = 4.0;
    q.u(1, 0) = 2.0;
    const std::vector<Transmission> s{certain({0, 1}, {1.0}, 1.0, 0.0), certain({1, 2}, {1.0}, 1.0, 0.0)};
    Matrix arrivals(3, 1, 0.0);
    arrivals(0, 0) = 0.25;
    Rng rng(9);
    StepStats st;
    for (int t = 1; t <= 100; ++t) {
      q = step(q, s, DropPolicy{}, arrivals, rng, &st);
      CHECK(q.u(0, 0) == doctest::Approx(4.0 + 0.25 * t));
      CHECK(q.u(1, 0) == doctest::Approx(2.0));
    }
    CHECK(st.failures == 200);
    CHECK(st.drops == 0);
  }

  TEST_CASE("always dropping discards every failure") {
    QueueMatrix q = QueueMatrix::empty(2, {1});
    q.u(0, 0) = 3.0;
    DropPolicy drop_all{0.0, {}};
    const std::vector<Transmission> s{certain({0, 1}, {1.0}, 1.0, 0.0)};
    Rng rng(2);
    StepStats st;
    for (int t = 0; t < 3; ++t) q = step(q, s, drop_all, Matrix(2, 1, 0.0), rng, &st);
    CHECK(q.total() == 0.0);
    CHECK(st.dropped == doctest::Approx(3.0));
    CHECK(st.delivered == 0.0);
  }

  TEST_CASE("drop fraction matches 1 - delta within three sigma") {
    const double delta = 0.7;
    DropPolicy policy{1.0, {{Link{0, 1}, delta}}};
    CHECK(policy.delta(Link{0, 1}) == delta);
    CHECK(policy.delta(Link{1, 0}) == 1.0);
    QueueMatrix q = QueueMatrix::empty(2, {1});
    const std::vector<Transmission> s{certain({0, 1}, {1.0}, 1.0, 0.4)};
    Matrix arrivals(2, 1, 0.0);
    arrivals(0, 0) = 1.0;
    Rng rng(4);
    StepStats st;
    for (int t = 0; t < 50000; ++t) q = step(q, s, policy, arrivals, rng, &st);
    const double n = static_cast<double>(st.failures);
    const double frac = static_cast<double>(st.drops) / n;
    const double sigma = std::sqrt((1 - delta) * delta / n);
    CHECK(std::abs(frac - (1 - delta)) <= 3 * sigma);
  }

  TEST_CASE("conservation: backlog changes only by delivery, drops and arrivals") {
    Rng rng(6);
    QueueMatrix q = QueueMatrix::empty(4, {3});
    DropPolicy policy{0.5, {}};
    for (int t = 0; t < 2000; ++t) {
      std::vector<Transmission> s;
      for (NodeId n = 0; n < 3; ++n)
        s.push_back(certain({n, 3}, {rng.uniform(0.0, 1.0)}, 1.0, rng.uniform()));
      Matrix arrivals(4, 1, 0.0);
      for (NodeId n = 0; n < 3; ++n) arrivals(n, 0) = rng.uniform(0.0, 0.6);
      double arrived = 0.0;
      for (double a : arrivals.values()) arrived += a;
      StepStats st;
      const auto next = step(q, s, policy, arrivals, rng, &st);
      CHECK(next.total() == doctest::Approx(q.total() - st.delivered - st.dropped + arrived));
      for (double v : next.u.values()) CHECK(v >= 0.0);
      q = next;
    }
  }

  TEST_CASE("input validation") {
    QueueMatrix q = QueueMatrix::empty(2, {1});
    Rng rng(1);
    const std::vector<Transmission> over{certain({0, 1}, {2.0}, 1.0)};
    CHECK_THROWS_AS((void)step(q, over, DropPolicy{}, Matrix(2, 1, 0.0), rng), std::invalid_argument);
    const std::vector<Transmission> ok{certain({0, 1}, {1.0}, 1.0)};
    CHECK_THROWS_AS((void)step(q, ok, DropPolicy{}, Matrix(3, 1, 0.0), rng), std::invalid_argument);
    CHECK_THROWS_AS((DropPolicy{1.5, {}}.validate()), std::invalid_argument);
  }

  TEST_CASE("arrival processes") {
    ArrivalProcess det{Matrix(2, 1, 0.7), ArrivalDistribution::Deterministic};
    Rng rng(1);
    CHECK(det.draw(rng)(1, 0) == 0.7);
    ArrivalProcess poi{Matrix(1, 1, 0.7), ArrivalDistribution::Poisson};
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) sum += poi.draw(rng)(0, 0);
    CHECK(std::abs(sum / 100000 - 0.7) < 5 * std::sqrt(0.7 / 100000));
  }

  TEST_CASE("regression slope") {
    std::vector<double> line;
    for (int i = 0; i < 100; ++i) line.push_back(3.0 + 0.25 * i);
    CHECK(regression_slope(line) == doctest::Approx(0.25));
    CHECK(regression_slope(std::vector<double>(10, 4.0)) == 0.0);
  }

  TEST_CASE("zero arrivals keep the system empty") {
    StabilityConfig cfg;
    cfg.slots = 2000;
    cfg.node_rates = {1.0, 1.0, 1.0};
    const std::vector<Source> src{{0, 2, 0.5}};
    const auto r = run_stability_experiment(chain(), src, 0.0, cfg, 1);
    for (double v : r.total_backlog) CHECK(v == 0.0);
    CHECK(r.stable);
  }

  TEST_CASE("light load is stable, overload is not") {
    StabilityConfig cfg;
    cfg.slots = 10000;
    cfg.node_rates = {1.0, 1.0, 1.0};
    const std::vector<Source> src{{0, 2, 1.0}};
    const auto light = run_stability_experiment(chain(), src, 0.4, cfg, 2);
    CHECK(light.stable);
    CHECK(light.slope <= 1e-3);
    const auto heavy = run_stability_experiment(chain(), src, 1.5, cfg, 2);
    CHECK_FALSE(heavy.stable);
    CHECK(heavy.slope > 1e-2);
    CHECK(light.total_backlog.size() == 10000);
    CHECK(light.commodity_backlog.rows() == 10000);
  }

  TEST_CASE("fixed policy") {
    StabilityConfig cfg;
    cfg.policy = PolicyKind::Fixed;
    cfg.slots = 5000;
    cfg.node_rates = {1.0, 1.0, 1.0};
    cfg.arrivals = ArrivalDistribution::Deterministic;
    cfg.fixed = {{Link{0, 1}, 2.0, 0}};
    const std::vector<Source> src{{0, 1, 0.3}};
    const auto r = run_stability_experiment(chain(), src, 1.0, cfg, 1);
    CHECK(r.stable);
    CHECK(r.stats.attempts == 5000);
  }

  TEST_CASE("same seed, same run") {
    StabilityConfig cfg;
    cfg.slots = 1000;
    cfg.node_rates = {1.0, 1.0, 1.0};
    const std::vector<Source> src{{0, 2, 0.5}};
    const auto a = run_stability_experiment(chain(), src, 1.0, cfg, 5);
    const auto b = run_stability_experiment(chain(), src, 1.0, cfg, 5);
    CHECK(a.total_backlog == b.total_backlog);
  }
}
