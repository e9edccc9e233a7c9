#include <benchmark/benchmark.h>

#include <vector>

#include "instances.hpp"
#include "manet/channel.hpp"
#include "manet/goodput_region.hpp"
#include "manet/over_air.hpp"
#include "manet/property_suite.hpp"
#include "manet/queue_simulator.hpp"
#include "manet/scenario.hpp"
#include "manet/scheduling_game.hpp"

using namespace manet;

namespace {

SchedulingInstance instance(std::size_t players) {
  Rng rng(players);
  return testing_support::random_instance(players, rng);
}

void BM_SuccessProbability(benchmark::State& state) {
  const std::size_t links = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const LinkChannel ch = random_link_channel(links, rng);
  const std::vector<double> p(links, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(success_probability(ch, p, 0, 1.0));
}
BENCHMARK(BM_SuccessProbability)->Arg(2)->Arg(5)->Arg(20);

void BM_Derivatives(benchmark::State& state) {
  const std::size_t links = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  const LinkChannel ch = random_link_channel(links, rng);
  const std::vector<double> p(links, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(derivatives(ch, p, 0, 1.0));
}
BENCHMARK(BM_Derivatives)->Arg(2)->Arg(5)->Arg(20);

void BM_BestResponse(benchmark::State& state) {
  const auto inst = instance(4);
  const std::vector<double> p(4, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(best_response_power(inst, 0, p, -0.05));
}
BENCHMARK(BM_BestResponse);

void BM_RoundRobin(benchmark::State& state) {
  const auto inst = instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_round_robin(inst));
}
// Price floors enumerate 8^players power vectors, which dominates past five players.
BENCHMARK(BM_RoundRobin)->Arg(2)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMicrosecond);

void BM_BruteForce(benchmark::State& state) {
  const auto inst = instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(refined_brute_force_schedule(inst, 10));
}
BENCHMARK(BM_BruteForce)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Figure4Region(benchmark::State& state) {
  const RegionSetup f = figure4_setup(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_region(f.channel, f.rates, f.grid, DroppingProfile::uniform(2, 1.0)));
}
BENCHMARK(BM_Figure4Region)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_OverAir(benchmark::State& state) {
  const auto inst = instance(4);
  const std::vector<double> p(4, 1.0);
  const auto phi_player = broadcast_prices(inst, p);
  std::vector<double> phi(inst.topology().node_count(), 0.0);
  for (std::size_t m = 1; m < 4; ++m) phi[inst.links()[m].end] += phi_player[m];
  phi[inst.links()[0].origin] = 0.0;
  Rng rng(3);
  for (auto _ : state)
    benchmark::DoNotOptimize(aggregate_prices_over_air(inst.topology(), phi, inst.links()[0].origin, 0.5, {}, rng));
}
BENCHMARK(BM_OverAir)->Unit(benchmark::kMicrosecond);

void BM_QueueSlots(benchmark::State& state) {
  Matrix g(3, 3, 0.0);
  g(1, 0) = g(0, 1) = g(2, 1) = g(1, 2) = 1.0;
  g(2, 0) = g(0, 2) = 0.05;
  const NetworkTopology topo(g, {0.1, 0.1, 0.1}, std::vector<PowerBounds>(3, PowerBounds{0.1, 2.0}));
  StabilityConfig cfg;
  cfg.node_rates = {1.0, 1.0, 1.0};
  cfg.slots = 1000;
  const std::vector<Source> src{{0, 2, 0.7}};
  for (auto _ : state) benchmark::DoNotOptimize(run_stability_experiment(topo, src, 1.0, cfg, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(cfg.slots));
}
BENCHMARK(BM_QueueSlots)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
