#pragma once

// Experiment configuration. The file format is JSON; docs/config.md in the
// repository lists every key. Node ids are 0-based.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "manet/channel.hpp"
#include "manet/goodput_region.hpp"
#include "manet/num_controller.hpp"
#include "manet/property_suite.hpp"
#include "manet/queue_simulator.hpp"
#include "manet/scheduling_game.hpp"
#include "manet/topology.hpp"

namespace manet {

enum class Scenario { Props, Region, Game, Num, Sim, Figures };

std::string_view scenario_name(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view name);

/// Every validation problem found in one pass.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct FlowSpec {
  NodeId source = 0;
  NodeId destination = 0;
  UtilitySpec utility;
  /// Mean arrival rate for the queue simulation.
  double rate = 0.0;
};

struct PropsSettings {
  std::size_t samples = 1000;
  double tolerance = 1e-9;
  std::size_t min_links = 2;
  std::size_t max_links = 5;
  std::vector<GoodputSweep> sweeps;
};

struct RegionSettings {
  std::vector<Link> links;
  PowerGrid::Kind grid = PowerGrid::Kind::Box;
  /// Box upper ends per link; defaults to the origin's P_max.
  std::vector<double> power_max;
  double total = 0.0;
  std::size_t points = 50;
  std::vector<double> deltas{1.0, 0.5, 0.0};
};

struct GameSettings {
  std::vector<Link> links;
  std::vector<double> weights;
  GameConfig config;
  bool oracle = true;
  std::size_t oracle_points = 20;
  /// Also recover every c_n from simulated simultaneous broadcasts.
  bool over_air = false;
  std::size_t symbols = 10000;
};

struct NumSettings {
  double stepsize = 0.05;
  std::size_t iterations = 1000;
  SchedulerKind scheduler = SchedulerKind::Game;
  GoodputMode goodput = GoodputMode::Expected;
  double rate_cap = 10.0;
  std::size_t oracle_points = 10;
  std::size_t oracle_sweeps = 50;
};

struct SimSettings {
  std::size_t slots = 50000;
  double scale = 1.0;
  PolicyKind policy = PolicyKind::GoodputBackpressure;
  SchedulerKind scheduler = SchedulerKind::Game;
  ArrivalDistribution arrivals = ArrivalDistribution::Poisson;
  std::vector<FixedTransmission> fixed;
  double slope_threshold = 1e-3;
};

struct ExperimentConfig {
  Scenario scenario = Scenario::Props;
  std::optional<std::uint64_t> seed;
  std::optional<NetworkTopology> topology;
  /// Link-level channel for sweeps and regions whose gains are not node based.
  std::optional<LinkChannel> link_channel;
  RateSet rates = RateSet::arithmetic(0.4, 0.4, 2.0);
  /// Per-node scheduled rate; defaults to the largest rate of `rates`.
  std::vector<double> node_rates;
  std::vector<FlowSpec> flows;
  DropPolicy drops;
  PropsSettings props;
  RegionSettings region;
  GameSettings game;
  NumSettings num;
  SimSettings sim;
  /// FNV-1a of the canonical (sorted-key, compact) JSON text.
  std::uint64_t hash = 0;
};

/// Parses and validates; throws ConfigError listing every problem.
ExperimentConfig parse_config(std::string_view text);

}  // namespace manet
