#pragma once

// Scenario orchestration: runs one experiment from a parsed configuration and
// writes its CSV artifacts. Also holds the built-in figure setups.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "manet/config.hpp"

namespace manet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNonConvergence = 2;

struct SweepSetup {
  LinkChannel channel;
  RateSet rates;
  GoodputSweep sweep;
};

struct RegionSetup {
  LinkChannel channel;
  RateSet rates;
  PowerGrid grid;
};

struct NumSetup {
  NetworkTopology topology;
  std::vector<CommodityFlow> flows;
  std::vector<double> node_rates;
};

/// Two links, rates {0.4, 0.8, ..., 2}, p_2 = 5, p_1 swept over (0, 20].
/// Unit gains and unit noise.
SweepSetup figure2_setup(std::size_t points = 200);
/// Same channel, p_1 = 25, p_2 swept over (0, 20].
SweepSetup figure3_setup(std::size_t points = 200);
/// Two transmitters, one receiver, unit gains, rates {0.4, ..., 1.8},
/// p_1 in [0, 2], p_2 in [0, 3]; unit noise stands in.
RegionSetup figure4_setup(std::size_t points = 50);
/// One transmitter, two receivers, G = [[1, 0.5], [0.8, 1]], rates
/// {0.2, 0.4, 0.6}, p_1 + p_2 <= 10; unit noise stands in.
RegionSetup figure5_setup(std::size_t points = 50);
/// Four-node network, source 0 sending to nodes 2 and 3 with log utilities.
/// The layout is a stand-in: nodes on a diamond, path gain distance^-3 within
/// range. Comparisons against the oracle on it are qualitative.
NumSetup figure6_setup();

/// Runs `config.scenario`, writing CSVs (each with a manifest) into `out_dir`,
/// and progress lines to `log`. Returns kExitOk, kExitValidation or
/// kExitNonConvergence.
int run_scenario(const ExperimentConfig& config, std::uint64_t seed,
                 const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace manet
