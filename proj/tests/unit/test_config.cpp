#include <algorithm>
#include <string>

#include "doctest.h"
#include "manet/config.hpp"

using namespace manet;

namespace {

const char* kMinimal = R"({
  "scenario": "game",
  "topology": {
    "nodes": 2,
    "gains": [[0, 1], [1, 0]],
    "noise": [0.1, 0.1],
    "power_min": [0.1, 0.1],
    "power_max": [2, 2]
  },
  "game": {"links": [{"origin": 0, "end": 1}]}
})";

std::vector<std::string> errors_of(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.errors();
  }
  return {};
}

bool has_error(const std::vector<std::string>& errors, const std::string& fragment) {
  return std::any_of(errors.begin(), errors.end(),
                     [&](const std::string& e) { return e.find(fragment) != std::string::npos; });
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("minimal two-node config fills defaults") {
    const auto cfg = parse_config(kMinimal);
    CHECK(cfg.scenario == Scenario::Game);
    REQUIRE(cfg.topology);
    CHECK(cfg.topology->node_count() == 2);
    CHECK(cfg.rates.size() == 5);
    CHECK(cfg.node_rates == std::vector<double>{2.0, 2.0});
    CHECK_FALSE(cfg.seed);
    CHECK(cfg.game.config.tolerance == 1e-7);
    CHECK(cfg.game.config.max_iterations == 200);
    CHECK(cfg.game.weights.empty());
    CHECK(cfg.drops.default_delta == 1.0);
    CHECK(cfg.num.stepsize == 0.05);
    CHECK(cfg.sim.slope_threshold == 1e-3);
    CHECK(cfg.hash != 0);
  }

  TEST_CASE("hash ignores formatting and key order") {
    const std::string reordered = R"({"game": {"links": [{"end": 1, "origin": 0}]},
      "topology": {"power_max": [2, 2], "power_min": [0.1, 0.1], "noise": [0.1, 0.1],
                   "gains": [[0, 1], [1, 0]], "nodes": 2}, "scenario": "game"})";
    CHECK(parse_config(reordered).hash == parse_config(kMinimal).hash);
    CHECK(parse_config(replace(kMinimal, "0.1, 0.1]", "0.2, 0.1]")).hash != parse_config(kMinimal).hash);
  }

  TEST_CASE("zero minimum power is rejected by name") {
    const auto errors = errors_of(replace(kMinimal, R"("power_min": [0.1, 0.1])", R"("power_min": [0.1, 0])"));
    REQUIRE(errors.size() == 1);
    CHECK(has_error(errors, "topology.power_min[1] must be > 0"));
  }

  TEST_CASE("gain matrix dimension mismatch") {
    const auto errors = errors_of(replace(kMinimal, "[[0, 1], [1, 0]]", "[[0, 1, 1], [1, 0, 1], [1, 1, 0]]"));
    CHECK(has_error(errors, "topology.gains has 3 rows but nodes = 2"));
  }

  TEST_CASE("unknown keys are named with their path") {
    auto text = replace(kMinimal, R"("nodes": 2,)", R"("nodes": 2, "colour": 1,)");
    text = replace(text, R"("scenario": "game",)", R"("scenario": "game", "sed": 3,)");
    const auto errors = errors_of(text);
    CHECK(has_error(errors, "unknown key topology.colour"));
    CHECK(has_error(errors, "unknown key config.sed"));
  }

  TEST_CASE("every problem is reported in one pass") {
    auto text = replace(kMinimal, R"("power_min": [0.1, 0.1])", R"("power_min": [0, -1])");
    text = replace(text, R"("noise": [0.1, 0.1])", R"("noise": [0.1])");
    text = replace(text, R"("end": 1)", R"("end": 7)");
    const auto errors = errors_of(text);
    CHECK(errors.size() >= 4);
    CHECK(has_error(errors, "power_min[0]"));
    CHECK(has_error(errors, "power_min[1]"));
    CHECK(has_error(errors, "topology.noise has 1 entries but nodes = 2"));
    CHECK(has_error(errors, "outside"));
  }

  TEST_CASE("referential integrity of flows") {
    const std::string text = R"({"scenario": "num",
      "topology": {"nodes": 2, "gains": [[0, 1], [1, 0]], "noise": [1, 1],
                   "power_min": [0.1, 0.1], "power_max": [1, 1]},
      "flows": [{"source": 0, "destination": 4}, {"source": 1, "destination": 1}]})";
    const auto errors = errors_of(text);
    CHECK(has_error(errors, "flows[0] references a node outside the topology"));
    CHECK(has_error(errors, "flows[1] source and destination must differ"));
  }

  TEST_CASE("scenario requirements") {
    CHECK(has_error(errors_of(R"({"scenario": "sim"})"), "topology is required"));
    CHECK(has_error(errors_of(R"({"scenario": "plot"})"), "scenario must be one of"));
    CHECK(has_error(errors_of(R"({"seed": 1})"), "scenario is required"));
    CHECK(has_error(errors_of("{not json"), "malformed JSON"));
    CHECK(has_error(errors_of(R"({"scenario": "props", "rates": [0.5, 0.2]})"), "rates"));
  }

  TEST_CASE("rates, deltas and sub-sections") {
    const std::string text = R"({"scenario": "props", "seed": 42,
      "rates": {"first": 0.2, "step": 0.2, "last": 0.6},
      "delta": {"default": 0.5, "links": [{"origin": 0, "end": 1, "delta": 0.25}]},
      "topology": {"nodes": 2, "gains": [[0, 1], [1, 0]], "noise": [1, 1],
                   "power_min": [0.1, 0.1], "power_max": [1, 1]},
      "link_channel": {"gains": [[1, 0.5], [0.8, 1]], "noise": [1, 1]},
      "props": {"samples": 10, "sweeps": [{"link": 0, "swept": 1, "powers": [5, 5],
                                            "from": 0, "to": 20, "points": 30}]}})";
    const auto cfg = parse_config(text);
    CHECK(cfg.seed == std::uint64_t{42});
    CHECK(cfg.rates.size() == 3);
    CHECK(cfg.drops.default_delta == 0.5);
    CHECK(cfg.drops.delta(Link{0, 1}) == 0.25);
    REQUIRE(cfg.link_channel);
    CHECK(cfg.link_channel->gain(1, 0) == 0.8);
    CHECK(cfg.props.samples == 10);
    REQUIRE(cfg.props.sweeps.size() == 1);
    CHECK(cfg.props.sweeps[0].swept == 1);
    CHECK(cfg.props.sweeps[0].points == 30);
  }

  TEST_CASE("scenario names round-trip") {
    for (auto s : {Scenario::Props, Scenario::Region, Scenario::Game, Scenario::Num, Scenario::Sim,
                   Scenario::Figures}) {
      CHECK(parse_scenario(scenario_name(s)) == s);
    }
    CHECK_FALSE(parse_scenario("nope"));
  }
}
