#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "manet/scenario.hpp"

using namespace manet;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::map<std::string, std::string> run(const std::string& config, std::uint64_t seed, int& code) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / ("manet_scenario_" + std::to_string(counter++));
  fs::remove_all(dir);
  std::ostringstream log;
  code = run_scenario(parse_config(config), seed, dir, log);
  std::map<std::string, std::string> files;
  if (fs::exists(dir))
    for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = slurp(e.path());
  fs::remove_all(dir);
  return files;
}

// Cell `col` of data row `row` (0-based, header excluded).
std::string cell(const std::string& csv, std::size_t row, const std::string& col) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::istringstream h(line);
    std::string c;
    while (std::getline(h, c, ',')) header.push_back(c);
  }
  for (std::size_t r = 0; r <= row; ++r) std::getline(in, line);
  std::istringstream l(line);
  std::string c;
  for (std::size_t i = 0; std::getline(l, c, ','); ++i)
    if (header[i] == col) return c;
  return {};
}

const char* kGame = R"({"scenario": "game",
  "topology": {"nodes": 3, "gains": [[0, 0.2, 1], [1, 0, 0.3], [0.1, 1, 0]],
               "noise": [0.1, 0.1, 0.1], "power_min": [0.1, 0.1, 0.1], "power_max": [2, 2, 2]},
  "node_rates": [1, 0.8, 1.2],
  "game": {"links": [{"origin": 0, "end": 1}, {"origin": 1, "end": 2}, {"origin": 2, "end": 0}],
           "weights": [1, 2, 0.5], "oracle_points": 8, "over_air": true, "symbols": 2000}})";

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("props scenario is deterministic per seed") {
    const std::string cfg = R"({"scenario": "props", "props": {"samples": 100}})";
    int a_code = -1, b_code = -1, c_code = -1;
    const auto a = run(cfg, 3, a_code);
    const auto b = run(cfg, 3, b_code);
    const auto c = run(cfg, 4, c_code);
    CHECK(a_code == kExitOk);
    CHECK(b_code == kExitOk);
    REQUIRE(a.count("props_report.csv"));
    CHECK(a == b);
    CHECK(a.at("props_report.csv.manifest") != c.at("props_report.csv.manifest"));
    for (const auto& [name, text] : a) {
      if (name.ends_with(".csv")) CHECK(a.count(name + ".manifest"));
    }
  }

  TEST_CASE("game scenario with the oracle reports a non-negative gap") {
    int code = -1;
    const auto out = run(kGame, 1, code);
    CHECK(code == kExitOk);
    REQUIRE(out.count("game_summary.csv"));
    const std::string& s = out.at("game_summary.csv");
    CHECK(cell(s, 0, "converged") == "1");
    CHECK(std::stod(cell(s, 0, "gap")) >= 0.0);
    CHECK(std::stod(cell(s, 0, "kkt_residual")) <= 1e-6);
    REQUIRE(out.count("game_over_air.csv"));
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::stod(cell(out.at("game_over_air.csv"), i, "relative_error")) < 0.1);
    CHECK(out.at("game_trace.csv").rfind("iteration,p0,p1,p2,c0,c1,c2,objective\n", 0) == 0);
  }

  TEST_CASE("non-convergence exits with code 2") {
    std::string cfg = kGame;
    cfg.replace(cfg.find(R"("oracle_points": 8)"), 18, R"("max_iterations": 1)");
    int code = -1;
    (void)run(cfg, 1, code);
    CHECK(code == kExitNonConvergence);
  }

  TEST_CASE("region scenario from a link channel") {
    const std::string cfg = R"({"scenario": "region", "rates": [0.4, 0.8, 1.2, 1.6],
      "link_channel": {"gains": [[1, 1], [1, 1]], "noise": [1, 1]},
      "region": {"power_max": [2, 3], "points": 20, "deltas": [1, 0]}})";
    int code = -1;
    const auto out = run(cfg, 1, code);
    CHECK(code == kExitOk);
    CHECK(out.count("region_delta_1_raw.csv"));
    CHECK(out.count("region_delta_0_hull.csv"));
    const std::string& sum = out.at("region_summary.csv");
    CHECK(std::stod(cell(sum, 1, "hull_area")) == doctest::Approx(1.6 * 1.6));
    CHECK(std::stod(cell(sum, 0, "hull_area")) < 1.6 * 1.6);
  }

  TEST_CASE("num and sim scenarios") {
    const std::string topo = R"("topology": {"nodes": 3,
        "gains": [[0, 1, 0.05], [1, 0, 1], [0.05, 1, 0]], "noise": [0.1, 0.1, 0.1],
        "power_min": [0.1, 0.1, 0.1], "power_max": [2, 2, 2]},
      "node_rates": [1, 1, 1], "flows": [{"source": 0, "destination": 2, "rate": 0.3}])";
    int code = -1;
    const auto num = run(R"({"scenario": "num", )" + topo + R"(, "num": {"iterations": 200}})", 1, code);
    CHECK(code == kExitOk);
    CHECK(num.count("num_trace.csv"));
    CHECK(num.count("num_summary.csv"));
    const auto sim = run(R"({"scenario": "sim", )" + topo + R"(, "sim": {"slots": 3000}})", 1, code);
    CHECK(code == kExitOk);
    CHECK(cell(sim.at("sim_summary.csv"), 0, "stable") == "1");
  }

  TEST_CASE("figures scenario writes every artifact and its sweeps pass") {
    const std::string cfg = R"({"scenario": "figures", "region": {"points": 30}, "num": {"iterations": 300}})";
    int code = -1;
    const auto out = run(cfg, 1, code);
    CHECK(code == kExitOk);
    for (const char* f : {"fig2_sweep.csv", "fig3_sweep.csv", "fig23_properties.csv", "fig4_delta_1_raw.csv",
                          "fig4_delta_1_hull.csv", "fig5_raw.csv", "fig45_regions.csv", "fig6_game_trace.csv",
                          "fig6_oracle_trace.csv", "fig6_summary.csv"})
      CHECK_MESSAGE(out.count(f), f);
    const std::string& props = out.at("fig23_properties.csv");
    for (std::size_t r = 0; r < 4; ++r) CHECK(cell(props, r, "violations") == "0");
  }

  TEST_CASE("a link without direct gain fails validation at run time") {
    std::string cfg = kGame;
    cfg.replace(cfg.find("[0.1, 1, 0]]"), 12, "[0.1, 0, 0]]");  // node 1 no longer reaches node 2
    int code = -1;
    (void)run(cfg, 1, code);
    CHECK(code == kExitValidation);
  }
}
