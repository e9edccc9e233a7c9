// manet-num {props|region|game|num|sim|figures} --config <file> --seed <u64> --out <dir>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "manet/config.hpp"
#include "manet/scenario.hpp"

namespace {

int run(const std::string& subcommand, const std::string& config_path,
        std::optional<std::uint64_t> seed, const std::string& out_dir) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read " << config_path << '\n';
    return manet::kExitValidation;
  }
  std::ostringstream text;
  text << in.rdbuf();

  // The subcommand decides what runs, so it replaces the file's scenario before
  // validation: a config written for another scenario is accepted as long as
  // it carries the sections this one needs.
  std::string source = text.str();
  try {
    auto root = nlohmann::json::parse(source);
    if (root.is_object()) {
      root["scenario"] = subcommand;
      source = root.dump();
    }
  } catch (const nlohmann::json::parse_error&) {
    // parse_config reports malformed JSON.
  }
  manet::ExperimentConfig config;
  try {
    config = manet::parse_config(source);
  } catch (const manet::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return manet::kExitValidation;
  }
  const std::uint64_t s = seed ? *seed : config.seed.value_or(1);
  return manet::run_scenario(config, s, out_dir, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed NUM for Rayleigh-fading MANETs: experiments and figure data"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::string chosen;
  for (const char* name : {"props", "region", "game", "num", "sim", "figures"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " scenario");
    sub->add_option("--config", config_path, "JSON experiment configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed (overrides the config's seed)");
    sub->add_option("--out", out_dir, "output directory for CSV artifacts");
    sub->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : manet::kExitValidation;
  }
  return run(chosen, config_path, seed, out_dir);
}
