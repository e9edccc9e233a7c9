#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "manet/csv.hpp"

using namespace manet;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("csv") {
  TEST_CASE("number formatting") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1.5) == "1.5");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(1e-20) == "1e-20");
    CHECK(format_number(-2.0) == "-2");
  }

  TEST_CASE("table text") {
    CsvTable t({"a", "b"});
    t.add_row(std::vector<double>{1.0, 0.25});
    t.add_row(std::vector<std::string>{"x,y", "say \"hi\""});
    CHECK(t.row_count() == 2);
    CHECK(t.str() == "a,b\n1,0.25\n\"x,y\",\"say \"\"hi\"\"\"\n");
    CHECK_THROWS_AS(t.add_row(std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(CsvTable({}), std::invalid_argument);
  }

  TEST_CASE("csv with manifest sibling") {
    const auto dir = std::filesystem::temp_directory_path() / "manet_csv_test";
    std::filesystem::create_directories(dir);
    CsvTable t({"v"});
    t.add_row(std::vector<double>{2.0});
    write_csv(dir / "out.csv", t, Manifest{"props", 0xabcULL, 9});
    CHECK(slurp(dir / "out.csv") == "v\n2\n");
    const std::string m = slurp(dir / "out.csv.manifest");
    CHECK(m.find("file=out.csv\n") != std::string::npos);
    CHECK(m.find("scenario=props\n") != std::string::npos);
    CHECK(m.find("config_hash=0000000000000abc\n") != std::string::npos);
    CHECK(m.find("seed=9\n") != std::string::npos);
    CHECK(m.find("rows=1\n") != std::string::npos);
    for (const char* module : {"channel-model", "property-suite", "goodput-region", "scheduling-game",
                               "num-controller", "queue-simulator", "cli-harness"})
      CHECK(m.find(std::string("module.") + module + "=" + library_version()) != std::string::npos);
    CHECK_THROWS_AS(write_csv(dir / "missing" / "x.csv", t, Manifest{}), std::runtime_error);
    std::filesystem::remove_all(dir);
  }
}
