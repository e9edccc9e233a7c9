#include "manet/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef MANET_VERSION
#define MANET_VERSION "unknown"
#endif

namespace manet {

namespace {

constexpr const char* kModules[] = {"channel-model",   "property-suite", "goodput-region",
                                    "scheduling-game", "num-controller", "queue-simulator",
                                    "cli-harness"};

std::string escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("csv header must not be empty");
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw std::invalid_argument("csv row width does not match the header");
  rows_.push_back(std::move(cells));
}

void CsvTable::add_row(std::span<const double> values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  add_row(std::move(cells));
}

std::string CsvTable::str() const {
  std::ostringstream out;
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << escape(cells[i]);
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out.str();
}

std::string library_version() { return MANET_VERSION; }

void write_csv(const std::filesystem::path& path, const CsvTable& table, const Manifest& manifest) {
  write_file(path, table.str());

  std::ostringstream m;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(manifest.config_hash));
  m << "file=" << path.filename().string() << '\n'
    << "scenario=" << manifest.scenario << '\n'
    << "config_hash=" << hash << '\n'
    << "seed=" << manifest.seed << '\n'
    << "rows=" << table.row_count() << '\n';
  for (const char* module : kModules) m << "module." << module << '=' << MANET_VERSION << '\n';
  write_file(path.string() + ".manifest", m.str());
}

}  // namespace manet
