#pragma once

// CSV artifacts with a manifest sibling. Output is a pure function of the
// rows: fixed number formatting, no timestamps, "\n" line endings.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace manet {

/// Shortest-form "%.12g" rendering; -0 prints as 0.
std::string format_number(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  void add_row(std::span<const double> values);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t row_count() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Manifest {
  std::string scenario;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

/// Library version baked in at build time.
std::string library_version();

/// Writes `path` and `path`.manifest. Throws std::runtime_error on I/O failure.
void write_csv(const std::filesystem::path& path, const CsvTable& table, const Manifest& manifest);

}  // namespace manet
