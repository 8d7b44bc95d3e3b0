#pragma once

#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bf::cli {

/// Reals are printed with 6 significant digits everywhere in reports and CSVs.
std::string format_real(double value);

/// Ordered key=value block. Keys starting with "wall_" hold wall-clock times and
/// are the only non-deterministic entries.
class Report {
 public:
  void set(std::string key, std::string value);
  void set(std::string key, const char* value) { set(std::move(key), std::string(value)); }
  void set(std::string key, double value) { set(std::move(key), format_real(value)); }
  void set(std::string key, std::uint64_t value) { set(std::move(key), std::to_string(value)); }
  void set_flag(std::string key, bool value) { set(std::move(key), value ? "yes" : "no"); }

  /// Value for key, or empty string.
  std::string get(std::string_view key) const;
  bool has(std::string_view key) const;

  void write(std::ostream& out) const;
  /// Rendering with wall-clock entries dropped.
  std::string deterministic_text() const;

  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// CSV output with a header row. Cells are pre-formatted strings.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::size_t width_;
};

}  // namespace bf::cli
