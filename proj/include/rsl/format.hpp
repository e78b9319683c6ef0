#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rsl {

/// Locale-independent, 17 significant digits, shortest of fixed/scientific.
std::string format_number(double value);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// 16 lowercase hex digits.
std::string hex64(std::uint64_t value);

/// CSV text: `#` comment lines, one header row, then rows; `\n` line endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void comment(std::string line);
  void row(std::vector<std::string> cells);
  std::string str() const;

 private:
  std::vector<std::string> comments_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes to a sibling temporary file, then renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace rsl
