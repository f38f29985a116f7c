#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fixpointrl::io {

/// Numeric CSV table with a mandatory header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Column position by name; throws IoError when absent.
  std::size_t column(const std::string& name) const;
};

/// Reads `path`, requiring exactly `expected_header`. Errors name the file.
CsvTable read_csv(const std::filesystem::path& path,
                  const std::vector<std::string>& expected_header);

/// Buffered writer producing `.`-decimal, LF-terminated CSV.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);

  CsvWriter& integer(long long value);
  /// Shortest text that round-trips the double exactly.
  CsvWriter& real(double value);
  /// Fixed significant digits, for long trajectories.
  CsvWriter& real(double value, int significant_digits);
  void end_row();

  const std::string& text() const { return text_; }
  void save(const std::filesystem::path& path) const;

 private:
  void separator();

  std::string text_;
  bool row_started_ = false;
};

/// Atomically-enough write: to `path.tmp`, then rename. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace fixpointrl::io
