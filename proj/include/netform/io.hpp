#pragma once
// CSV/JSON output helpers. All writes are atomic (temp file + rename).

#include <filesystem>
#include <string>
#include <vector>

namespace netform {

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

struct CsvWriter {
  explicit CsvWriter(std::vector<std::string> columns);
  void row(const std::vector<std::string>& cells);
  void row_num(const std::vector<double>& cells);
  void save(const std::filesystem::path& path) const;
  std::string str() const { return body_; }

 private:
  std::size_t ncol_;
  std::string body_;
};

std::string format_double(double v);

}  // namespace netform
