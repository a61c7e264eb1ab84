#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace rsqs::cli {

// Collects output files in memory and writes them only once a command has
// finished, so failed runs leave no partial artifacts.
class Artifacts {
 public:
  void add(std::string name, std::string content);
  void commit(const std::filesystem::path& dir) const;
  const std::vector<std::pair<std::string, std::string>>& files() const noexcept { return files_; }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

// Round-trip formatting for floating point CSV fields.
std::string fmt(double v);

class Csv {
 public:
  explicit Csv(std::vector<std::string> header);

  template <typename... Ts>
  void row(const Ts&... fields) {
    std::vector<std::string> cells{cell(fields)...};
    push(cells);
  }

  void row_cells(const std::vector<std::string>& cells) { push(cells); }

  std::string str() const { return text_; }

 private:
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(unsigned v) { return std::to_string(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(long long v) { return std::to_string(v); }
  static std::string cell(unsigned long v) { return std::to_string(v); }
  static std::string cell(unsigned long long v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  void push(const std::vector<std::string>& cells);

  std::size_t columns_;
  std::string text_;
};

}  // namespace rsqs::cli
