#include "rsqs_cli/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "rsqs/error.hpp"

namespace rsqs::cli {

void Artifacts::add(std::string name, std::string content) {
  files_.emplace_back(std::move(name), std::move(content));
}

void Artifacts::commit(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIoFailure, "cannot create output directory " + dir.string());
  for (const auto& [name, content] : files_) {
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
    if (!out) fail(ErrorCode::kIoFailure, "cannot write " + (dir / name).string());
  }
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Csv::Csv(std::vector<std::string> header) : columns_(header.size()) { push(header); }

void Csv::push(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) fail(ErrorCode::kInvalidArgument, "csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

}  // namespace rsqs::cli
