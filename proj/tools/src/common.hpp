#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "rsqs_cli/config.hpp"

namespace rsqs::cli {

// --seed on the command line overrides rng_seed in the config.
inline std::uint64_t resolve_seed(const Section& s, std::optional<std::uint64_t> cli_seed) {
  const std::int64_t from_config = s.integer("rng_seed", 0);
  if (from_config < 0) throw ConfigError("rng_seed must be non-negative");
  return cli_seed.value_or(static_cast<std::uint64_t>(from_config));
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Least-squares slope of log(y) on log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rsqs::cli
