#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsqs/lattice.hpp"
#include "rsqs/potentials.hpp"

namespace rsqs::cli {

using Json = nlohmann::json;

// Malformed or schema-violating configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Read-only view of a JSON object that records which keys were consumed so
// that finish() can reject anything unknown.
class Section {
 public:
  Section(const Json& j, std::string path);

  bool has(const std::string& key) const;
  const std::string& path() const noexcept { return path_; }

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  std::optional<double> optional_number(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::int64_t integer(const std::string& key, std::int64_t fallback) const;
  std::string string(const std::string& key) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::int64_t> integers(const std::string& key) const;
  Section object(const std::string& key) const;
  const Json& raw(const std::string& key) const;

  // Throws ConfigError naming the first key that was never read.
  void finish() const;

 private:
  const Json& at(const std::string& key) const;

  const Json* json_;
  std::string path_;
  mutable std::set<std::string> seen_;
};

Json parse_config_file(const std::string& path);

struct GridConfig {
  int eta = 1;
  int d_space = 1;
  std::optional<int> n;
  std::optional<double> g_prime;  // with eps, selects n automatically
  std::optional<double> eps;

  GridSpec make() const;
};

GridConfig parse_grid(const Section& s);

// Potential kinds: zero, constant, harmonic, cosine, burst, modified_coulomb,
// molecular, jellium. Geometry-dependent defaults use the grid dimension.
Potential parse_potential(const Section& s, int dim);

struct StateConfig {
  std::string kind = "smooth";
  std::vector<int> m;
  std::vector<double> center;
  std::vector<double> momentum;
  double width = 0.1;
  double kappa = 1.0;
  std::string path;
  bool normalize = true;
};

StateConfig parse_state(const Section& s);
WaveFunction make_state(const StateConfig& c, const GridSpec& grid, std::uint64_t seed);

}  // namespace rsqs::cli
