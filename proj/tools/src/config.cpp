#include "rsqs_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rsqs/rng.hpp"
#include "rsqs/snapshot.hpp"
#include "rsqs/spectral.hpp"

namespace rsqs::cli {

Section::Section(const Json& j, std::string path) : json_(&j), path_(std::move(path)) {
  if (!j.is_object()) throw ConfigError(path_ + ": expected an object");
}

bool Section::has(const std::string& key) const {
  seen_.insert(key);
  return json_->contains(key);
}

const Json& Section::at(const std::string& key) const {
  seen_.insert(key);
  auto it = json_->find(key);
  if (it == json_->end()) throw ConfigError(path_ + ": missing key '" + key + "'");
  return *it;
}

double Section::number(const std::string& key) const {
  const Json& v = at(key);
  if (!v.is_number()) throw ConfigError(path_ + "." + key + ": expected a number");
  return v.get<double>();
}

double Section::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::optional<double> Section::optional_number(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return number(key);
}

std::int64_t Section::integer(const std::string& key) const {
  const Json& v = at(key);
  if (!v.is_number_integer()) throw ConfigError(path_ + "." + key + ": expected an integer");
  return v.get<std::int64_t>();
}

std::int64_t Section::integer(const std::string& key, std::int64_t fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::string Section::string(const std::string& key) const {
  const Json& v = at(key);
  if (!v.is_string()) throw ConfigError(path_ + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::string Section::string(const std::string& key, const std::string& fallback) const {
  return has(key) ? string(key) : fallback;
}

bool Section::boolean(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const Json& v = at(key);
  if (!v.is_boolean()) throw ConfigError(path_ + "." + key + ": expected true or false");
  return v.get<bool>();
}

std::vector<double> Section::numbers(const std::string& key) const {
  const Json& v = at(key);
  if (!v.is_array()) throw ConfigError(path_ + "." + key + ": expected an array of numbers");
  std::vector<double> out;
  for (const Json& e : v) {
    if (!e.is_number()) throw ConfigError(path_ + "." + key + ": expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<std::int64_t> Section::integers(const std::string& key) const {
  const Json& v = at(key);
  if (!v.is_array()) throw ConfigError(path_ + "." + key + ": expected an array of integers");
  std::vector<std::int64_t> out;
  for (const Json& e : v) {
    if (!e.is_number_integer()) throw ConfigError(path_ + "." + key + ": expected an array of integers");
    out.push_back(e.get<std::int64_t>());
  }
  return out;
}

Section Section::object(const std::string& key) const { return Section(at(key), path_ + "." + key); }

const Json& Section::raw(const std::string& key) const { return at(key); }

void Section::finish() const {
  for (auto it = json_->begin(); it != json_->end(); ++it) {
    if (!seen_.contains(it.key())) throw ConfigError(path_ + ": unknown key '" + it.key() + "'");
  }
}

Json parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

GridSpec GridConfig::make() const {
  int chosen = 0;
  if (n) {
    chosen = *n;
  } else {
    chosen = select_truncation(*g_prime, *eps, eta * d_space).n_selected;
  }
  return make_grid(eta, d_space, chosen);
}

GridConfig parse_grid(const Section& s) {
  GridConfig g;
  g.eta = static_cast<int>(s.integer("eta", 1));
  g.d_space = static_cast<int>(s.integer("d_space", 1));
  if (s.has("n")) g.n = static_cast<int>(s.integer("n"));
  g.g_prime = s.optional_number("g_prime");
  g.eps = s.optional_number("eps");
  s.finish();
  if (g.n && (g.g_prime || g.eps)) throw ConfigError(s.path() + ": give either n or (g_prime, eps)");
  if (!g.n && !(g.g_prime && g.eps)) throw ConfigError(s.path() + ": needs n or both g_prime and eps");
  if (g.eta < 1 || g.d_space < 1) throw ConfigError(s.path() + ": eta and d_space must be positive");
  return g;
}

namespace {

std::vector<double> center_or_half(const Section& s, int dim) {
  std::vector<double> c = s.has("center") ? s.numbers("center") : std::vector<double>(dim, 0.5);
  if (static_cast<int>(c.size()) != dim) throw ConfigError(s.path() + ".center: length must equal grid dimension");
  return c;
}

double cosine_well(std::span<const double> x, std::span<const double> c) {
  double s = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) s += 1.0 - std::cos(2.0 * std::numbers::pi * (x[a] - c[a]));
  return s;
}

}  // namespace

Potential parse_potential(const Section& s, int dim) {
  const std::string kind = s.string("kind");
  Potential v;
  if (kind == "zero") {
    v = Potential::zero();
  } else if (kind == "constant") {
    v = Potential::constant(s.number("value"));
  } else if (kind == "harmonic") {
    v = Potential::harmonic(s.number("omega2"), center_or_half(s, dim));
  } else if (kind == "cosine") {
    // amplitude * sum_a (1 - cos 2 pi (x_a - c_a))
    const double amp = s.number("amplitude");
    const std::vector<double> c = center_or_half(s, dim);
    v = Potential::callable([amp, c](std::span<const double> x, double) { return amp * cosine_well(x, c); },
                            false);
  } else if (kind == "burst") {
    // Cosine well whose depth spikes by peak_ratio around t0.
    const double amp = s.number("amplitude");
    const double ratio = s.number("peak_ratio", 100.0);
    const double t0 = s.number("t0");
    const double width = s.number("width");
    if (!(width > 0.0) || !(ratio >= 1.0)) throw ConfigError(s.path() + ": need width > 0 and peak_ratio >= 1");
    const std::vector<double> c = center_or_half(s, dim);
    v = Potential::callable(
        [amp, ratio, t0, width, c](std::span<const double> x, double t) {
          const double z = (t - t0) / width;
          return amp * (1.0 + (ratio - 1.0) * std::exp(-z * z)) * cosine_well(x, c);
        },
        true);
  } else if (kind == "modified_coulomb") {
    v = Potential::modified_coulomb(s.numbers("charges"), static_cast<int>(s.integer("d_space", 3)),
                                    s.number("delta"));
  } else if (kind == "molecular") {
    v = Potential::molecular(s.number("Z"), s.number("mass", 1.0), static_cast<int>(s.integer("eta_e")),
                             static_cast<int>(s.integer("eta_n")), s.number("delta"));
  } else if (kind == "jellium") {
    v = Potential::jellium(s.number("e", 1.0), s.number("delta"));
  } else {
    throw ConfigError(s.path() + ".kind: unknown potential '" + kind + "'");
  }
  s.finish();
  return v;
}

StateConfig parse_state(const Section& s) {
  StateConfig c;
  c.kind = s.string("kind");
  if (c.kind == "plane_wave") {
    for (std::int64_t m : s.integers("m")) c.m.push_back(static_cast<int>(m));
  } else if (c.kind == "gaussian") {
    c.center = s.numbers("center");
    c.width = s.number("width");
    if (s.has("momentum")) c.momentum = s.numbers("momentum");
  } else if (c.kind == "smooth") {
    c.kappa = s.number("kappa", 1.0);
    if (s.has("center")) c.center = s.numbers("center");
    if (s.has("momentum")) c.momentum = s.numbers("momentum");
  } else if (c.kind == "snapshot") {
    c.path = s.string("path");
  } else if (c.kind != "constant" && c.kind != "step" && c.kind != "random") {
    throw ConfigError(s.path() + ".kind: unknown initial state '" + c.kind + "'");
  }
  c.normalize = s.boolean("normalize", true);
  s.finish();
  return c;
}

WaveFunction make_state(const StateConfig& c, const GridSpec& grid, std::uint64_t seed) {
  const int dim = grid.dim();
  auto per_axis = [&](const std::vector<double>& v, double fallback, const char* what) {
    if (v.empty()) return std::vector<double>(dim, fallback);
    if (static_cast<int>(v.size()) != dim) {
      throw ConfigError(std::string("initial_state.") + what + ": length must equal grid dimension");
    }
    return v;
  };
  WaveFunction psi(grid, Representation::kPosition);
  if (c.kind == "snapshot") {
    psi = read_snapshot(std::filesystem::path(c.path));
    if (!(psi.grid() == grid)) throw ConfigError("initial_state.path: snapshot grid differs from config grid");
  } else if (c.kind == "plane_wave") {
    if (static_cast<int>(c.m.size()) != dim) throw ConfigError("initial_state.m: length must equal grid dimension");
    for_each_node(grid, [&](std::size_t flat, std::span<const double> x) {
      double phase = 0.0;
      for (int a = 0; a < dim; ++a) phase += 2.0 * std::numbers::pi * (c.m[a] - grid.n() / 2) * x[a];
      psi[flat] = std::polar(1.0, phase);
    });
  } else if (c.kind == "gaussian") {
    const auto center = per_axis(c.center, 0.5, "center");
    const auto p = per_axis(c.momentum, 0.0, "momentum");
    if (!(c.width > 0.0)) throw ConfigError("initial_state.width: must be positive");
    for_each_node(grid, [&](std::size_t flat, std::span<const double> x) {
      double e = 0.0;
      double phase = 0.0;
      for (int a = 0; a < dim; ++a) {
        double dx = x[a] - center[a];
        dx -= std::round(dx);
        e += dx * dx / (4.0 * c.width * c.width);
        phase += 2.0 * std::numbers::pi * p[a] * x[a];
      }
      psi[flat] = std::polar(std::exp(-e), phase);
    });
  } else if (c.kind == "smooth") {
    const auto center = per_axis(c.center, 0.5, "center");
    const auto p = per_axis(c.momentum, 0.0, "momentum");
    for_each_node(grid, [&](std::size_t flat, std::span<const double> x) {
      double s = 0.0;
      double phase = 0.0;
      for (int a = 0; a < dim; ++a) {
        s += c.kappa * std::cos(2.0 * std::numbers::pi * (x[a] - center[a]));
        phase += 2.0 * std::numbers::pi * p[a] * x[a];
      }
      psi[flat] = std::polar(std::exp(s), phase);
    });
  } else if (c.kind == "constant") {
    for (Complex& z : psi.amplitudes()) z = 1.0;
  } else if (c.kind == "step") {
    for_each_node(grid, [&](std::size_t flat, std::span<const double> x) { psi[flat] = x[0] < 0.5 ? 1.0 : 0.0; });
  } else {
    CounterRng rng(seed, 1);
    for (Complex& z : psi.amplitudes()) z = Complex{rng.uniform() - 0.5, rng.uniform() - 0.5};
  }
  return c.normalize ? normalize_discrete(psi) : psi;
}

}  // namespace rsqs::cli
