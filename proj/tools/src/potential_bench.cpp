#include <cmath>
#include <fstream>
#include <sstream>

#include "common.hpp"
#include "rsqs/bhtree.hpp"
#include "rsqs/potentials.hpp"
#include "rsqs/rng.hpp"
#include "rsqs_cli/commands.hpp"

namespace rsqs::cli {

namespace {

struct Cloud {
  std::vector<double> x;
  std::vector<double> q;
};

// Rows "q,x1,...,xd"; blank lines, '#' comments and a leading header are skipped.
Cloud read_particles(const std::filesystem::path& path, int d) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open particle file " + path.string());
  Cloud c;
  std::string line;
  bool first = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> fields;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        fields.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    first = false;
    if (static_cast<int>(fields.size()) != d + 1) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected q and " + std::to_string(d) +
                        " coordinates");
    }
    c.q.push_back(fields[0]);
    c.x.insert(c.x.end(), fields.begin() + 1, fields.end());
  }
  if (c.q.size() < 2) throw ConfigError(path.string() + ": need at least two particles");
  return c;
}

Cloud synthetic_cloud(int eta, int d, const std::string& charges, std::uint64_t seed) {
  CounterRng rng(seed, static_cast<std::uint64_t>(eta));
  Cloud c;
  c.x.resize(static_cast<std::size_t>(eta) * d);
  c.q.resize(static_cast<std::size_t>(eta));
  for (double& v : c.x) v = rng.uniform();
  for (int i = 0; i < eta; ++i) {
    if (charges == "unit") {
      c.q[i] = 1.0;
    } else if (charges == "alternating") {
      c.q[i] = i % 2 == 0 ? 1.0 : -1.0;
    } else {
      c.q[i] = rng.uniform() < 0.5 ? 1.0 : -1.0;
    }
  }
  return c;
}

// Largest single-pair change caused by the regularization, relative to |E|:
// the scale below which tree error is indistinguishable from choosing Delta.
double regularization_gap(const Cloud& c, int d, double delta) {
  const std::size_t eta = c.q.size();
  double gap = 0.0;
  for (std::size_t i = 0; i < eta; ++i) {
    for (std::size_t j = i + 1; j < eta; ++j) {
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double diff = c.x[i * d + a] - c.x[j * d + a];
        r2 += diff * diff;
      }
      const double bare = r2 > 0.0 ? 1.0 / std::sqrt(r2) : 1.0 / delta;
      gap = std::max(gap, std::abs(c.q[i] * c.q[j]) * (bare - 1.0 / std::sqrt(r2 + delta * delta)));
    }
  }
  return gap;
}

}  // namespace

CommandResult run_potential_bench(const Json& config, std::optional<std::uint64_t> cli_seed,
                                  const std::filesystem::path& config_dir) {
  const Section root(config, "config");
  const int d = static_cast<int>(root.integer("d", 3));
  const double delta = root.number("delta");
  std::vector<std::int64_t> etas;
  std::string particles;
  if (root.has("particles")) {
    particles = root.string("particles");
  } else {
    etas = root.integers("eta_values");
  }
  const std::string charges = root.string("charges", "random_sign");
  if (charges != "unit" && charges != "alternating" && charges != "random_sign") {
    throw ConfigError("config.charges: expected unit, alternating or random_sign");
  }
  BHOptions options;
  if (root.has("order")) options.order = static_cast<int>(root.integer("order"));
  options.opening = root.optional_number("opening");
  const std::optional<double> fixed_target = root.optional_number("target");
  const std::uint64_t seed = resolve_seed(root, cli_seed);
  root.finish();
  if (d < 1) throw ConfigError("config.d: must be positive");
  if (!(delta > 0.0)) throw ConfigError("config.delta: must be positive");
  for (std::int64_t eta : etas) {
    if (eta < 2) throw ConfigError("config.eta_values: need at least two particles");
  }

  std::vector<Cloud> clouds;
  if (!particles.empty()) {
    std::filesystem::path p(particles);
    if (p.is_relative()) p = config_dir / p;
    clouds.push_back(read_particles(p, d));
  } else {
    for (std::int64_t eta : etas) clouds.push_back(synthetic_cloud(static_cast<int>(eta), d, charges, seed));
  }

  CommandResult out;
  Csv csv({"eta", "direct_value", "bh_value", "rel_err", "target", "within_target", "order", "work_direct",
           "work_bh"});
  Csv timing({"eta", "t_direct", "t_bh"});
  Json rows = Json::array();
  bool ok = true;
  std::vector<double> eta_axis;
  std::vector<double> work_axis;
  for (const Cloud& c : clouds) {
    const std::size_t eta = c.q.size();
    Stopwatch direct_clock;
    const double direct = modified_coulomb_direct(c.x, c.q, d, delta);
    const double t_direct = direct_clock.seconds();
    Stopwatch bh_clock;
    const BHTree tree = bh_build(c.x, c.q, d, delta, options);
    BHEvalStats stats;
    const double bh = tree.total_energy(std::nullopt, &stats);
    const double t_bh = bh_clock.seconds();
    const double rel = direct != 0.0 ? std::abs(bh - direct) / std::abs(direct) : std::abs(bh - direct);
    const double target =
        fixed_target ? *fixed_target
                     : (direct != 0.0 ? regularization_gap(c, d, delta) / std::abs(direct) : 0.0);
    const bool within = rel <= target;
    ok = ok && within;
    const auto work_direct = static_cast<std::uint64_t>(eta * (eta - 1) / 2);
    csv.row(static_cast<unsigned long long>(eta), direct, bh, rel, target, within, tree.order(),
            static_cast<unsigned long long>(work_direct), static_cast<unsigned long long>(stats.work()));
    timing.row(static_cast<unsigned long long>(eta), t_direct, t_bh);
    rows.push_back({{"eta", eta}, {"rel_err", rel}, {"target", target}, {"within_target", within},
                    {"work_bh", stats.work()}, {"degenerate_tree", tree.degenerate()}});
    eta_axis.push_back(static_cast<double>(eta));
    work_axis.push_back(static_cast<double>(std::max<std::uint64_t>(stats.work(), 1)));
  }
  Json summary = {{"command", "potential-bench"},
                  {"d", d},
                  {"delta", delta},
                  {"charges", particles.empty() ? charges : "file"},
                  {"accuracy_target_met", ok},
                  {"rng_seed", seed},
                  {"rows", rows}};
  if (eta_axis.size() >= 2) summary["work_slope"] = loglog_slope(eta_axis, work_axis);
  out.artifacts.add("potential_bench.csv", csv.str());
  out.artifacts.add("summary.json", dump(summary));
  out.sidecars.add("potential_bench_timing.csv", timing.str());
  if (!ok) out.exit_code = kExitRuntime;
  return out;
}

}  // namespace rsqs::cli
