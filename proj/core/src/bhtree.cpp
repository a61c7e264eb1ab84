#include "rsqs/bhtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "rsqs/error.hpp"

namespace rsqs {

BHEvalStats& BHEvalStats::operator+=(const BHEvalStats& o) noexcept {
  cell_visits += o.cell_visits;
  pair_terms += o.pair_terms;
  multipole_evals += o.multipole_evals;
  multipole_terms += o.multipole_terms;
  return *this;
}

int default_multipole_order(int d, double delta) {
  const double raw = std::ceil(std::log(static_cast<double>(d) / (delta * delta)));
  return static_cast<int>(std::clamp(raw, 1.0, 8.0));
}

namespace {

constexpr int kMaxOrder = 16;

double distance_sq(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

}  // namespace

BHTree BHTree::build(std::span<const double> positions, std::span<const double> charges, int d,
                     double delta, const BHOptions& options) {
  if (d < 1) fail(ErrorCode::kInvalidArgument, "bh_build: d must be >= 1");
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    fail(ErrorCode::kInvalidArgument, "bh_build: delta must be positive");
  }
  const std::size_t eta = charges.size();
  if (eta < 1) fail(ErrorCode::kInvalidArgument, "bh_build: need at least one particle");
  if (positions.size() != eta * static_cast<std::size_t>(d)) {
    fail(ErrorCode::kInvalidArgument, "bh_build: positions must hold eta * d coordinates");
  }
  for (double x : positions) {
    if (!(x >= 0.0 && x <= 1.0)) {
      fail(ErrorCode::kInvalidArgument, "bh_build: positions must lie in [0,1]^d");
    }
  }
  for (double q : charges) {
    if (!std::isfinite(q)) fail(ErrorCode::kNonFinite, "bh_build: non-finite charge");
  }

  BHTree t;
  t.dim_ = d;
  t.delta_ = delta;
  // D_max = sqrt(d) bounds every in-box distance, so delta / (D_max sqrt(d)).
  t.leaf_size_ = delta * delta / d;
  t.degenerate_ = t.leaf_size_ >= 1.0;
  t.order_ = options.order.value_or(default_multipole_order(d, delta));
  if (t.order_ < 0 || t.order_ > kMaxOrder) {
    fail(ErrorCode::kInvalidArgument, "bh_build: multipole order out of range");
  }
  t.opening_ = options.opening.value_or(0.5 / std::sqrt(static_cast<double>(d)));
  if (!(t.opening_ > 0.0)) fail(ErrorCode::kInvalidArgument, "bh_build: opening must be > 0");
  t.center_mode_ = options.center;
  t.positions_.assign(positions.begin(), positions.end());
  t.charges_.assign(charges.begin(), charges.end());
  const bool any_pos = std::any_of(charges.begin(), charges.end(), [](double q) { return q > 0; });
  const bool any_neg = std::any_of(charges.begin(), charges.end(), [](double q) { return q < 0; });
  t.uniform_sign_ = !(any_pos && any_neg);

  // Graded multi-index table up to order_.
  MultiIndexTable& tab = t.table_;
  tab.max_order = t.order_;
  std::map<std::vector<int>, int> lookup;
  std::vector<int> alpha(static_cast<std::size_t>(d), 0);
  tab.count_upto.assign(static_cast<std::size_t>(t.order_) + 1, 0);
  for (int total = 0; total <= t.order_; ++total) {
    // Enumerate compositions of `total` into d parts, lexicographically.
    std::fill(alpha.begin(), alpha.end(), 0);
    alpha[0] = total;
    while (true) {
      lookup.emplace(alpha, static_cast<int>(tab.exps.size()));
      tab.exps.push_back(alpha);
      tab.total.push_back(total);
      if (d == 1) break;
      // Next composition: move one unit right from the last nonzero before the tail.
      int k = d - 2;
      while (k >= 0 && alpha[k] == 0) --k;
      if (k < 0) break;
      alpha[k] -= 1;
      const int tail = alpha[d - 1];
      alpha[d - 1] = 0;
      alpha[k + 1] = tail + 1;
    }
    tab.count_upto[total] = static_cast<int>(tab.exps.size());
  }
  const std::size_t nterms = tab.exps.size();
  tab.minus_one.assign(nterms * d, -1);
  tab.minus_two.assign(nterms * d, -1);
  for (std::size_t a = 0; a < nterms; ++a) {
    std::vector<int> b = tab.exps[a];
    for (int j = 0; j < d; ++j) {
      if (b[j] >= 1) {
        b[j] -= 1;
        tab.minus_one[a * d + j] = lookup.at(b);
        if (b[j] >= 1) {
          b[j] -= 1;
          tab.minus_two[a * d + j] = lookup.at(b);
          b[j] += 1;
        }
        b[j] += 1;
      }
    }
  }

  t.order_perm_.resize(eta);
  for (std::size_t i = 0; i < eta; ++i) t.order_perm_[i] = static_cast<int>(i);
  t.leaf_of_.assign(eta, -1);
  t.cells_.reserve(2 * eta + 1);
  t.cells_.emplace_back();
  t.fill_cell(0, std::vector<double>(static_cast<std::size_t>(d), 0.0), 1.0, 0, 0,
              static_cast<int>(eta));
  for (std::size_t c = 0; c < t.cells_.size(); ++c) t.finish_cell(static_cast<int>(c));
  return t;
}

void BHTree::fill_cell(int index, std::vector<double> lo, double length, int depth, int begin,
                       int end) {
  {
    BHCell& cell = cells_[index];
    cell.lo = lo;
    cell.length = length;
    cell.depth = depth;
    cell.begin = begin;
    cell.end = end;
  }
  height_ = std::max(height_, depth);
  if (end - begin <= 1 || length <= leaf_size_ || degenerate_) {
    for (int k = begin; k < end; ++k) leaf_of_[order_perm_[k]] = index;
    return;
  }

  // Orthant code has bit j set for the upper half along axis j.
  const double half = 0.5 * length;
  const int d = dim_;
  auto orthant = [&](int p) {
    int code = 0;
    for (int j = 0; j < d; ++j) {
      if (positions_[static_cast<std::size_t>(p) * d + j] >= lo[j] + half) code |= 1 << j;
    }
    return code;
  };
  std::stable_sort(order_perm_.begin() + begin, order_perm_.begin() + end,
                   [&](int a, int b) { return orthant(a) < orthant(b); });

  struct Pending {
    std::vector<double> lo;
    int begin;
    int end;
  };
  std::vector<Pending> pending;
  for (int k = begin; k < end;) {
    const int code = orthant(order_perm_[k]);
    int next = k;
    while (next < end && orthant(order_perm_[next]) == code) ++next;
    std::vector<double> child_lo = lo;
    for (int j = 0; j < d; ++j) {
      if (code & (1 << j)) child_lo[j] += half;
    }
    pending.push_back({std::move(child_lo), k, next});
    k = next;
  }
  // Non-empty children occupy consecutive slots.
  const int first = static_cast<int>(cells_.size());
  cells_[index].first_child = first;
  cells_[index].child_count = static_cast<int>(pending.size());
  cells_.resize(cells_.size() + pending.size());
  for (std::size_t c = 0; c < pending.size(); ++c) {
    fill_cell(first + static_cast<int>(c), std::move(pending[c].lo), half, depth + 1,
              pending[c].begin, pending[c].end);
  }
}

void BHTree::finish_cell(int c) {
  BHCell& cell = cells_[c];
  const int d = dim_;
  cell.geometric_center.assign(static_cast<std::size_t>(d), 0.0);
  for (int j = 0; j < d; ++j) cell.geometric_center[j] = cell.lo[j] + 0.5 * cell.length;
  cell.charge = 0.0;
  cell.abs_charge = 0.0;
  std::vector<double> weighted(static_cast<std::size_t>(d), 0.0);
  for (int k = cell.begin; k < cell.end; ++k) {
    const int p = order_perm_[k];
    const double q = charges_[p];
    cell.charge += q;
    cell.abs_charge += std::abs(q);
    for (int j = 0; j < d; ++j) weighted[j] += std::abs(q) * positions_[static_cast<std::size_t>(p) * d + j];
  }
  const bool use_charge_center =
      center_mode_ == ExpansionCenter::kAuto && uniform_sign_ && cell.abs_charge > 0.0;
  if (use_charge_center) {
    cell.expansion_center.resize(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) cell.expansion_center[j] = weighted[j] / cell.abs_charge;
  } else {
    cell.expansion_center = cell.geometric_center;
  }
  cell.radius = 0.0;
  for (int k = cell.begin; k < cell.end; ++k) {
    cell.radius = std::max(cell.radius,
                           std::sqrt(distance_sq(position(order_perm_[k]), cell.expansion_center)));
  }
  if (cell.leaf()) return;  // leaves are never expanded
  const std::size_t nterms = table_.exps.size();
  cell.moments.assign(nterms, 0.0);
  std::vector<double> s(static_cast<std::size_t>(d));
  std::vector<double> mono(nterms);
  for (int k = cell.begin; k < cell.end; ++k) {
    const int p = order_perm_[k];
    for (int j = 0; j < d; ++j) s[j] = cell.expansion_center[j] - positions_[static_cast<std::size_t>(p) * d + j];
    // Monomials s^alpha built from a predecessor alpha - e_j.
    mono[0] = 1.0;
    for (std::size_t a = 1; a < nterms; ++a) {
      int j = 0;
      while (table_.minus_one[a * d + j] < 0) ++j;
      mono[a] = mono[table_.minus_one[a * d + j]] * s[j];
    }
    const double q = charges_[p];
    for (std::size_t a = 0; a < nterms; ++a) cell.moments[a] += q * mono[a];
  }
}

std::span<const double> BHTree::position(int j) const {
  return {positions_.data() + static_cast<std::size_t>(j) * dim_, static_cast<std::size_t>(dim_)};
}

std::span<const int> BHTree::cell_particles(int c) const {
  const BHCell& cell = cells_.at(static_cast<std::size_t>(c));
  return {order_perm_.data() + cell.begin, static_cast<std::size_t>(cell.count())};
}

double BHTree::kernel(std::span<const double> a, std::span<const double> b) const {
  return 1.0 / std::sqrt(distance_sq(a, b) + delta_ * delta_);
}

bool BHTree::is_far(int c, std::span<const double> point) const {
  const BHCell& cell = cells_[c];
  const double dist = std::sqrt(distance_sq(point, cell.geometric_center));
  return dist > 0.0 && cell.length / dist < opening_;
}

double BHTree::multipole_potential(int c, std::span<const double> point, int p) const {
  const BHCell& cell = cells_.at(static_cast<std::size_t>(c));
  if (cell.leaf()) return direct_cell_potential(c, point);
  if (p < 0 || p > order_) fail(ErrorCode::kInvalidArgument, "bh: order exceeds stored moments");
  const int d = dim_;
  std::vector<double> rr(static_cast<std::size_t>(d));
  double rho = delta_ * delta_;
  for (int j = 0; j < d; ++j) {
    rr[j] = point[j] - cell.expansion_center[j];
    rho += rr[j] * rr[j];
  }
  // Taylor coefficients a_alpha = d^alpha K / alpha! of K(R) = (|R|^2 + delta^2)^{-1/2}:
  // |a| rho a_alpha + (2|a| - 1) sum_j R_j a_{alpha-e_j} + (|a| - 1) sum_j a_{alpha-2e_j} = 0.
  const int nterms = table_.count_upto[p];
  thread_local std::vector<double> coef;
  coef.resize(static_cast<std::size_t>(nterms));
  coef[0] = 1.0 / std::sqrt(rho);
  double sum = coef[0] * cell.moments[0];
  for (int a = 1; a < nterms; ++a) {
    const int order = table_.total[a];
    double s1 = 0.0;
    double s2 = 0.0;
    for (int j = 0; j < d; ++j) {
      const int m1 = table_.minus_one[static_cast<std::size_t>(a) * d + j];
      if (m1 >= 0) s1 += rr[j] * coef[m1];
      const int m2 = table_.minus_two[static_cast<std::size_t>(a) * d + j];
      if (m2 >= 0) s2 += coef[m2];
    }
    coef[a] = -((2 * order - 1) * s1 + (order - 1) * s2) / (order * rho);
    sum += coef[a] * cell.moments[a];
  }
  return sum;
}

double BHTree::direct_cell_potential(int c, std::span<const double> point) const {
  double sum = 0.0;
  for (int j : cell_particles(c)) sum += charges_[j] * kernel(point, position(j));
  return sum;
}

double BHTree::far_field_error_bound(int c, std::span<const double> point, int p) const {
  const BHCell& cell = cells_.at(static_cast<std::size_t>(c));
  const double dist = std::sqrt(distance_sq(point, cell.expansion_center));
  if (dist <= cell.radius) return std::numeric_limits<double>::infinity();
  return cell.abs_charge / (dist - cell.radius) * std::pow(cell.radius / dist, p + 1);
}

double BHTree::geometric_error_bound(int c, std::span<const double> point, int p) const {
  const BHCell& cell = cells_.at(static_cast<std::size_t>(c));
  const double dist = std::sqrt(distance_sq(point, cell.geometric_center));
  const double r = 0.5 * cell.length * std::sqrt(static_cast<double>(dim_));
  if (dist <= r) return std::numeric_limits<double>::infinity();
  return cell.abs_charge / (dist - r) * std::pow(r / dist, p + 1);
}

void BHTree::visit(int c, std::span<const double> point, long target, int p, double& acc,
                   BHEvalStats* stats) const {
  const BHCell& cell = cells_[c];
  if (stats) ++stats->cell_visits;
  if (cell.leaf()) {
    // Co-leaf partners of a target in a size-limited leaf sit at the leaf center.
    const bool snapped = target >= 0 && !degenerate_ && cell.count() > 1 && leaf_of_[target] == c;
    for (int k = cell.begin; k < cell.end; ++k) {
      const int j = order_perm_[k];
      if (j == target) continue;
      acc += snapped ? charges_[j] / delta_ : charges_[j] * kernel(point, position(j));
      if (stats) ++stats->pair_terms;
    }
    return;
  }
  if (is_far(c, point)) {
    acc += multipole_potential(c, point, p);
    if (stats) {
      ++stats->multipole_evals;
      stats->multipole_terms += static_cast<std::uint64_t>(table_.count_upto[p]);
    }
    return;
  }
  for (int k = 0; k < cell.child_count; ++k) visit(cell.first_child + k, point, target, p, acc, stats);
}

double BHTree::eval_impl(std::span<const double> point, long target, int p,
                         BHEvalStats* stats) const {
  if (p < 0 || p > order_) {
    fail(ErrorCode::kInvalidArgument,
         "bh_eval: order " + std::to_string(p) + " exceeds built order " + std::to_string(order_));
  }
  double acc = 0.0;
  visit(0, point, target, p, acc, stats);
  return acc;
}

double BHTree::eval_particle(std::size_t i, std::optional<int> p, BHEvalStats* stats) const {
  if (i >= charges_.size()) fail(ErrorCode::kIndexOutOfRange, "bh_eval: target index out of range");
  return charges_[i] * eval_impl(position(static_cast<int>(i)), static_cast<long>(i),
                                 p.value_or(order_), stats);
}

double BHTree::eval_point(std::span<const double> point, std::optional<int> p,
                          BHEvalStats* stats) const {
  if (point.size() != static_cast<std::size_t>(dim_)) {
    fail(ErrorCode::kInvalidArgument, "bh_eval: point dimension mismatch");
  }
  return eval_impl(point, -1, p.value_or(order_), stats);
}

double BHTree::total_energy(std::optional<int> p, BHEvalStats* stats) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < charges_.size(); ++i) sum += eval_particle(i, p, stats);
  return 0.5 * sum;
}

BHTree bh_build(std::span<const double> positions, std::span<const double> charges, int d,
                double delta, const BHOptions& options) {
  return BHTree::build(positions, charges, d, delta, options);
}

double bh_eval(const BHTree& tree, std::size_t target, std::optional<int> p, BHEvalStats* stats) {
  return tree.eval_particle(target, p, stats);
}

double bh_eval(const BHTree& tree, std::span<const double> point, std::optional<int> p,
               BHEvalStats* stats) {
  return tree.eval_point(point, p, stats);
}

}  // namespace rsqs
