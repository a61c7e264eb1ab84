#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rsqs {

enum class ExpansionCenter {
  kAuto,       // charge-weighted when all charges share a sign, geometric otherwise
  kGeometric,  // geometric center of the cell
};

struct BHOptions {
  std::optional<int> order;       // default clamp(ceil(ln(d / delta^2)), 1, 8)
  std::optional<double> opening;  // far field when l / D < opening; default 1/(2 sqrt(d))
  ExpansionCenter center = ExpansionCenter::kAuto;
};

struct BHCell {
  std::vector<double> lo;
  double length = 1.0;
  int depth = 0;
  int first_child = -1;  // children are stored contiguously
  int child_count = 0;
  int begin = 0;  // particle range in the tree permutation
  int end = 0;
  double charge = 0.0;
  double abs_charge = 0.0;
  std::vector<double> geometric_center;
  std::vector<double> expansion_center;
  double radius = 0.0;  // max particle distance from expansion_center
  std::vector<double> moments;  // M_alpha = sum_j q_j (c - y_j)^alpha

  bool leaf() const noexcept { return first_child < 0; }
  int count() const noexcept { return end - begin; }
};

struct BHEvalStats {
  std::uint64_t cell_visits = 0;
  std::uint64_t pair_terms = 0;
  std::uint64_t multipole_evals = 0;
  std::uint64_t multipole_terms = 0;

  std::uint64_t work() const noexcept { return cell_visits + pair_terms + multipole_terms; }
  BHEvalStats& operator+=(const BHEvalStats& o) noexcept;
};

// 2^d-ary spatial tree over particles in [0,1]^d for the regularized kernel
// 1/sqrt(r^2 + delta^2). Subdivision stops at <= 1 particle or cell length
// <= delta^2 / d. Each cell carries Cartesian Taylor moments up to order().
// Immutable after build; evaluations are thread-safe.
class BHTree {
 public:
  static BHTree build(std::span<const double> positions, std::span<const double> charges, int d,
                      double delta, const BHOptions& options = {});

  int dim() const noexcept { return dim_; }
  double delta() const noexcept { return delta_; }
  double leaf_size() const noexcept { return leaf_size_; }
  int order() const noexcept { return order_; }
  double opening() const noexcept { return opening_; }
  bool degenerate() const noexcept { return degenerate_; }
  std::size_t particle_count() const noexcept { return charges_.size(); }
  int height() const noexcept { return height_; }
  const std::vector<BHCell>& cells() const noexcept { return cells_; }
  // Index of the leaf cell that holds particle i.
  int leaf_of(std::size_t i) const { return leaf_of_[i]; }
  std::span<const int> cell_particles(int cell) const;

  // q_i sum_{j != i} q_j K(r_ij). Particles sharing a size-limited leaf with
  // i interact as if placed at the leaf center (q_i q_j / delta).
  double eval_particle(std::size_t i, std::optional<int> p = std::nullopt,
                       BHEvalStats* stats = nullptr) const;
  // sum_j q_j K(point - r_j).
  double eval_point(std::span<const double> point, std::optional<int> p = std::nullopt,
                    BHEvalStats* stats = nullptr) const;
  // 1/2 sum_i eval_particle(i).
  double total_energy(std::optional<int> p = std::nullopt, BHEvalStats* stats = nullptr) const;

  // Order-p expansion of cell `c` evaluated at `point` (no descent).
  double multipole_potential(int c, std::span<const double> point, int p) const;
  // Exact sum_j q_j K(point - r_j) over the particles of cell `c`.
  double direct_cell_potential(int c, std::span<const double> point) const;
  // Q / (D - r) (r / D)^{p+1}, D = |point - expansion center|, r = radius.
  double far_field_error_bound(int c, std::span<const double> point, int p) const;
  // Same bound with D measured from the geometric center and r = l sqrt(d) / 2.
  double geometric_error_bound(int c, std::span<const double> point, int p) const;
  bool is_far(int c, std::span<const double> point) const;

 private:
  struct MultiIndexTable {
    int max_order = 0;
    std::vector<std::vector<int>> exps;  // graded order
    std::vector<int> total;
    std::vector<int> minus_one;  // [alpha * d + j] -> index of alpha - e_j or -1
    std::vector<int> minus_two;  // [alpha * d + j] -> index of alpha - 2 e_j or -1
    std::vector<int> count_upto;  // number of multi-indices with |alpha| <= p
  };

  BHTree() = default;
  void fill_cell(int index, std::vector<double> lo, double length, int depth, int begin, int end);
  void finish_cell(int c);
  double eval_impl(std::span<const double> point, long target, int p, BHEvalStats* stats) const;
  void visit(int c, std::span<const double> point, long target, int p, double& acc,
             BHEvalStats* stats) const;
  double kernel(std::span<const double> a, std::span<const double> b) const;
  std::span<const double> position(int j) const;

  int dim_ = 1;
  double delta_ = 0.1;
  double leaf_size_ = 0.0;
  int order_ = 1;
  double opening_ = 0.5;
  bool degenerate_ = false;
  int height_ = 0;
  ExpansionCenter center_mode_ = ExpansionCenter::kAuto;
  bool uniform_sign_ = true;
  std::vector<double> positions_;
  std::vector<double> charges_;
  std::vector<int> order_perm_;
  std::vector<int> leaf_of_;
  std::vector<BHCell> cells_;
  MultiIndexTable table_;
};

BHTree bh_build(std::span<const double> positions, std::span<const double> charges, int d,
                double delta, const BHOptions& options = {});
double bh_eval(const BHTree& tree, std::size_t target, std::optional<int> p = std::nullopt,
               BHEvalStats* stats = nullptr);
double bh_eval(const BHTree& tree, std::span<const double> point,
               std::optional<int> p = std::nullopt, BHEvalStats* stats = nullptr);

// Default multipole order clamp(ceil(ln(d / delta^2)), 1, 8).
int default_multipole_order(int d, double delta);

}  // namespace rsqs
