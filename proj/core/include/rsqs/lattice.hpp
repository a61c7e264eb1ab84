#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rsqs {

using Complex = std::complex<double>;

inline constexpr std::uint64_t kDefaultNodeCap = std::uint64_t{1} << 27;
inline constexpr int kMinTruncation = 6;

// Periodic hypercubic grid on [0,1)^D with (n+1) uniform nodes per axis.
// Coordinates are flattened particle-major: coordinate (i*d_space + k)
// belongs to particle i, spatial axis k. The last axis varies fastest in
// every flat array.
class GridSpec {
 public:
  // min_n may be lowered (to 2 at least) for transform-only grids; the error
  // bounds and solvers assume the default.
  static GridSpec make(int eta, int d_space, int n, std::uint64_t node_cap = kDefaultNodeCap,
                       int min_n = kMinTruncation);

  int eta() const noexcept { return eta_; }
  int d_space() const noexcept { return d_space_; }
  int dim() const noexcept { return eta_ * d_space_; }
  int n() const noexcept { return n_; }
  int axis_points() const noexcept { return n_ + 1; }
  std::size_t point_count() const noexcept { return point_count_; }
  double spacing() const noexcept { return 1.0 / axis_points(); }

  // Stride of `axis` in the flat layout.
  std::size_t stride(int axis) const;
  std::size_t flat_index(std::span<const int> multi_index) const;
  void multi_index(std::size_t flat, std::span<int> out) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  GridSpec(int eta, int d_space, int n, std::size_t point_count)
      : eta_(eta), d_space_(d_space), n_(n), point_count_(point_count) {}

  int eta_ = 1;
  int d_space_ = 1;
  int n_ = 6;
  std::size_t point_count_ = 7;
};

GridSpec make_grid(int eta, int d_space, int n, std::uint64_t node_cap = kDefaultNodeCap);

// chi_l = l / (n+1) for each component.
std::vector<double> node_coords(const GridSpec& grid, std::span<const int> multi_index);

// Node coordinates of a flat index, written into `out` (size dim()).
void node_coords_flat(const GridSpec& grid, std::size_t flat, std::span<double> out);

// Visits every node in flat order, passing (flat index, coordinates).
template <typename Fn>
void for_each_node(const GridSpec& grid, Fn&& fn) {
  const int dim = grid.dim();
  const double h = grid.spacing();
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  std::vector<double> x(static_cast<std::size_t>(dim), 0.0);
  for (std::size_t flat = 0; flat < grid.point_count(); ++flat) {
    fn(flat, std::span<const double>(x));
    for (int a = dim - 1; a >= 0; --a) {
      if (++idx[a] <= grid.n()) {
        x[a] = idx[a] * h;
        break;
      }
      idx[a] = 0;
      x[a] = 0.0;
    }
  }
}

enum class Representation : std::uint8_t { kPosition = 0, kFrequency = 1 };

// Complex amplitudes over the grid. In the Position representation entry l
// approximates Phi(chi_l); in the Frequency representation entry k is the
// coefficient of exp(2 pi i (k - n/2) x).
class WaveFunction {
 public:
  WaveFunction(const GridSpec& grid, Representation rep);
  WaveFunction(const GridSpec& grid, std::vector<Complex> amplitudes, Representation rep);

  const GridSpec& grid() const noexcept { return grid_; }
  Representation representation() const noexcept { return rep_; }
  void set_representation(Representation rep) noexcept { rep_ = rep; }

  std::span<Complex> amplitudes() noexcept { return amps_; }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  std::size_t size() const noexcept { return amps_.size(); }
  Complex& operator[](std::size_t i) { return amps_[i]; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const;
  double norm() const;

 private:
  GridSpec grid_;
  std::vector<Complex> amps_;
  Representation rep_;
};

// Rescales so that the squared 2-norm equals (n+1)^D, the discrete analog of
// unit L2 norm on [0,1]^D.
WaveFunction normalize_discrete(const WaveFunction& psi);

// ||a - b|| / ||b||.
double relative_l2_distance(const WaveFunction& a, const WaveFunction& b);
double max_abs_difference(const WaveFunction& a, const WaveFunction& b);

}  // namespace rsqs
