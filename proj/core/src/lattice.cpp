#include "rsqs/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rsqs/error.hpp"

namespace rsqs {

GridSpec GridSpec::make(int eta, int d_space, int n, std::uint64_t node_cap, int min_n) {
  if (eta < 1 || d_space < 1) {
    fail(ErrorCode::kInvalidArgument, "eta and d_space must be >= 1");
  }
  if (n % 2 != 0) fail(ErrorCode::kOddTruncation, "n = " + std::to_string(n) + " is odd");
  if (n < std::max(min_n, 2)) {
    fail(ErrorCode::kTruncationTooSmall,
         "n = " + std::to_string(n) + " < " + std::to_string(std::max(min_n, 2)));
  }
  const int dim = eta * d_space;
  std::uint64_t count = 1;
  for (int a = 0; a < dim; ++a) {
    if (count > node_cap / static_cast<std::uint64_t>(n + 1)) {
      fail(ErrorCode::kMemoryCapExceeded,
           "(n+1)^D exceeds node cap " + std::to_string(node_cap));
    }
    count *= static_cast<std::uint64_t>(n + 1);
  }
  if (count > node_cap) {
    fail(ErrorCode::kMemoryCapExceeded, "(n+1)^D exceeds node cap " + std::to_string(node_cap));
  }
  return GridSpec(eta, d_space, n, static_cast<std::size_t>(count));
}

std::size_t GridSpec::stride(int axis) const {
  if (axis < 0 || axis >= dim()) fail(ErrorCode::kIndexOutOfRange, "axis out of range");
  std::size_t s = 1;
  for (int a = dim() - 1; a > axis; --a) s *= static_cast<std::size_t>(axis_points());
  return s;
}

std::size_t GridSpec::flat_index(std::span<const int> multi_index) const {
  if (multi_index.size() != static_cast<std::size_t>(dim())) {
    fail(ErrorCode::kIndexOutOfRange, "multi-index has wrong length");
  }
  std::size_t flat = 0;
  for (int l : multi_index) {
    if (l < 0 || l > n_) fail(ErrorCode::kIndexOutOfRange, "index component outside [0, n]");
    flat = flat * static_cast<std::size_t>(axis_points()) + static_cast<std::size_t>(l);
  }
  return flat;
}

void GridSpec::multi_index(std::size_t flat, std::span<int> out) const {
  if (out.size() != static_cast<std::size_t>(dim()) || flat >= point_count_) {
    fail(ErrorCode::kIndexOutOfRange, "flat index out of range");
  }
  const auto m = static_cast<std::size_t>(axis_points());
  for (int a = dim() - 1; a >= 0; --a) {
    out[a] = static_cast<int>(flat % m);
    flat /= m;
  }
}

GridSpec make_grid(int eta, int d_space, int n, std::uint64_t node_cap) {
  return GridSpec::make(eta, d_space, n, node_cap);
}

std::vector<double> node_coords(const GridSpec& grid, std::span<const int> multi_index) {
  if (multi_index.size() != static_cast<std::size_t>(grid.dim())) {
    fail(ErrorCode::kIndexOutOfRange, "multi-index has wrong length");
  }
  std::vector<double> x;
  x.reserve(multi_index.size());
  for (int l : multi_index) {
    if (l < 0 || l > grid.n()) {
      fail(ErrorCode::kIndexOutOfRange, "index " + std::to_string(l) + " outside [0, n]");
    }
    x.push_back(static_cast<double>(l) / grid.axis_points());
  }
  return x;
}

void node_coords_flat(const GridSpec& grid, std::size_t flat, std::span<double> out) {
  if (flat >= grid.point_count() || out.size() != static_cast<std::size_t>(grid.dim())) {
    fail(ErrorCode::kIndexOutOfRange, "flat index out of range");
  }
  const auto m = static_cast<std::size_t>(grid.axis_points());
  for (int a = grid.dim() - 1; a >= 0; --a) {
    out[a] = static_cast<double>(flat % m) / static_cast<double>(m);
    flat /= m;
  }
}

WaveFunction::WaveFunction(const GridSpec& grid, Representation rep)
    : grid_(grid), amps_(grid.point_count(), Complex{0.0, 0.0}), rep_(rep) {}

WaveFunction::WaveFunction(const GridSpec& grid, std::vector<Complex> amplitudes,
                           Representation rep)
    : grid_(grid), amps_(std::move(amplitudes)), rep_(rep) {
  if (amps_.size() != grid_.point_count()) {
    fail(ErrorCode::kInvalidArgument, "amplitude count does not match (n+1)^D");
  }
}

double WaveFunction::norm_squared() const {
  double s = 0.0;
  for (const Complex& a : amps_) s += std::norm(a);
  return s;
}

double WaveFunction::norm() const { return std::sqrt(norm_squared()); }

WaveFunction normalize_discrete(const WaveFunction& psi) {
  const double nrm2 = psi.norm_squared();
  if (!(nrm2 > 0.0) || !std::isfinite(nrm2)) {
    fail(ErrorCode::kZeroState, "cannot normalize a zero or non-finite state");
  }
  const double target = static_cast<double>(psi.grid().point_count());
  const double scale = std::sqrt(target / nrm2);
  WaveFunction out = psi;
  if (scale != 1.0) {
    for (Complex& a : out.amplitudes()) a *= scale;
  }
  return out;
}

double relative_l2_distance(const WaveFunction& a, const WaveFunction& b) {
  if (a.size() != b.size()) fail(ErrorCode::kInvalidArgument, "size mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

double max_abs_difference(const WaveFunction& a, const WaveFunction& b) {
  if (a.size() != b.size()) fail(ErrorCode::kInvalidArgument, "size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace rsqs
