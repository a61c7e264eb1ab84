#include <gtest/gtest.h>

#include <set>

#include "rsqs/error.hpp"
#include "rsqs/lattice.hpp"
#include "test_support.hpp"

namespace rsqs {
namespace {

using testing::code_of;

TEST(GridSpec, PointCountIsPowerOfAxisPoints) {
  const GridSpec g1 = make_grid(1, 1, 6);
  EXPECT_EQ(g1.dim(), 1);
  EXPECT_EQ(g1.point_count(), 7u);
  const GridSpec g2 = make_grid(2, 1, 6);
  EXPECT_EQ(g2.dim(), 2);
  EXPECT_EQ(g2.point_count(), 49u);
  const GridSpec g3 = make_grid(2, 3, 6);
  EXPECT_EQ(g3.dim(), 6);
  EXPECT_EQ(g3.point_count(), 117649u);
}

TEST(GridSpec, RejectsBadTruncation) {
  EXPECT_EQ(code_of([] { make_grid(1, 1, 4); }), ErrorCode::kTruncationTooSmall);
  EXPECT_EQ(code_of([] { make_grid(1, 1, 7); }), ErrorCode::kOddTruncation);
  EXPECT_EQ(code_of([] { make_grid(0, 1, 6); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { make_grid(1, 0, 6); }), ErrorCode::kInvalidArgument);
}

TEST(GridSpec, MemoryCap) {
  EXPECT_EQ(code_of([] { make_grid(1, 10, 64); }), ErrorCode::kMemoryCapExceeded);
  EXPECT_EQ(code_of([] { make_grid(1, 2, 6, 48); }), ErrorCode::kMemoryCapExceeded);
  EXPECT_NO_THROW(make_grid(1, 2, 6, 49));
}

TEST(GridSpec, RelaxedMinimumForTransformGrids) {
  EXPECT_EQ(GridSpec::make(1, 1, 2, kDefaultNodeCap, 2).point_count(), 3u);
  EXPECT_EQ(code_of([] { GridSpec::make(1, 1, 0, kDefaultNodeCap, 0); }),
            ErrorCode::kTruncationTooSmall);
}

TEST(GridSpec, FlatIndexRoundTripEnumeratesEveryNodeOnce) {
  const GridSpec g = make_grid(1, 3, 6);
  std::set<std::size_t> seen;
  std::vector<int> idx(3);
  for (std::size_t f = 0; f < g.point_count(); ++f) {
    g.multi_index(f, idx);
    EXPECT_EQ(g.flat_index(idx), f);
    seen.insert(f);
  }
  EXPECT_EQ(seen.size(), 343u);
  EXPECT_EQ(g.stride(2), 1u);
  EXPECT_EQ(g.stride(1), 7u);
  EXPECT_EQ(g.stride(0), 49u);
}

TEST(NodeCoords, ExamplesAndRange) {
  const GridSpec g = make_grid(1, 1, 6);
  EXPECT_EQ(node_coords(g, std::vector<int>{0})[0], 0.0);
  EXPECT_DOUBLE_EQ(node_coords(g, std::vector<int>{3})[0], 3.0 / 7.0);
  EXPECT_EQ(code_of([&] { node_coords(g, std::vector<int>{7}); }), ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(code_of([&] { node_coords(g, std::vector<int>{-1}); }), ErrorCode::kIndexOutOfRange);
}

TEST(NodeCoords, ForEachNodeMatchesNodeCoords) {
  const GridSpec g = make_grid(1, 2, 8);
  std::size_t visits = 0;
  std::vector<int> idx(2);
  std::vector<double> flat_x(2);
  for_each_node(g, [&](std::size_t flat, std::span<const double> x) {
    EXPECT_EQ(flat, visits++);
    g.multi_index(flat, idx);
    const auto expected = node_coords(g, idx);
    node_coords_flat(g, flat, flat_x);
    for (int a = 0; a < 2; ++a) {
      EXPECT_DOUBLE_EQ(x[a], expected[a]);
      EXPECT_DOUBLE_EQ(flat_x[a], expected[a]);
    }
  });
  EXPECT_EQ(visits, g.point_count());
}

TEST(Normalize, Examples) {
  const GridSpec g = make_grid(1, 1, 6);
  WaveFunction ones(g, std::vector<Complex>(7, Complex{1.0, 0.0}), Representation::kPosition);
  const WaveFunction same = normalize_discrete(ones);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_DOUBLE_EQ(same[i].real(), 1.0);

  WaveFunction twos(g, std::vector<Complex>(7, Complex{2.0, 0.0}), Representation::kPosition);
  const WaveFunction halved = normalize_discrete(twos);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_NEAR(halved[i].real(), 1.0, 1e-15);

  WaveFunction zero(g, Representation::kPosition);
  EXPECT_EQ(code_of([&] { normalize_discrete(zero); }), ErrorCode::kZeroState);
}

TEST(Normalize, TargetNormAndIdempotence) {
  const GridSpec g = make_grid(1, 2, 10);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const WaveFunction a = normalize_discrete(testing::random_state(g, seed));
    EXPECT_NEAR(a.norm_squared() / 121.0, 1.0, 1e-10);
    const WaveFunction b = normalize_discrete(a);
    EXPECT_LE(max_abs_difference(a, b), 1e-14);
  }
}

TEST(WaveFunction, RejectsWrongLength) {
  const GridSpec g = make_grid(1, 1, 6);
  EXPECT_EQ(code_of([&] { WaveFunction(g, std::vector<Complex>(6), Representation::kPosition); }),
            ErrorCode::kInvalidArgument);
}

TEST(WaveFunction, DistanceHelpers) {
  const GridSpec g = make_grid(1, 1, 6);
  const WaveFunction a = testing::random_state(g, 1);
  EXPECT_EQ(relative_l2_distance(a, a), 0.0);
  WaveFunction b = a;
  b[3] += Complex{0.0, 0.5};
  EXPECT_NEAR(max_abs_difference(a, b), 0.5, 1e-15);
  EXPECT_NEAR(relative_l2_distance(b, a), 0.5 / a.norm(), 1e-15);
}

}  // namespace
}  // namespace rsqs
