#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hflow/grid.hpp"
#include "hflow/random.hpp"

using namespace hflow;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ScalarField<1> sin_field(std::size_t n) {
  return ScalarField<1>::sample(PeriodicGrid<1>::uniform(n, kTwoPi), [](const auto& x) { return std::sin(x[0]); });
}

template <int Dim>
ScalarField<Dim> random_field(const PeriodicGrid<Dim>& grid, std::uint64_t seed) {
  GaussianStream rng(seed);
  ScalarField<Dim> f(grid);
  for (std::size_t n = 0; n < grid.node_count(); ++n) f[n] = rng.normal();
  return f;
}

}  // namespace

TEST(PeriodicGrid, RejectsTooFewNodes) {
  EXPECT_THROW(PeriodicGrid<1>::uniform(7, 1.0), std::invalid_argument);
  EXPECT_NO_THROW(PeriodicGrid<1>::uniform(8, 1.0));
  EXPECT_THROW(PeriodicGrid<2>({8, 4}, {1.0, 1.0}), std::invalid_argument);
}

TEST(PeriodicGrid, RejectsNonPositivePeriod) {
  EXPECT_THROW(PeriodicGrid<1>::uniform(16, 0.0), std::invalid_argument);
  EXPECT_THROW(PeriodicGrid<1>::uniform(16, -1.0), std::invalid_argument);
}

TEST(PeriodicGrid, RowMajorIndexingRoundTrips) {
  const PeriodicGrid<3> grid({8, 9, 10}, {1.0, 2.0, 3.0});
  EXPECT_EQ(grid.node_count(), 720u);
  EXPECT_EQ(grid.stride(2), 1u);
  EXPECT_EQ(grid.stride(1), 10u);
  EXPECT_EQ(grid.stride(0), 90u);
  for (std::size_t n = 0; n < grid.node_count(); ++n) EXPECT_EQ(grid.node_at(grid.multi_index(n)), n);
}

TEST(PeriodicGrid, NeighboursWrap) {
  const PeriodicGrid<2> grid({8, 8}, {1.0, 1.0});
  const std::size_t corner = grid.node_at({7, 0});
  EXPECT_EQ(grid.neighbor_plus(corner, 0), grid.node_at({0, 0}));
  EXPECT_EQ(grid.neighbor_minus(corner, 1), grid.node_at({7, 7}));
  for (std::size_t n = 0; n < grid.node_count(); ++n)
    for (int a = 0; a < 2; ++a) EXPECT_EQ(grid.neighbor_minus(grid.neighbor_plus(n, a), a), n);
}

TEST(PeriodicGrid, NearestNodeWrapsCoordinates) {
  const auto grid = PeriodicGrid<1>::uniform(16, kTwoPi);
  EXPECT_EQ(grid.nearest_node({0.0}), 0u);
  EXPECT_EQ(grid.nearest_node({kTwoPi}), 0u);
  EXPECT_EQ(grid.nearest_node({-grid.spacing(0)}), 15u);
  EXPECT_EQ(grid.nearest_node({std::numbers::pi / 2.0}), 4u);
}

TEST(Stencils, FirstDifferenceOfSineMatchesClosedForm) {
  const auto f = sin_field(512);
  const double h = f.grid().spacing(0);
  const auto d = partial(f, 0);
  for (std::size_t n = 0; n < f.size(); ++n) {
    const double x = f.grid().coordinates(n)[0];
    EXPECT_NEAR(d[n], std::cos(x) * std::sin(h) / h, 1e-12);
  }
  EXPECT_NEAR(d[0], 0.99997490, 1e-8);
}

TEST(Stencils, SecondDifferenceOfSineMatchesClosedForm) {
  const auto f = sin_field(512);
  const double h = f.grid().spacing(0);
  const auto d2 = partial2(f, 0, 0);
  const double factor = -2.0 * (1.0 - std::cos(h)) / (h * h);
  for (std::size_t n = 0; n < f.size(); ++n) {
    EXPECT_NEAR(d2[n], factor * f[n], 1e-11);
  }
  EXPECT_NEAR(d2[128], -0.99998745, 1e-8);
}

TEST(Stencils, HessianStencilOfSineIsSquaredFirstDifference) {
  const auto f = sin_field(512);
  const double h = f.grid().spacing(0);
  const auto hs = hessian_stencil(f, 0, 0);
  const double factor = -(std::sin(h) / h) * (std::sin(h) / h);
  for (std::size_t n = 0; n < f.size(); ++n) EXPECT_NEAR(hs[n], factor * f[n], 1e-10);
}

TEST(Stencils, CoarseGridSineFactors) {
  // N = 64: sin h / h, the 3-point factor and its squared-first-difference analogue.
  const double h = kTwoPi / 64.0;
  const auto f = sin_field(64);
  EXPECT_NEAR(partial(f, 0)[0], 0.99839439, 1e-8);
  EXPECT_NEAR(partial2(f, 0, 0)[16], -0.99919707, 1e-8);
  EXPECT_NEAR(hessian_stencil(f, 0, 0)[16], -0.99679136, 1e-8);
  EXPECT_NEAR(std::sin(h) / h, 0.99839439, 1e-8);
}

TEST(Stencils, ThirdDerivativeMatchesDirectSummation) {
  const PeriodicGrid<1> grid = PeriodicGrid<1>::uniform(32, kTwoPi);
  const auto f = random_field(grid, 7);
  const double h = grid.spacing(0);
  const auto d3 = partial3(f, 0, 0, 0);
  const std::size_t N = 32;
  for (std::size_t n = 0; n < N; ++n) {
    auto v = [&](long off) { return f[(n + N + static_cast<std::size_t>(off + 2 * static_cast<long>(N))) % N]; };
    const double oracle = (v(2) - 2.0 * v(1) + 2.0 * v(-1) - v(-2)) / (2.0 * h * h * h);
    EXPECT_NEAR(d3[n], oracle, 1e-9 * (1.0 + std::abs(oracle)));
  }
}

TEST(Stencils, MixedPartialsArePermutationInvariant) {
  const PeriodicGrid<3> grid({8, 10, 12}, {1.0, 2.0, 3.0});
  const auto f = random_field(grid, 11);
  EXPECT_EQ(partial2(f, 0, 2), partial2(f, 2, 0));
  EXPECT_EQ(partial3(f, 0, 1, 0), partial3(f, 1, 0, 0));
  EXPECT_EQ(partial3(f, 0, 1, 0), partial3(f, 0, 0, 1));
  EXPECT_EQ(partial3(f, 2, 1, 0), partial3(f, 0, 2, 1));
  EXPECT_EQ(partial4(f, 0, 1, 2, 1), partial4(f, 1, 1, 2, 0));
  EXPECT_EQ(partial4(f, 2, 0, 2, 0), partial4(f, 0, 0, 2, 2));
  EXPECT_EQ(hessian_stencil(f, 0, 2), hessian_stencil(f, 2, 0));
}

TEST(Stencils, InvalidAxisThrows) {
  const auto f = sin_field(16);
  EXPECT_THROW(partial(f, 1), std::out_of_range);
  EXPECT_THROW(partial2(f, 0, -1), std::out_of_range);
  EXPECT_THROW(hessian_stencil(f, 0, 3), std::out_of_range);
}

TEST(Stencils, SecondOrderConvergence) {
  auto err = [](std::size_t n) {
    const PeriodicGrid<2> grid = PeriodicGrid<2>::uniform(n, kTwoPi);
    const auto f = ScalarField<2>::sample(grid, [](const auto& x) { return std::sin(x[0]) * std::cos(2.0 * x[1]); });
    const auto d = partial2(f, 0, 1);
    double e = 0.0;
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
      const auto x = grid.coordinates(k);
      e = std::max(e, std::abs(d[k] + 2.0 * std::cos(x[0]) * std::sin(2.0 * x[1])));
    }
    return e;
  };
  const double ratio = err(32) / err(64);
  EXPECT_GE(ratio, 3.5);
  EXPECT_LE(ratio, 4.5);
}

TEST(Stencils, DifferencesAreLinearAndConservative) {
  const PeriodicGrid<2> grid({16, 12}, {kTwoPi, 3.0});
  const auto f = random_field(grid, 1);
  const auto g = random_field(grid, 2);
  const auto lhs = partial2(2.0 * f + g, 0, 1);
  const auto rhs = 2.0 * partial2(f, 0, 1) + partial2(g, 0, 1);
  for (std::size_t n = 0; n < grid.node_count(); ++n) EXPECT_NEAR(lhs[n], rhs[n], 1e-10);
  EXPECT_NEAR(sum(partial(f, 0)), 0.0, 1e-10);
  EXPECT_NEAR(sum(partial2(f, 1, 1)), 0.0, 1e-9);
  EXPECT_NEAR(sum(partial4(f, 0, 0, 1, 1)), 0.0, 1e-7);
}

TEST(Reductions, MeanVarianceSupOfSine) {
  const auto f = sin_field(64);
  EXPECT_NEAR(mean(f), 0.0, 1e-15);
  EXPECT_NEAR(variance(f), 0.5, 1e-14);
  EXPECT_NEAR(sup_norm(f), 1.0, 1e-15);
}

TEST(ScalarFieldOps, GridMismatchThrows) {
  ScalarField<1> a(PeriodicGrid<1>::uniform(16, 1.0));
  const ScalarField<1> b(PeriodicGrid<1>::uniform(32, 1.0));
  EXPECT_THROW(a += b, std::invalid_argument);
  EXPECT_THROW(ScalarField<1>(PeriodicGrid<1>::uniform(16, 1.0), std::vector<double>(3)), std::invalid_argument);
}

TEST(GaussianStream, DeterministicAndRoughlyStandard) {
  GaussianStream a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.normal(), b.normal());
  GaussianStream rng(3);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}
