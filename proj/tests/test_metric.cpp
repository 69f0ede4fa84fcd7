#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hflow/curvature.hpp"
#include "hflow/metric.hpp"
#include "hflow/registry.hpp"

using namespace hflow;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST(MetricField, RejectsIndefiniteNodeAndReportsIt) {
  const auto grid = PeriodicGrid<1>::uniform(16, kTwoPi);
  SymTensorField<1> t = SymTensorField<1>::constant(grid, Mat<1>::Constant(1.0));
  t.component(0, 0)[5] = -0.5;
  t.component(0, 0)[9] = -2.0;
  try {
    MetricField<1> g(t);
    FAIL() << "expected NotPositiveDefinite";
  } catch (const NotPositiveDefinite& e) {
    EXPECT_EQ(e.node(), 5u);
    EXPECT_DOUBLE_EQ(e.min_eigenvalue(), -0.5);
  }
}

TEST(MetricField, RejectsOffDiagonalIndefiniteness) {
  const auto grid = PeriodicGrid<2>::uniform(8, 1.0);
  Mat<2> m;
  m << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
  EXPECT_THROW(MetricField<2>::constant(grid, m), NotPositiveDefinite);
}

TEST(MetricField, RejectsNonFiniteEntries) {
  const auto grid = PeriodicGrid<1>::uniform(8, 1.0);
  SymTensorField<1> t = SymTensorField<1>::constant(grid, Mat<1>::Constant(1.0));
  t.component(0, 0)[3] = std::nan("");
  EXPECT_THROW(MetricField<1>{t}, NotPositiveDefinite);
}

TEST(MetricField, LogDetOfConstantMatrix) {
  const auto grid = PeriodicGrid<3>::uniform(8, 1.0);
  Mat<3> m = Mat<3>::Zero();
  m.diagonal() << 2.0, 3.0, 0.5;
  const auto g = MetricField<3>::constant(grid, m);
  const auto ld = log_det(g);
  const auto dt = det(g);
  for (double v : ld.values()) EXPECT_NEAR(v, std::log(3.0), 1e-15);
  for (double v : dt.values()) EXPECT_NEAR(v, 3.0, 1e-15);
}

TEST(PotentialMetric, ValidatesBackground) {
  const auto grid = PeriodicGrid<2>::uniform(8, 1.0);
  Mat<2> asym;
  asym << 1.0, 0.1, 0.2, 1.0;
  EXPECT_THROW(PotentialMetric<2>(asym, ScalarField<2>(grid)), std::invalid_argument);
  Mat<2> indefinite;
  indefinite << 1.0, 0.0, 0.0, -1.0;
  EXPECT_THROW(PotentialMetric<2>(indefinite, ScalarField<2>(grid)), std::invalid_argument);
  ScalarField<2> bad(grid);
  bad[0] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(PotentialMetric<2>(Mat<2>::Identity(), bad), std::invalid_argument);
}

TEST(PotentialMetric, SinMetricMatchesDiscreteClosedForm) {
  const auto inst = make_example<1>("sin1d", {512});
  const auto& g = inst.metric;
  const double h = g.grid().spacing(0);
  const double factor = std::sin(h) * std::sin(h) / (h * h);
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const double x = g.grid().coordinates(n)[0];
    EXPECT_NEAR(g(n, 0, 0), 2.0 + factor * std::sin(x), 1e-11);
    EXPECT_NEAR(g(n, 0, 0), 2.0 + std::sin(x), 6e-5);
  }
}

TEST(PotentialMetric, ConcaveBumpIsRejected) {
  const auto grid = PeriodicGrid<1>::uniform(128, kTwoPi);
  const PotentialMetric<1> pm(Mat<1>::Constant(2.0),
                              ScalarField<1>::sample(grid, [](const auto& x) { return -10.0 * std::sin(x[0]); }));
  EXPECT_THROW(metric_from_potential(pm), NotPositiveDefinite);
}

TEST(PotentialMetric, DiscreteHessianIsExactlyHessian) {
  const auto inst = make_example<2>("bump2d", {64, 64});
  EXPECT_LT(hessian_defect(inst.metric), 1e-13);
  const auto grid = PeriodicGrid<3>({8, 10, 12}, {kTwoPi, kTwoPi, kTwoPi});
  const auto psi = ScalarField<3>::sample(grid, [](const auto& x) {
    return 0.05 * std::sin(x[0] + 2.0 * x[1]) * std::cos(x[2]) + 0.02 * std::cos(x[0] - x[2]);
  });
  EXPECT_LT(hessian_defect(metric_from_potential(PotentialMetric<3>(Mat<3>::Identity(), psi))), 1e-13);
}

TEST(PotentialMetric, TwistMetricIsNotHessian) {
  const auto inst = make_example<2>("twist2d", {128, 128});
  EXPECT_FALSE(inst.potential.has_value());
  const double h = inst.metric.grid().spacing(1);
  // sup |0.3 cos y| times the centred-difference factor.
  EXPECT_NEAR(hessian_defect(inst.metric), 0.3 * std::sin(h) / h, 1e-12);
  EXPECT_NEAR(hessian_defect(inst.metric), 0.3, 1e-3);
}

TEST(Registry, DimensionMismatchAndUnknownNames) {
  EXPECT_THROW(make_example<2>("sin1d", {16, 16}), std::invalid_argument);
  EXPECT_THROW(find_example("nope"), std::invalid_argument);
  EXPECT_NO_THROW(make_example<3>("flat", {8, 8, 8}));
}

TEST(Registry, RoughPotentialIsSeededAndNormalised) {
  const auto a = make_example<1>("rough1d", {512}, 42);
  const auto b = make_example<1>("rough1d", {512}, 42);
  const auto c = make_example<1>("rough1d", {512}, 43);
  EXPECT_EQ(a.metric, b.metric);
  EXPECT_FALSE(a.metric == c.metric);
  EXPECT_NEAR(sup_norm(hessian_stencil(a.potential->psi(), 0, 0)), 0.5, 1e-14);
  double lo = 10.0;
  for (double v : a.metric.component(0, 0).values()) lo = std::min(lo, v);
  EXPECT_GE(lo, 0.5 - 1e-14);
}
