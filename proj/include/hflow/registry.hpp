#pragma once

/// @file registry.hpp
/// @brief Named example metrics on periodic charts of period 2π.
///
///   flat     A = I, ψ = 0 (any dimension)
///   sin1d    n = 1, A = (2), ψ = −sin x, so g ≈ 2 + sin x
///   bump2d   n = 2, A = I₂, ψ = 0.1 cos x cos y
///   rough1d  n = 1, A = (1), ψ = c Σ_{k=1}^{N/2−1} k⁻³ (a_k cos kx + b_k sin kx)
///            with a_1, b_1, a_2, ... unit normals from GaussianStream(seed),
///            c chosen so that sup |D_x D_x ψ| = ½ (hence g ≥ ½)
///   twist2d  n = 2, non-Hessian: g₁₁ = 1 + 0.3 sin y, g₂₂ = 1, g₁₂ = 0

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hflow/grid.hpp"
#include "hflow/metric.hpp"
#include "hflow/random.hpp"

namespace hflow {

inline constexpr std::uint64_t kDefaultSeed = 42;

struct ExampleSpec {
  std::string name;
  int dim = 0;  ///< 0 = any dimension
  std::vector<std::size_t> default_sizes;
  std::string parameters;
  std::string doc;
  bool hessian = true;
};

inline const std::vector<ExampleSpec>& example_registry() {
  static const std::vector<ExampleSpec> registry{
      {"flat", 0, {32, 32}, "A=I psi=0", "flat metric g = I; stationary under the flow", true},
      {"sin1d", 1, {512}, "n=1 L=2pi A=(2) psi=-sin(x)", "g = 2 + sin x; converges to the mean 2", true},
      {"bump2d", 2, {128, 128}, "n=2 L=(2pi,2pi) A=I2 psi=0.1*cos(x)*cos(y)",
       "g = I + Hess(0.1 cos x cos y)", true},
      {"rough1d", 1, {512}, "n=1 L=2pi A=(1) psi~sum k^-3 N(0,1) modes, seed=42, sup|psi''|=0.5",
       "low-regularity potential for the curvature smoothing probe", true},
      {"twist2d", 2, {128, 128}, "n=2 L=(2pi,2pi) g11=1+0.3*sin(y) g22=1 g12=0",
       "non-Hessian metric (d_2 g_11 != d_1 g_21)", false},
  };
  return registry;
}

inline const ExampleSpec& find_example(const std::string& name) {
  const auto& reg = example_registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const ExampleSpec& e) { return e.name == name; });
  if (it == reg.end()) throw std::invalid_argument("unknown example '" + name + "'");
  return *it;
}

template <int Dim>
struct ExampleInstance {
  std::string name;
  std::optional<PotentialMetric<Dim>> potential;  ///< empty for non-Hessian examples
  MetricField<Dim> metric;
};

/// Spectral potential with k⁻³ decay and unit-normal coefficients, rescaled
/// so that sup |D_x D_x ψ| = amplitude. Requires the grid period to be 2π.
inline ScalarField<1> rough_potential(const PeriodicGrid<1>& grid, std::uint64_t seed, double amplitude = 0.5) {
  GaussianStream rng(seed);
  ScalarField<1> psi(grid);
  const std::size_t modes = grid.size(0) / 2;
  for (std::size_t k = 1; k < modes; ++k) {
    const double a = rng.normal();
    const double b = rng.normal();
    const double w = std::pow(static_cast<double>(k), -3.0);
    const double kk = static_cast<double>(k);
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
      const double x = grid.coordinates(n)[0];
      psi[n] += w * (a * std::cos(kk * x) + b * std::sin(kk * x));
    }
  }
  const double scale = amplitude / sup_norm(hessian_stencil(psi, 0, 0));
  return scale * psi;
}

template <int Dim>
ExampleInstance<Dim> make_example(const std::string& name, const std::array<std::size_t, Dim>& sizes,
                                  std::uint64_t seed = kDefaultSeed) {
  const ExampleSpec& spec = find_example(name);
  if (spec.dim != 0 && spec.dim != Dim) {
    throw std::invalid_argument("example '" + name + "' is " + std::to_string(spec.dim) + "-dimensional");
  }
  std::array<double, Dim> lengths{};
  lengths.fill(2.0 * std::numbers::pi);
  const PeriodicGrid<Dim> grid(sizes, lengths);

  auto from_potential = [&](const Mat<Dim>& a, ScalarField<Dim> psi) {
    PotentialMetric<Dim> pm(a, std::move(psi));
    MetricField<Dim> g = metric_from_potential(pm);
    return ExampleInstance<Dim>{name, std::move(pm), std::move(g)};
  };

  if (name == "flat") return from_potential(Mat<Dim>::Identity(), ScalarField<Dim>(grid));
  if constexpr (Dim == 1) {
    if (name == "sin1d") {
      return from_potential(Mat<1>::Constant(2.0),
                            ScalarField<1>::sample(grid, [](const auto& x) { return -std::sin(x[0]); }));
    }
    if (name == "rough1d") return from_potential(Mat<1>::Constant(1.0), rough_potential(grid, seed));
  }
  if constexpr (Dim == 2) {
    if (name == "bump2d") {
      return from_potential(Mat<2>::Identity(), ScalarField<2>::sample(grid, [](const auto& x) {
                              return 0.1 * std::cos(x[0]) * std::cos(x[1]);
                            }));
    }
    if (name == "twist2d") {
      SymTensorField<2> g = SymTensorField<2>::constant(grid, Mat<2>::Identity());
      g.component(0, 0) = ScalarField<2>::sample(grid, [](const auto& x) { return 1.0 + 0.3 * std::sin(x[1]); });
      return ExampleInstance<2>{name, std::nullopt, MetricField<2>(std::move(g))};
    }
  }
  throw std::invalid_argument("example '" + name + "' has no constructor for this dimension");
}

}  // namespace hflow
