#pragma once

/// @file metric.hpp
/// @brief Riemannian metrics in affine coordinates: general metric fields and
/// the Hessian-metric representation g = A + ∇dψ.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "hflow/grid.hpp"
#include "hflow/tensor.hpp"

namespace hflow {

/// Nodes whose smallest eigenvalue falls below this are rejected.
inline constexpr double kMinEigenvalue = 1e-10;

class NotPositiveDefinite : public std::runtime_error {
 public:
  NotPositiveDefinite(std::size_t node, double min_eigenvalue)
      : std::runtime_error("metric not positive definite at node " + std::to_string(node) +
                           " (min eigenvalue " + std::to_string(min_eigenvalue) + ")"),
        node_(node),
        min_eigenvalue_(min_eigenvalue) {}

  std::size_t node() const { return node_; }
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  std::size_t node_;
  double min_eigenvalue_;
};

/// Throws NotPositiveDefinite on the first node (in index order) whose
/// smallest eigenvalue is below kMinEigenvalue or not finite.
template <int Dim>
void require_positive_definite(const SymTensorField<Dim>& t) {
  for (std::size_t n = 0; n < t.node_count(); ++n) {
    const double lam = min_eigenvalue<Dim>(t.matrix(n));
    if (!(lam >= kMinEigenvalue) || !std::isfinite(lam)) throw NotPositiveDefinite(n, lam);
  }
}

/// Symmetric, nodewise positive-definite metric g_ij. Checked on construction.
template <int Dim>
class MetricField {
 public:
  using Grid = PeriodicGrid<Dim>;

  MetricField() = default;
  explicit MetricField(SymTensorField<Dim> components) : g_(std::move(components)) {
    require_positive_definite(g_);
  }

  static MetricField constant(const Grid& grid, const Mat<Dim>& m) {
    return MetricField(SymTensorField<Dim>::constant(grid, m));
  }

  const Grid& grid() const { return g_.grid(); }
  std::size_t node_count() const { return g_.node_count(); }
  const SymTensorField<Dim>& components() const { return g_; }
  const ScalarField<Dim>& component(int i, int j) const { return g_.component(i, j); }
  double operator()(std::size_t node, int i, int j) const { return g_(node, i, j); }
  Mat<Dim> matrix(std::size_t node) const { return g_.matrix(node); }
  Mat<Dim> inverse(std::size_t node) const { return g_.matrix(node).inverse(); }

  bool operator==(const MetricField&) const = default;

 private:
  SymTensorField<Dim> g_;
};

/// log det g at every node.
template <int Dim>
ScalarField<Dim> log_det(const MetricField<Dim>& g) {
  ScalarField<Dim> out(g.grid());
  for (std::size_t n = 0; n < g.node_count(); ++n) out[n] = std::log(g.matrix(n).determinant());
  return out;
}

template <int Dim>
ScalarField<Dim> det(const MetricField<Dim>& g) {
  ScalarField<Dim> out(g.grid());
  for (std::size_t n = 0; n < g.node_count(); ++n) out[n] = g.matrix(n).determinant();
  return out;
}

/// Hessian metric g = A + ∇dψ with constant background A and periodic ψ;
/// the global potential is ½ xᵀAx + ψ(x).
template <int Dim>
class PotentialMetric {
 public:
  using Grid = PeriodicGrid<Dim>;

  PotentialMetric(const Mat<Dim>& background, ScalarField<Dim> psi)
      : background_(background), psi_(std::move(psi)) {
    if (!background_.isApprox(background_.transpose(), 0.0)) {
      throw std::invalid_argument("potential metric: background matrix is not symmetric");
    }
    if (!(min_eigenvalue<Dim>(background_) > 0.0)) {
      throw std::invalid_argument("potential metric: background matrix is not positive definite");
    }
    if (!psi_.all_finite()) throw std::invalid_argument("potential metric: psi has non-finite values");
  }

  const Grid& grid() const { return psi_.grid(); }
  const Mat<Dim>& background() const { return background_; }
  const ScalarField<Dim>& psi() const { return psi_; }

  /// Same metric family scaled by c: (cA, cψ).
  PotentialMetric scaled(double c) const { return PotentialMetric(c * background_, c * psi_); }

 private:
  Mat<Dim> background_;
  ScalarField<Dim> psi_;
};

/// g_ij = A_ij + D_i D_j ψ with composed first differences (see
/// hessian_stencil). Throws NotPositiveDefinite if the potential is not
/// uniformly convex at grid resolution.
template <int Dim>
MetricField<Dim> metric_from_potential(const PotentialMetric<Dim>& pm) {
  SymTensorField<Dim> g(pm.grid());
  for (int i = 0; i < Dim; ++i) {
    for (int j = i; j < Dim; ++j) {
      ScalarField<Dim> c = hessian_stencil(pm.psi(), i, j);
      for (double& v : c.values()) v += pm.background()(i, j);
      g.component(i, j) = std::move(c);
    }
  }
  return MetricField<Dim>(std::move(g));
}

}  // namespace hflow
