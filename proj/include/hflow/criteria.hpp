#pragma once

/// @file criteria.hpp
/// @brief Existence-window criteria: margins of g₀ − Sβ(g₀) + ∇du ≥ θg₀, the
/// largest feasible S for a fixed gauge, and uniform equivalence of metrics.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "hflow/curvature.hpp"
#include "hflow/metric.hpp"

namespace hflow {

struct Equivalence {
  double lambda = 0.0;  ///< largest λ with λ g₀ ≼ g
  double Lambda = 0.0;  ///< smallest Λ with g ≼ Λ g₀
};

/// Extreme generalized eigenvalues of g with respect to g₀ over all nodes.
template <int Dim>
Equivalence uniform_equivalence(const MetricField<Dim>& g, const MetricField<Dim>& g0) {
  if (!(g.grid() == g0.grid())) throw std::invalid_argument("uniform_equivalence: grids differ");
  Equivalence out{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    double lo, hi;
    if constexpr (Dim == 1) {
      lo = hi = g(n, 0, 0) / g0(n, 0, 0);
    } else {
      Eigen::GeneralizedSelfAdjointEigenSolver<Mat<Dim>> solver(g.matrix(n), g0.matrix(n), Eigen::EigenvaluesOnly);
      lo = solver.eigenvalues()(0);
      hi = solver.eigenvalues()(Dim - 1);
    }
    out.lambda = std::min(out.lambda, lo);
    out.Lambda = std::max(out.Lambda, hi);
  }
  return out;
}

/// min over nodes of λ_min(g₀ + ∇du − θg₀ − S·β(g₀)), with ∇du = partial2(u).
template <int Dim>
double a2_margin(const MetricField<Dim>& g0, double S, const ScalarField<Dim>& u, double theta) {
  const SymTensorField<Dim> b0 = beta(g0);
  double margin = std::numeric_limits<double>::infinity();
  SymTensorField<Dim> hess_u(g0.grid());
  for (int i = 0; i < Dim; ++i)
    for (int j = i; j < Dim; ++j) hess_u.component(i, j) = partial2(u, i, j);
  for (std::size_t n = 0; n < g0.node_count(); ++n) {
    const Mat<Dim> g = g0.matrix(n);
    const Mat<Dim> m = g + hess_u.matrix(n) - theta * g - S * b0.matrix(n);
    margin = std::min(margin, min_eigenvalue<Dim>(m));
  }
  return margin;
}

/// Gauge u in (a2). `zero` is u ≡ 0; `fixed` is a given field; `log_det`
/// tracks S as u = −S·log det g₀, which cancels the β term exactly because
/// ∇d log det g₀ = −β(g₀) with shared stencils.
enum class GaugeKind { zero, fixed, log_det };

template <int Dim>
struct Gauge {
  GaugeKind kind = GaugeKind::zero;
  ScalarField<Dim> u;  ///< only for GaugeKind::fixed

  static Gauge zero() { return {GaugeKind::zero, {}}; }
  static Gauge fixed(ScalarField<Dim> field) { return {GaugeKind::fixed, std::move(field)}; }
  static Gauge log_det() { return {GaugeKind::log_det, {}}; }

  /// The concrete u used at a given S.
  ScalarField<Dim> at(const MetricField<Dim>& g0, double S) const {
    switch (kind) {
      case GaugeKind::fixed: return u;
      case GaugeKind::log_det: return -S * hflow::log_det(g0);
      case GaugeKind::zero: break;
    }
    return ScalarField<Dim>(g0.grid());
  }
};

/// Nodewise pencil M(S) = M0 + S·M1 whose λ_min is the (a2) margin.
template <int Dim>
struct A2Pencil {
  SymTensorField<Dim> m0;
  SymTensorField<Dim> m1;

  Mat<Dim> at(std::size_t node, double S) const { return m0.matrix(node) + S * m1.matrix(node); }

  double margin(double S) const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < m0.node_count(); ++n) m = std::min(m, min_eigenvalue<Dim>(at(n, S)));
    return m;
  }
};

template <int Dim>
A2Pencil<Dim> a2_pencil(const MetricField<Dim>& g0, const Gauge<Dim>& gauge, double theta) {
  const SymTensorField<Dim> b0 = beta(g0);
  A2Pencil<Dim> p{(1.0 - theta) * SymTensorField<Dim>(g0.components()), SymTensorField<Dim>(g0.grid())};
  for (int i = 0; i < Dim; ++i)
    for (int j = i; j < Dim; ++j) p.m1.component(i, j) = -b0.component(i, j);
  if (gauge.kind == GaugeKind::fixed) {
    for (int i = 0; i < Dim; ++i)
      for (int j = i; j < Dim; ++j) p.m0.component(i, j) += partial2(gauge.u, i, j);
  } else if (gauge.kind == GaugeKind::log_det) {
    const ScalarField<Dim> neg_ld = -log_det(g0);
    for (int i = 0; i < Dim; ++i)
      for (int j = i; j < Dim; ++j) p.m1.component(i, j) += partial2(neg_ld, i, j);
  }
  return p;
}

class InfeasibleAtZero : public std::runtime_error {
 public:
  explicit InfeasibleAtZero(double margin)
      : std::runtime_error("(a2) infeasible at S = 0 (margin " + std::to_string(margin) + ")"), margin_(margin) {}
  double margin() const { return margin_; }

 private:
  double margin_;
};

template <int Dim>
struct PencilResult {
  std::optional<double> s_max;  ///< empty when unbounded
  std::size_t witness_node = 0;
  Vec<Dim> witness_direction = Vec<Dim>::Zero();

  bool unbounded() const { return !s_max.has_value(); }
};

inline constexpr double kSMaxTolerance = 1e-9;

/// Largest S with a nonnegative (a2) margin for a fixed gauge and θ. The
/// margin is a pointwise minimum of functions concave in S, so the feasible
/// set is an interval [0, S_max]; it is unbounded iff M1 ≽ 0 at every node.
template <int Dim>
PencilResult<Dim> max_s(const MetricField<Dim>& g0, const Gauge<Dim>& gauge, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("max_s: theta must be positive");
  const A2Pencil<Dim> pencil = a2_pencil(g0, gauge, theta);
  const double m_zero = pencil.margin(0.0);
  if (!(m_zero > 0.0)) throw InfeasibleAtZero(m_zero);

  bool psd = true;
  for (std::size_t n = 0; n < g0.node_count() && psd; ++n) psd = min_eigenvalue<Dim>(pencil.m1.matrix(n)) >= 0.0;
  if (psd) return {};

  double lo = 0.0;
  double hi = 1.0;
  while (pencil.margin(hi) >= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) return {};
  }
  while (hi - lo > kSMaxTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (pencil.margin(mid) >= 0.0) lo = mid;
    else hi = mid;
  }

  PencilResult<Dim> out;
  out.s_max = lo;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < g0.node_count(); ++n) {
    const Mat<Dim> m = pencil.at(n, hi);
    Eigen::SelfAdjointEigenSolver<Mat<Dim>> solver(m);
    if (solver.eigenvalues()(0) < worst) {
      worst = solver.eigenvalues()(0);
      out.witness_node = n;
      out.witness_direction = solver.eigenvectors().col(0);
    }
  }
  return out;
}

template <int Dim>
struct A2Certificate {
  double s = 0.0;
  double theta = 0.0;
  ScalarField<Dim> u;
  double margin = 0.0;
  bool feasible = false;
};

template <int Dim>
A2Certificate<Dim> a2_certificate(const MetricField<Dim>& g0, double S, const Gauge<Dim>& gauge, double theta) {
  A2Certificate<Dim> c{S, theta, gauge.at(g0, S), 0.0, false};
  c.margin = a2_margin(g0, S, c.u, theta);
  c.feasible = c.margin >= 0.0;
  return c;
}

}  // namespace hflow
