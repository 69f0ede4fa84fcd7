#pragma once

/// @file curvature.hpp
/// @brief Difference tensor, Koszul forms, Hessian curvature, Riemann tensor
/// (two routes), and the pullback torsion and Kähler curvature of the
/// Hermitian metric g^T on the tangent bundle.
///
/// Tangent-bundle quantities are evaluated on the base chart: g^T has
/// components g_ij ∘ π, constant along fibers, and a holomorphic derivative
/// of a base function is ∂/∂z^i f = ½ ∂f/∂x^i. That factor ½ is the only
/// convention entering pullback_chern_torsion and kahler_curvature_pullback.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "hflow/grid.hpp"
#include "hflow/metric.hpp"
#include "hflow/tensor.hpp"

namespace hflow {

template <int Dim>
std::vector<Mat<Dim>> inverse_metric(const MetricField<Dim>& g) {
  std::vector<Mat<Dim>> out(g.node_count());
  for (std::size_t n = 0; n < g.node_count(); ++n) out[n] = g.inverse(n);
  return out;
}

/// First derivatives ∂_k g_ij of every stored metric component.
template <int Dim>
class MetricGradient {
 public:
  explicit MetricGradient(const SymTensorField<Dim>& g) {
    for (int c = 0; c < kSymCount<Dim>; ++c)
      for (int k = 0; k < Dim; ++k) d_[c][k] = partial(g.stored(c), k);
  }

  /// ∂_k g_ij at node.
  double operator()(std::size_t node, int i, int j, int k) const { return d_[sym_index<Dim>(i, j)][k][node]; }

 private:
  std::array<std::array<ScalarField<Dim>, Dim>, kSymCount<Dim>> d_;
};

/// Second derivatives ∂_k ∂_l g_ij via partial2.
template <int Dim>
class MetricSecondDerivatives {
 public:
  explicit MetricSecondDerivatives(const SymTensorField<Dim>& g) {
    for (int c = 0; c < kSymCount<Dim>; ++c)
      for (int k = 0; k < Dim; ++k)
        for (int l = k; l < Dim; ++l) d_[c][sym_index<Dim>(k, l)] = partial2(g.stored(c), k, l);
  }

  double operator()(std::size_t node, int i, int j, int k, int l) const {
    return d_[sym_index<Dim>(i, j)][sym_index<Dim>(k, l)][node];
  }

 private:
  std::array<std::array<ScalarField<Dim>, kSymCount<Dim>>, kSymCount<Dim>> d_;
};

/// sup over nodes and (i, j, k) of |∂_k g_ij − ∂_i g_kj|; vanishes iff g is Hessian.
template <int Dim>
double hessian_defect(const MetricField<Dim>& g) {
  const MetricGradient<Dim> dg(g.components());
  double m = 0.0;
  for (std::size_t n = 0; n < g.node_count(); ++n)
    for (int i = 0; i < Dim; ++i)
      for (int j = 0; j < Dim; ++j)
        for (int k = 0; k < Dim; ++k) m = std::max(m, std::abs(dg(n, i, j, k) - dg(n, k, j, i)));
  return m;
}

template <int Dim>
struct DifferenceTensor {
  TensorField<Dim, 3> mixed;  ///< γ^i_jk, symmetric in (j, k)
  TensorField<Dim, 3> lower;  ///< γ_ijk = g_il γ^l_jk
};

/// γ^i_jk = ½ g^{il}(∂_j g_lk + ∂_k g_lj − ∂_l g_jk): in affine coordinates the
/// difference tensor ∇̂ − ∇ has the Christoffel symbols as components.
template <int Dim>
DifferenceTensor<Dim> christoffel(const MetricField<Dim>& g) {
  const MetricGradient<Dim> dg(g.components());
  DifferenceTensor<Dim> out{TensorField<Dim, 3>(g.grid()), TensorField<Dim, 3>(g.grid())};
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const Mat<Dim> gm = g.matrix(n);
    const Mat<Dim> gi = gm.inverse();
    for (int j = 0; j < Dim; ++j) {
      for (int k = j; k < Dim; ++k) {
        Vec<Dim> first_kind;
        for (int l = 0; l < Dim; ++l)
          first_kind(l) = 0.5 * (dg(n, l, k, j) + dg(n, l, j, k) - dg(n, j, k, l));
        const Vec<Dim> up = gi * first_kind;
        for (int i = 0; i < Dim; ++i) out.mixed(n, i, j, k) = out.mixed(n, i, k, j) = up(i);
      }
    }
    for (int i = 0; i < Dim; ++i)
      for (int j = 0; j < Dim; ++j)
        for (int k = 0; k < Dim; ++k) {
          double s = 0.0;
          for (int l = 0; l < Dim; ++l) s += gm(i, l) * out.mixed(n, l, j, k);
          out.lower(n, i, j, k) = s;
        }
  }
  return out;
}

/// Trace γ^k_ki, the difference-tensor route to the first Koszul form.
template <int Dim>
CovectorField<Dim> gamma_trace(const DifferenceTensor<Dim>& gamma) {
  CovectorField<Dim> out(gamma.mixed.grid());
  for (std::size_t n = 0; n < out.node_count(); ++n)
    for (int i = 0; i < Dim; ++i) {
      double s = 0.0;
      for (int k = 0; k < Dim; ++k) s += gamma.mixed(n, k, k, i);
      out(n, i) = s;
    }
  return out;
}

template <int Dim>
struct KoszulForms {
  CovectorField<Dim> alpha;    ///< ½ ∂_i log det g
  SymTensorField<Dim> kappa;   ///< ½ ∂_i ∂_j log det g
  SymTensorField<Dim> beta;    ///< −∂_i ∂_j log det g
};

/// β_ij = −∂_i∂_j log det g, the right-hand side of the flow.
template <int Dim>
SymTensorField<Dim> beta(const MetricField<Dim>& g) {
  const ScalarField<Dim> ld = log_det(g);
  SymTensorField<Dim> out(g.grid());
  for (int i = 0; i < Dim; ++i)
    for (int j = i; j < Dim; ++j) out.component(i, j) = -partial2(ld, i, j);
  return out;
}

/// First and second Koszul forms and β, all from one log det field so that
/// κ = −β/2 holds bit-exactly.
template <int Dim>
KoszulForms<Dim> koszul(const MetricField<Dim>& g) {
  const ScalarField<Dim> ld = log_det(g);
  KoszulForms<Dim> out{CovectorField<Dim>(g.grid()), SymTensorField<Dim>(g.grid()),
                       SymTensorField<Dim>(g.grid())};
  for (int i = 0; i < Dim; ++i) {
    const ScalarField<Dim> d = partial(ld, i);
    for (std::size_t n = 0; n < g.node_count(); ++n) out.alpha(n, i) = 0.5 * d[n];
    for (int j = i; j < Dim; ++j) {
      const ScalarField<Dim> dd = partial2(ld, i, j);
      out.kappa.component(i, j) = 0.5 * dd;
      out.beta.component(i, j) = -dd;
    }
  }
  return out;
}

namespace detail {

/// Sorted axis triples/quadruples of ψ's third and fourth derivatives.
template <int Dim>
class PotentialJets {
 public:
  explicit PotentialJets(const ScalarField<Dim>& psi) {
    for (int a = 0; a < Dim; ++a)
      for (int b = a; b < Dim; ++b)
        for (int c = b; c < Dim; ++c) {
          third_[key(a, b, c)] = partial3(psi, a, b, c);
          for (int d = c; d < Dim; ++d) fourth_[key(a, b, c, d)] = partial4(psi, a, b, c, d);
        }
  }

  const ScalarField<Dim>& third(int a, int b, int c) const { return third_[sorted_key(a, b, c)]; }
  const ScalarField<Dim>& fourth(int a, int b, int c, int d) const { return fourth_[sorted_key(a, b, c, d)]; }

 private:
  static constexpr int kSlots = Dim * Dim * Dim * Dim;
  template <typename... I>
  static int key(I... idx) {
    int f = 0;
    ((f = f * Dim + idx), ...);
    return f;
  }
  template <typename... I>
  static int sorted_key(I... idx) {
    std::array<int, sizeof...(I)> a{idx...};
    std::sort(a.begin(), a.end());
    return std::apply([](auto... v) { return key(v...); }, a);
  }

  std::array<ScalarField<Dim>, kSlots> third_;
  std::array<ScalarField<Dim>, kSlots> fourth_;
};

}  // namespace detail

/// Q_ijkl = ½ ∂⁴φ/∂x^i∂x^j∂x^k∂x^l − ½ g^{pq} ∂³φ/∂x^i∂x^k∂x^p ∂³φ/∂x^j∂x^l∂x^q
/// for φ = ½xᵀAx + ψ. The background contributes nothing above second order.
template <int Dim>
PairSymmetricField<Dim> hessian_curvature(const PotentialMetric<Dim>& pm) {
  const MetricField<Dim> g = metric_from_potential(pm);
  const detail::PotentialJets<Dim> jets(pm.psi());
  PairSymmetricField<Dim> q(pm.grid());
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const Mat<Dim> gi = g.inverse(n);
    for (int i = 0; i < Dim; ++i)
      for (int k = i; k < Dim; ++k)
        for (int j = 0; j < Dim; ++j)
          for (int l = j; l < Dim; ++l) {
            if (sym_index<Dim>(i, k) > sym_index<Dim>(j, l)) continue;
            double quad = 0.0;
            for (int p = 0; p < Dim; ++p)
              for (int r = 0; r < Dim; ++r)
                quad += gi(p, r) * jets.third(i, k, p)[n] * jets.third(j, l, r)[n];
            q(n, i, j, k, l) = 0.5 * jets.fourth(i, j, k, l)[n] - 0.5 * quad;
          }
  }
  return q;
}

/// Every component of the potential formula evaluated independently, with no
/// symmetry assumed. Used to check the symmetries the compact storage relies on.
template <int Dim>
TensorField<Dim, 4> hessian_curvature_dense(const PotentialMetric<Dim>& pm) {
  const MetricField<Dim> g = metric_from_potential(pm);
  const auto& psi = pm.psi();
  TensorField<Dim, 4> q(pm.grid());
  for (int i = 0; i < Dim; ++i)
    for (int j = 0; j < Dim; ++j)
      for (int k = 0; k < Dim; ++k)
        for (int l = 0; l < Dim; ++l) {
          const ScalarField<Dim> f4 = partial4(psi, i, j, k, l);
          std::array<ScalarField<Dim>, Dim> left, right;
          for (int p = 0; p < Dim; ++p) {
            left[p] = partial3(psi, i, k, p);
            right[p] = partial3(psi, j, l, p);
          }
          for (std::size_t n = 0; n < g.node_count(); ++n) {
            const Mat<Dim> gi = g.inverse(n);
            double quad = 0.0;
            for (int p = 0; p < Dim; ++p)
              for (int r = 0; r < Dim; ++r) quad += gi(p, r) * left[p][n] * right[r][n];
            q(n, i, j, k, l) = 0.5 * f4[n] - 0.5 * quad;
          }
        }
  return q;
}

/// Hessian curvature from the metric alone, using φ_ijkl = ∂_k∂_l g_ij and
/// φ_ikp = ∂_k g_ip. Valid for Hessian metrics; this is what the flow
/// diagnostics use, since the evolved state carries no potential.
template <int Dim>
PairSymmetricField<Dim> hessian_curvature(const MetricField<Dim>& g) {
  const MetricGradient<Dim> dg(g.components());
  const MetricSecondDerivatives<Dim> ddg(g.components());
  PairSymmetricField<Dim> q(g.grid());
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const Mat<Dim> gi = g.inverse(n);
    for (int i = 0; i < Dim; ++i)
      for (int k = i; k < Dim; ++k)
        for (int j = 0; j < Dim; ++j)
          for (int l = j; l < Dim; ++l) {
            if (sym_index<Dim>(i, k) > sym_index<Dim>(j, l)) continue;
            double quad = 0.0;
            for (int p = 0; p < Dim; ++p)
              for (int r = 0; r < Dim; ++r) quad += gi(p, r) * dg(n, i, p, k) * dg(n, j, r, l);
            q(n, i, j, k, l) = 0.5 * ddg(n, i, j, k, l) - 0.5 * quad;
          }
  }
  return q;
}

/// R̂_ijkl = g_ia (γ^a_lm γ^m_jk − γ^a_km γ^m_jl).
template <int Dim>
TensorField<Dim, 4> riemann_from_gamma(const MetricField<Dim>& g) {
  const DifferenceTensor<Dim> gamma = christoffel(g);
  TensorField<Dim, 4> r(g.grid());
  for (std::size_t n = 0; n < g.node_count(); ++n)
    for (int i = 0; i < Dim; ++i)
      for (int j = 0; j < Dim; ++j)
        for (int k = 0; k < Dim; ++k)
          for (int l = 0; l < Dim; ++l) {
            double s = 0.0;
            for (int m = 0; m < Dim; ++m)
              s += gamma.lower(n, i, l, m) * gamma.mixed(n, m, j, k) -
                   gamma.lower(n, i, k, m) * gamma.mixed(n, m, j, l);
            r(n, i, j, k, l) = s;
          }
  return r;
}

/// R̂_ijkl = ½ (Q_ijkl − Q_jikl); antisymmetric in (i, j) by construction.
template <int Dim>
TensorField<Dim, 4> riemann_from_q(const PairSymmetricField<Dim>& q) {
  TensorField<Dim, 4> r(q.grid());
  for (std::size_t n = 0; n < q.node_count(); ++n)
    for (int i = 0; i < Dim; ++i)
      for (int j = 0; j < Dim; ++j)
        for (int k = 0; k < Dim; ++k)
          for (int l = 0; l < Dim; ++l) r(n, i, j, k, l) = 0.5 * (q(n, i, j, k, l) - q(n, j, i, k, l));
  return r;
}

/// sup |β_ij + 2 g^{kl} Q_ijkl|: the trace of R^T = −½Q reproducing Ric^T = ¼β.
template <int Dim>
double contraction_identity_defect(const PairSymmetricField<Dim>& q, const MetricField<Dim>& g,
                                   const SymTensorField<Dim>& beta_field) {
  double m = 0.0;
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const Mat<Dim> gi = g.inverse(n);
    for (int i = 0; i < Dim; ++i)
      for (int j = 0; j < Dim; ++j) {
        double tr = 0.0;
        for (int k = 0; k < Dim; ++k)
          for (int l = 0; l < Dim; ++l) tr += gi(k, l) * q(n, i, j, k, l);
        m = std::max(m, std::abs(beta_field(n, i, j) + 2.0 * tr));
      }
  }
  return m;
}

template <int Dim>
struct TorsionResult {
  TensorField<Dim, 3> components;  ///< T^k_ij stored as (k, i, j)
  double norm = 0.0;               ///< sup over nodes of |T|_g
};

/// Chern torsion of g^T in the holomorphic coordinates z = x + i dx:
/// T^k_ij = ½ g^{kl}(∂_i g_jl − ∂_j g_il). Zero iff g is Hessian.
template <int Dim>
TorsionResult<Dim> pullback_chern_torsion(const MetricField<Dim>& g) {
  const MetricGradient<Dim> dg(g.components());
  TorsionResult<Dim> out{TensorField<Dim, 3>(g.grid()), 0.0};
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const Mat<Dim> gm = g.matrix(n);
    const Mat<Dim> gi = gm.inverse();
    for (int i = 0; i < Dim; ++i)
      for (int j = 0; j < Dim; ++j)
        for (int k = 0; k < Dim; ++k) {
          double s = 0.0;
          for (int l = 0; l < Dim; ++l) s += gi(k, l) * (dg(n, j, l, i) - dg(n, i, l, j));
          out.components(n, k, i, j) = 0.5 * s;
        }
    double sq = 0.0;
    for (int k = 0; k < Dim; ++k)
      for (int a = 0; a < Dim; ++a)
        for (int i = 0; i < Dim; ++i)
          for (int b = 0; b < Dim; ++b)
            for (int j = 0; j < Dim; ++j)
              for (int c = 0; c < Dim; ++c)
                sq += gm(k, a) * gi(i, b) * gi(j, c) * out.components(n, k, i, j) * out.components(n, a, b, c);
    out.norm = std::max(out.norm, std::sqrt(std::max(sq, 0.0)));
  }
  return out;
}

/// R^T_{i j̄ k l̄} = −∂_k ∂_l̄ g_ij̄ + g^{pq̄} ∂_k g_iq̄ ∂_l̄ g_pj̄ with every
/// holomorphic derivative of a base function equal to ½ ∂/∂x:
///   R^T_{i j̄ k l̄} = −¼ ∂_k∂_l g_ij + ¼ g^{pq} (∂_k g_ip)(∂_l g_jq).
template <int Dim>
TensorField<Dim, 4> kahler_curvature_pullback(const MetricField<Dim>& g) {
  const MetricGradient<Dim> dg(g.components());
  const MetricSecondDerivatives<Dim> ddg(g.components());
  TensorField<Dim, 4> r(g.grid());
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const Mat<Dim> gi = g.inverse(n);
    for (int i = 0; i < Dim; ++i)
      for (int j = 0; j < Dim; ++j)
        for (int k = 0; k < Dim; ++k)
          for (int l = 0; l < Dim; ++l) {
            double quad = 0.0;
            for (int p = 0; p < Dim; ++p)
              for (int q = 0; q < Dim; ++q) quad += gi(p, q) * dg(n, i, p, k) * dg(n, j, q, l);
            r(n, i, j, k, l) = -0.25 * ddg(n, i, j, k, l) + 0.25 * quad;
          }
  }
  return r;
}

template <int Dim>
TensorField<Dim, 4> kahler_curvature_pullback(const PotentialMetric<Dim>& pm) {
  return kahler_curvature_pullback(metric_from_potential(pm));
}

/// sup |R^T_{i j̄ k l̄} + ½ Q_ijkl|.
template <int Dim>
double kahler_correspondence_defect(const TensorField<Dim, 4>& rt, const PairSymmetricField<Dim>& q) {
  double m = 0.0;
  for (std::size_t n = 0; n < q.node_count(); ++n)
    for (int i = 0; i < Dim; ++i)
      for (int j = 0; j < Dim; ++j)
        for (int k = 0; k < Dim; ++k)
          for (int l = 0; l < Dim; ++l) m = std::max(m, std::abs(rt(n, i, j, k, l) + 0.5 * q(n, i, j, k, l)));
  return m;
}

/// Full g-contraction norm |Q|_g = (Q_ijkl Q^ijkl)^½ at every node.
template <int Dim>
ScalarField<Dim> curvature_norm(const PairSymmetricField<Dim>& q, const MetricField<Dim>& g) {
  constexpr int N4 = Dim * Dim * Dim * Dim;
  ScalarField<Dim> out(g.grid());
  std::array<double, N4> low{}, up{}, tmp{};
  auto at = [](int i, int j, int k, int l) { return ((i * Dim + j) * Dim + k) * Dim + l; };
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const Mat<Dim> gi = g.inverse(n);
    for (int i = 0; i < Dim; ++i)
      for (int j = 0; j < Dim; ++j)
        for (int k = 0; k < Dim; ++k)
          for (int l = 0; l < Dim; ++l) low[at(i, j, k, l)] = q(n, i, j, k, l);
    up = low;
    // raise one index slot at a time
    for (int slot = 0; slot < 4; ++slot) {
      tmp.fill(0.0);
      for (int i = 0; i < Dim; ++i)
        for (int j = 0; j < Dim; ++j)
          for (int k = 0; k < Dim; ++k)
            for (int l = 0; l < Dim; ++l) {
              std::array<int, 4> idx{i, j, k, l};
              const int a = idx[slot];
              double s = 0.0;
              for (int b = 0; b < Dim; ++b) {
                idx[slot] = b;
                s += gi(a, b) * up[at(idx[0], idx[1], idx[2], idx[3])];
              }
              tmp[at(i, j, k, l)] = s;
            }
      up = tmp;
    }
    double sq = 0.0;
    for (int c = 0; c < N4; ++c) sq += low[c] * up[c];
    out[n] = std::sqrt(std::max(sq, 0.0));
  }
  return out;
}

/// Every curvature and Koszul quantity of a Hessian metric.
template <int Dim>
struct CurvatureBundle {
  MetricField<Dim> metric;
  DifferenceTensor<Dim> gamma;
  PairSymmetricField<Dim> q;
  TensorField<Dim, 4> riemann;
  KoszulForms<Dim> forms;
};

template <int Dim>
CurvatureBundle<Dim> curvature_bundle(const PotentialMetric<Dim>& pm) {
  MetricField<Dim> g = metric_from_potential(pm);
  auto gamma = christoffel(g);
  auto q = hessian_curvature(pm);
  auto riemann = riemann_from_q(q);
  auto forms = koszul(g);
  return {std::move(g), std::move(gamma), std::move(q), std::move(riemann), std::move(forms)};
}

}  // namespace hflow
