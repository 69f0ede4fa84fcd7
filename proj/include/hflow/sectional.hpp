#pragma once

/// @file sectional.hpp
/// @brief Sampled extremes of the Hessian sectional form
/// H(v, w) = Q_ijkl v^i v^j w^k w^l over g-orthonormal frames.
///
/// The search evaluates every frame entry Q(e_a, e_a, e_b, e_b) (a == b
/// included) of the g-orthonormalised coordinate frame at each node, then
/// Haar-random frames at random nodes, then refines the best maximiser and
/// minimiser by fixed-step projected gradient on the unit sphere(s). The
/// result bounds the extremes from sampling only; it is not a certificate.

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "hflow/curvature.hpp"
#include "hflow/random.hpp"
#include "hflow/tensor.hpp"

namespace hflow {

template <int Dim>
struct SectionalWitness {
  std::size_t node = 0;
  Vec<Dim> v = Vec<Dim>::Zero();
  Vec<Dim> w = Vec<Dim>::Zero();
};

template <int Dim>
struct SectionalReport {
  double max_h = 0.0;
  double min_h = 0.0;
  SectionalWitness<Dim> argmax;
  SectionalWitness<Dim> argmin;
  std::size_t samples_used = 0;  ///< frames evaluated (coordinate + random)
};

struct SectionalOptions {
  std::size_t n_samples = 1000;
  int refine_steps = 50;
  double step = 0.05;
  std::uint64_t seed = 42;
};

namespace detail {

template <int Dim>
using Dense4 = std::array<double, Dim * Dim * Dim * Dim>;

template <int Dim>
constexpr int at4(int i, int j, int k, int l) {
  return ((i * Dim + j) * Dim + k) * Dim + l;
}

/// Q in the frame given by the columns of m: Q̃_abcd = Q_ijkl m_ia m_jb m_kc m_ld.
template <int Dim>
Dense4<Dim> transform(const PairSymmetricField<Dim>& q, std::size_t node, const Mat<Dim>& m) {
  Dense4<Dim> cur{}, next{};
  for (int i = 0; i < Dim; ++i)
    for (int j = 0; j < Dim; ++j)
      for (int k = 0; k < Dim; ++k)
        for (int l = 0; l < Dim; ++l) cur[at4<Dim>(i, j, k, l)] = q(node, i, j, k, l);
  for (int slot = 0; slot < 4; ++slot) {
    for (int i = 0; i < Dim; ++i)
      for (int j = 0; j < Dim; ++j)
        for (int k = 0; k < Dim; ++k)
          for (int l = 0; l < Dim; ++l) {
            std::array<int, 4> idx{i, j, k, l};
            const int a = idx[slot];
            double s = 0.0;
            for (int b = 0; b < Dim; ++b) {
              idx[slot] = b;
              s += m(b, a) * cur[at4<Dim>(idx[0], idx[1], idx[2], idx[3])];
            }
            next[at4<Dim>(i, j, k, l)] = s;
          }
    cur = next;
  }
  return cur;
}

template <int Dim>
double form(const Dense4<Dim>& t, const Vec<Dim>& a, const Vec<Dim>& b) {
  double s = 0.0;
  for (int i = 0; i < Dim; ++i)
    for (int j = 0; j < Dim; ++j)
      for (int k = 0; k < Dim; ++k)
        for (int l = 0; l < Dim; ++l) s += t[at4<Dim>(i, j, k, l)] * a(i) * a(j) * b(k) * b(l);
  return s;
}

/// Gradients of F(a, b) = t(a, a, b, b) in a and in b.
template <int Dim>
void form_gradient(const Dense4<Dim>& t, const Vec<Dim>& a, const Vec<Dim>& b, Vec<Dim>& ga, Vec<Dim>& gb) {
  ga.setZero();
  gb.setZero();
  for (int i = 0; i < Dim; ++i)
    for (int j = 0; j < Dim; ++j)
      for (int k = 0; k < Dim; ++k)
        for (int l = 0; l < Dim; ++l) {
          const double c = t[at4<Dim>(i, j, k, l)];
          ga(i) += c * a(j) * b(k) * b(l);
          ga(j) += c * a(i) * b(k) * b(l);
          gb(k) += c * a(i) * a(j) * b(l);
          gb(l) += c * a(i) * a(j) * b(k);
        }
}

/// Haar-random orthogonal matrix (QR of a Gaussian matrix with sign fix).
template <int Dim>
Mat<Dim> haar_orthogonal(GaussianStream& rng) {
  Mat<Dim> z;
  for (int i = 0; i < Dim; ++i)
    for (int j = 0; j < Dim; ++j) z(i, j) = rng.normal();
  Eigen::HouseholderQR<Mat<Dim>> qr(z);
  Mat<Dim> qm = qr.householderQ();
  const Mat<Dim> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int j = 0; j < Dim; ++j)
    if (r(j, j) < 0.0) qm.col(j) = -qm.col(j);
  return qm;
}

}  // namespace detail

/// Hessian sectional form H(v, w) = Q(v, v, w, w) at one node.
template <int Dim>
double sectional_form(const PairSymmetricField<Dim>& q, std::size_t node, const Vec<Dim>& v, const Vec<Dim>& w) {
  double s = 0.0;
  for (int i = 0; i < Dim; ++i)
    for (int j = 0; j < Dim; ++j)
      for (int k = 0; k < Dim; ++k)
        for (int l = 0; l < Dim; ++l) s += q(node, i, j, k, l) * v(i) * v(j) * w(k) * w(l);
  return s;
}

template <int Dim>
SectionalReport<Dim> sectional_extremes(const PairSymmetricField<Dim>& q, const MetricField<Dim>& g,
                                        const SectionalOptions& opt = {}) {
  if (opt.n_samples < 1) throw std::invalid_argument("sectional_extremes: n_samples must be >= 1");
  if (opt.refine_steps < 0) throw std::invalid_argument("sectional_extremes: refine_steps must be >= 0");

  // Columns of whiten(node) form a g-orthonormal frame.
  auto whiten = [&](std::size_t node) -> Mat<Dim> {
    Eigen::LLT<Mat<Dim>> llt(g.matrix(node));
    return llt.matrixU().solve(Mat<Dim>::Identity());
  };

  SectionalReport<Dim> report;
  bool first = true;
  auto consider = [&](std::size_t node, const Mat<Dim>& frame) {
    for (int a = 0; a < Dim; ++a)
      for (int b = 0; b < Dim; ++b) {
        const Vec<Dim> v = frame.col(a);
        const Vec<Dim> w = frame.col(b);
        const double h = sectional_form(q, node, v, w);
        if (first || h > report.max_h) report.max_h = h, report.argmax = {node, v, w};
        if (first || h < report.min_h) report.min_h = h, report.argmin = {node, v, w};
        first = false;
      }
    ++report.samples_used;
  };

  for (std::size_t n = 0; n < g.node_count(); ++n) consider(n, whiten(n));

  GaussianStream rng(opt.seed);
  for (std::size_t s = 0; s < opt.n_samples; ++s) {
    const std::size_t node = rng.below(g.node_count());
    consider(node, whiten(node) * detail::haar_orthogonal<Dim>(rng));
  }

  // Refinement in whitened coordinates, where frames are Euclidean-orthonormal.
  auto refine = [&](SectionalWitness<Dim>& wit, double& best, double sign) {
    const Mat<Dim> m = whiten(wit.node);
    const Mat<Dim> m_inv = m.inverse();
    const auto t = detail::transform(q, wit.node, m);
    Vec<Dim> a = m_inv * wit.v;
    Vec<Dim> b = m_inv * wit.w;
    const bool diagonal = (a - b).norm() < 1e-12;
    Vec<Dim> ga, gb;
    for (int it = 0; it < opt.refine_steps; ++it) {
      detail::form_gradient<Dim>(t, a, b, ga, gb);
      Vec<Dim> na, nb;
      if (diagonal) {
        Vec<Dim> grad = ga + gb;
        grad -= grad.dot(a) * a;
        na = (a + sign * opt.step * grad).normalized();
        nb = na;
      } else {
        ga -= ga.dot(a) * a;
        gb -= gb.dot(b) * b;
        na = (a + sign * opt.step * ga).normalized();
        nb = b + sign * opt.step * gb;
        nb -= nb.dot(na) * na;
        if (nb.norm() < 1e-14) break;
        nb.normalize();
      }
      a = na;
      b = nb;
      const double h = detail::form<Dim>(t, a, b);
      if (sign * (h - best) > 0.0) {
        best = h;
        wit.v = m * a;
        wit.w = m * b;
      }
    }
  };
  refine(report.argmax, report.max_h, +1.0);
  refine(report.argmin, report.min_h, -1.0);
  return report;
}

}  // namespace hflow
