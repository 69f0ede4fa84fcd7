#pragma once

/// @file grid.hpp
/// @brief Periodic affine chart, node-indexed scalar fields and the
/// centered finite-difference calculus used by every other module.
///
/// Node (k_1, ..., k_n) sits at (k_1 h_1, ..., k_n h_n); index arithmetic
/// wraps modulo N_d. Flat node indices are row-major (last axis fastest).
///
/// All derivative stencils are second-order centered differences:
///   D_i f    = (f(x + h_i e_i) - f(x - h_i e_i)) / (2 h_i)
///   D_ii f   = (f(x + h_i e_i) - 2 f(x) + f(x - h_i e_i)) / h_i^2
/// Mixed and higher derivatives are compositions of these. Axis lists are
/// sorted before composing, and each repeated pair of axes becomes one D_ii
/// block, so any permutation of the axis arguments yields a bit-identical
/// field.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hflow {

inline constexpr int kMaxDim = 3;
inline constexpr std::size_t kMinNodesPerAxis = 8;

template <int Dim>
class PeriodicGrid {
  static_assert(Dim >= 1 && Dim <= kMaxDim, "chart dimension must be 1, 2 or 3");

 public:
  using Index = std::array<std::size_t, Dim>;
  using Point = std::array<double, Dim>;

  PeriodicGrid() = default;

  PeriodicGrid(const Index& sizes, const Point& lengths) : sizes_(sizes), lengths_(lengths) {
    for (int d = 0; d < Dim; ++d) {
      if (sizes_[d] < kMinNodesPerAxis) {
        throw std::invalid_argument("grid: axis " + std::to_string(d) + " needs at least " +
                                    std::to_string(kMinNodesPerAxis) + " nodes");
      }
      if (!(lengths_[d] > 0.0) || !std::isfinite(lengths_[d])) {
        throw std::invalid_argument("grid: axis " + std::to_string(d) +
                                    " period must be positive and finite");
      }
      spacings_[d] = lengths_[d] / static_cast<double>(sizes_[d]);
    }
    std::size_t stride = 1;
    for (int d = Dim - 1; d >= 0; --d) {
      strides_[d] = stride;
      stride *= sizes_[d];
    }
    node_count_ = stride;
  }

  /// Uniform grid with the same node count and period on every axis.
  static PeriodicGrid uniform(std::size_t n_per_axis, double length) {
    Index sizes{};
    Point lengths{};
    sizes.fill(n_per_axis);
    lengths.fill(length);
    return PeriodicGrid(sizes, lengths);
  }

  static constexpr int dim() { return Dim; }
  std::size_t node_count() const { return node_count_; }
  std::size_t size(int axis) const { return sizes_[axis]; }
  double length(int axis) const { return lengths_[axis]; }
  double spacing(int axis) const { return spacings_[axis]; }
  std::size_t stride(int axis) const { return strides_[axis]; }
  const Index& sizes() const { return sizes_; }
  const Point& lengths() const { return lengths_; }

  double min_spacing_squared() const {
    double m = spacings_[0] * spacings_[0];
    for (int d = 1; d < Dim; ++d) m = std::min(m, spacings_[d] * spacings_[d]);
    return m;
  }

  std::size_t axis_index(std::size_t node, int axis) const {
    return (node / strides_[axis]) % sizes_[axis];
  }

  Index multi_index(std::size_t node) const {
    Index k{};
    for (int d = 0; d < Dim; ++d) k[d] = axis_index(node, d);
    return k;
  }

  std::size_t node_at(const Index& k) const {
    std::size_t node = 0;
    for (int d = 0; d < Dim; ++d) node += (k[d] % sizes_[d]) * strides_[d];
    return node;
  }

  Point coordinates(std::size_t node) const {
    Point x{};
    for (int d = 0; d < Dim; ++d) x[d] = static_cast<double>(axis_index(node, d)) * spacings_[d];
    return x;
  }

  /// Node closest to x after wrapping x into the fundamental period.
  std::size_t nearest_node(const Point& x) const {
    Index k{};
    for (int d = 0; d < Dim; ++d) {
      double wrapped = std::fmod(x[d], lengths_[d]);
      if (wrapped < 0.0) wrapped += lengths_[d];
      k[d] = static_cast<std::size_t>(std::llround(wrapped / spacings_[d])) % sizes_[d];
    }
    return node_at(k);
  }

  std::size_t neighbor_plus(std::size_t node, int axis) const {
    return axis_index(node, axis) + 1 == sizes_[axis] ? node - (sizes_[axis] - 1) * strides_[axis]
                                                      : node + strides_[axis];
  }

  std::size_t neighbor_minus(std::size_t node, int axis) const {
    return axis_index(node, axis) == 0 ? node + (sizes_[axis] - 1) * strides_[axis]
                                       : node - strides_[axis];
  }

  bool operator==(const PeriodicGrid& other) const {
    return sizes_ == other.sizes_ && lengths_ == other.lengths_;
  }

 private:
  Index sizes_{};
  Point lengths_{};
  Point spacings_{};
  Index strides_{};
  std::size_t node_count_ = 0;
};

template <int Dim>
class ScalarField {
 public:
  using Grid = PeriodicGrid<Dim>;

  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double value = 0.0)
      : grid_(grid), values_(grid.node_count(), value) {}
  ScalarField(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.node_count()) {
      throw std::invalid_argument("scalar field: value count does not match grid node count");
    }
  }

  /// Samples f at every node coordinate.
  template <typename Fn>
  static ScalarField sample(const Grid& grid, Fn&& f) {
    ScalarField out(grid);
    for (std::size_t n = 0; n < grid.node_count(); ++n) out.values_[n] = f(grid.coordinates(n));
    return out;
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t node) const { return values_[node]; }
  double& operator[](std::size_t node) { return values_[node]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
  }

  ScalarField& operator+=(const ScalarField& o) {
    check_same_grid(o);
    for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += o.values_[n];
    return *this;
  }
  ScalarField& operator-=(const ScalarField& o) {
    check_same_grid(o);
    for (std::size_t n = 0; n < values_.size(); ++n) values_[n] -= o.values_[n];
    return *this;
  }
  ScalarField& operator*=(double a) {
    for (double& v : values_) v *= a;
    return *this;
  }

  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }
  friend ScalarField operator*(ScalarField a, double s) { return a *= s; }
  friend ScalarField operator-(ScalarField a) {
    for (double& v : a.values_) v = -v;
    return a;
  }

  bool operator==(const ScalarField&) const = default;

 private:
  void check_same_grid(const ScalarField& o) const {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("scalar field: grids differ");
  }

  Grid grid_;
  std::vector<double> values_;
};

namespace detail {

template <int Dim>
void check_axis(int axis) {
  if (axis < 0 || axis >= Dim) {
    throw std::out_of_range("axis " + std::to_string(axis) + " out of range for dimension " +
                            std::to_string(Dim));
  }
}

template <int Dim>
ScalarField<Dim> first_difference(const ScalarField<Dim>& f, int axis) {
  const auto& grid = f.grid();
  const double two_h = 2.0 * grid.spacing(axis);
  ScalarField<Dim> out(grid);
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    out[n] = (f[grid.neighbor_plus(n, axis)] - f[grid.neighbor_minus(n, axis)]) / two_h;
  }
  return out;
}

template <int Dim>
ScalarField<Dim> second_difference(const ScalarField<Dim>& f, int axis) {
  const auto& grid = f.grid();
  const double h2 = grid.spacing(axis) * grid.spacing(axis);
  ScalarField<Dim> out(grid);
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    out[n] = (f[grid.neighbor_plus(n, axis)] - 2.0 * f[n] + f[grid.neighbor_minus(n, axis)]) / h2;
  }
  return out;
}

}  // namespace detail

/// Canonical composed derivative along the given axes (any order, any
/// multiplicity). An empty axis list returns f unchanged.
template <int Dim>
ScalarField<Dim> derivative(const ScalarField<Dim>& f, std::span<const int> axes) {
  std::vector<int> sorted(axes.begin(), axes.end());
  for (int a : sorted) detail::check_axis<Dim>(a);
  std::sort(sorted.begin(), sorted.end());
  ScalarField<Dim> out = f;
  std::size_t pos = 0;
  while (pos < sorted.size()) {
    if (pos + 1 < sorted.size() && sorted[pos] == sorted[pos + 1]) {
      out = detail::second_difference(out, sorted[pos]);
      pos += 2;
    } else {
      out = detail::first_difference(out, sorted[pos]);
      pos += 1;
    }
  }
  return out;
}

template <int Dim>
ScalarField<Dim> partial(const ScalarField<Dim>& f, int i) {
  detail::check_axis<Dim>(i);
  return detail::first_difference(f, i);
}

template <int Dim>
ScalarField<Dim> partial2(const ScalarField<Dim>& f, int i, int j) {
  const std::array<int, 2> axes{i, j};
  return derivative(f, std::span<const int>(axes));
}

template <int Dim>
ScalarField<Dim> partial3(const ScalarField<Dim>& f, int i, int j, int k) {
  const std::array<int, 3> axes{i, j, k};
  return derivative(f, std::span<const int>(axes));
}

template <int Dim>
ScalarField<Dim> partial4(const ScalarField<Dim>& f, int i, int j, int k, int l) {
  const std::array<int, 4> axes{i, j, k, l};
  return derivative(f, std::span<const int>(axes));
}

/// D_i(D_j f) with first differences only, including i == j. Unlike
/// partial2 this keeps every second derivative a product of the same
/// commuting D operators, so A + hessian_stencil(psi) is exactly
/// discrete-Hessian (D_k g_ij == D_i g_kj up to rounding) in every dimension.
template <int Dim>
ScalarField<Dim> hessian_stencil(const ScalarField<Dim>& f, int i, int j) {
  detail::check_axis<Dim>(i);
  detail::check_axis<Dim>(j);
  return detail::first_difference(detail::first_difference(f, std::min(i, j)), std::max(i, j));
}

template <int Dim>
double mean(const ScalarField<Dim>& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v;
  return sum / static_cast<double>(f.size());
}

template <int Dim>
double sup_norm(const ScalarField<Dim>& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

/// Population variance over nodes.
template <int Dim>
double variance(const ScalarField<Dim>& f) {
  const double mu = mean(f);
  double acc = 0.0;
  for (double v : f.values()) acc += (v - mu) * (v - mu);
  return acc / static_cast<double>(f.size());
}

template <int Dim>
double sum(const ScalarField<Dim>& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s;
}

}  // namespace hflow
