#pragma once

/// @file tensor.hpp
/// @brief Node-indexed tensor fields: symmetric 2-tensors (upper triangle,
/// one ScalarField per component), dense rank-r tensors, and the
/// pair-symmetric 4-tensor used for the Hessian curvature.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hflow/grid.hpp"

namespace hflow {

template <int Dim>
inline constexpr int kSymCount = Dim * (Dim + 1) / 2;

/// Position of (i, j) in the row-major upper triangle.
template <int Dim>
constexpr int sym_index(int i, int j) {
  if (i > j) std::swap(i, j);
  return i * Dim - i * (i - 1) / 2 + (j - i);
}

template <int Dim>
using Mat = Eigen::Matrix<double, Dim, Dim>;
template <int Dim>
using Vec = Eigen::Matrix<double, Dim, 1>;

/// Eigenvalues (ascending) of a small symmetric matrix.
template <int Dim>
Vec<Dim> symmetric_eigenvalues(const Mat<Dim>& m) {
  if constexpr (Dim == 1) {
    return m;
  } else {
    Eigen::SelfAdjointEigenSolver<Mat<Dim>> solver;
    solver.computeDirect(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
  }
}

template <int Dim>
double min_eigenvalue(const Mat<Dim>& m) {
  return symmetric_eigenvalues<Dim>(m)(0);
}

template <int Dim>
double max_eigenvalue(const Mat<Dim>& m) {
  return symmetric_eigenvalues<Dim>(m)(Dim - 1);
}

/// Symmetric 2-tensor field stored as its upper triangle.
template <int Dim>
class SymTensorField {
 public:
  using Grid = PeriodicGrid<Dim>;
  static constexpr int kComponents = kSymCount<Dim>;

  SymTensorField() = default;
  explicit SymTensorField(const Grid& grid) {
    for (auto& c : components_) c = ScalarField<Dim>(grid);
  }

  const Grid& grid() const { return components_[0].grid(); }
  std::size_t node_count() const { return grid().node_count(); }

  const ScalarField<Dim>& component(int i, int j) const { return components_[sym_index<Dim>(i, j)]; }
  ScalarField<Dim>& component(int i, int j) { return components_[sym_index<Dim>(i, j)]; }
  const ScalarField<Dim>& stored(int c) const { return components_[c]; }
  ScalarField<Dim>& stored(int c) { return components_[c]; }

  double operator()(std::size_t node, int i, int j) const { return component(i, j)[node]; }

  Mat<Dim> matrix(std::size_t node) const {
    Mat<Dim> m;
    for (int i = 0; i < Dim; ++i)
      for (int j = i; j < Dim; ++j) m(i, j) = m(j, i) = component(i, j)[node];
    return m;
  }

  void set_matrix(std::size_t node, const Mat<Dim>& m) {
    for (int i = 0; i < Dim; ++i)
      for (int j = i; j < Dim; ++j) component(i, j)[node] = m(i, j);
  }

  /// Constant field equal to m at every node.
  static SymTensorField constant(const Grid& grid, const Mat<Dim>& m) {
    SymTensorField out(grid);
    for (int i = 0; i < Dim; ++i)
      for (int j = i; j < Dim; ++j) out.component(i, j) = ScalarField<Dim>(grid, m(i, j));
    return out;
  }

  SymTensorField& operator+=(const SymTensorField& o) {
    for (int c = 0; c < kComponents; ++c) components_[c] += o.components_[c];
    return *this;
  }
  SymTensorField& operator-=(const SymTensorField& o) {
    for (int c = 0; c < kComponents; ++c) components_[c] -= o.components_[c];
    return *this;
  }
  SymTensorField& operator*=(double a) {
    for (auto& c : components_) c *= a;
    return *this;
  }
  friend SymTensorField operator+(SymTensorField a, const SymTensorField& b) { return a += b; }
  friend SymTensorField operator-(SymTensorField a, const SymTensorField& b) { return a -= b; }
  friend SymTensorField operator*(double s, SymTensorField a) { return a *= s; }

  bool operator==(const SymTensorField&) const = default;

 private:
  std::array<ScalarField<Dim>, kComponents> components_;
};

template <int Dim>
double sup_norm(const SymTensorField<Dim>& t) {
  double m = 0.0;
  for (int c = 0; c < SymTensorField<Dim>::kComponents; ++c) m = std::max(m, sup_norm(t.stored(c)));
  return m;
}

template <int Dim>
double sup_difference(const SymTensorField<Dim>& a, const SymTensorField<Dim>& b) {
  return sup_norm(SymTensorField<Dim>(a) -= b);
}

/// Dense rank-r tensor per node; components innermost, first index slowest.
template <int Dim, int Rank>
class TensorField {
 public:
  using Grid = PeriodicGrid<Dim>;
  static constexpr int kComponents = [] {
    int c = 1;
    for (int r = 0; r < Rank; ++r) c *= Dim;
    return c;
  }();

  TensorField() = default;
  explicit TensorField(const Grid& grid)
      : grid_(grid), data_(grid.node_count() * static_cast<std::size_t>(kComponents), 0.0) {}

  const Grid& grid() const { return grid_; }
  std::size_t node_count() const { return grid_.node_count(); }

  template <typename... I>
  double& operator()(std::size_t node, I... idx) {
    return data_[node * kComponents + flat(idx...)];
  }
  template <typename... I>
  double operator()(std::size_t node, I... idx) const {
    return data_[node * kComponents + flat(idx...)];
  }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

 private:
  template <typename... I>
  static int flat(I... idx) {
    static_assert(sizeof...(I) == Rank, "wrong number of tensor indices");
    int f = 0;
    ((f = f * Dim + static_cast<int>(idx)), ...);
    return f;
  }

  Grid grid_;
  std::vector<double> data_;
};

template <int Dim, int Rank>
double sup_norm(const TensorField<Dim, Rank>& t) {
  double m = 0.0;
  for (double v : t.data()) m = std::max(m, std::abs(v));
  return m;
}

template <int Dim, int Rank>
double sup_difference(const TensorField<Dim, Rank>& a, const TensorField<Dim, Rank>& b) {
  double m = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t n = 0; n < da.size(); ++n) m = std::max(m, std::abs(da[n] - db[n]));
  return m;
}

/// 4-tensor with Q_ijkl = Q_kjil = Q_ilkj = Q_jilk: symmetric in the pair
/// P = (i,k), symmetric in R = (j,l), and under P <-> R. Stored as the upper
/// triangle of an m x m matrix over pair indices, m = n(n+1)/2.
template <int Dim>
class PairSymmetricField {
 public:
  using Grid = PeriodicGrid<Dim>;
  static constexpr int kPairs = kSymCount<Dim>;
  static constexpr int kComponents = kPairs * (kPairs + 1) / 2;

  PairSymmetricField() = default;
  explicit PairSymmetricField(const Grid& grid)
      : grid_(grid), data_(grid.node_count() * static_cast<std::size_t>(kComponents), 0.0) {}

  const Grid& grid() const { return grid_; }
  std::size_t node_count() const { return grid_.node_count(); }

  double operator()(std::size_t node, int i, int j, int k, int l) const {
    return data_[node * kComponents + slot(i, j, k, l)];
  }
  double& operator()(std::size_t node, int i, int j, int k, int l) {
    return data_[node * kComponents + slot(i, j, k, l)];
  }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  /// Dense copy, for code that wants plain 4-index access.
  TensorField<Dim, 4> expand() const {
    TensorField<Dim, 4> out(grid_);
    for (std::size_t n = 0; n < node_count(); ++n)
      for (int i = 0; i < Dim; ++i)
        for (int j = 0; j < Dim; ++j)
          for (int k = 0; k < Dim; ++k)
            for (int l = 0; l < Dim; ++l) out(n, i, j, k, l) = (*this)(n, i, j, k, l);
    return out;
  }

 private:
  static int slot(int i, int j, int k, int l) {
    return sym_index<kPairs>(sym_index<Dim>(i, k), sym_index<Dim>(j, l));
  }

  Grid grid_;
  std::vector<double> data_;
};

template <int Dim>
double sup_norm(const PairSymmetricField<Dim>& t) {
  double m = 0.0;
  for (double v : t.data()) m = std::max(m, std::abs(v));
  return m;
}

/// Per-node covector field.
template <int Dim>
using CovectorField = TensorField<Dim, 1>;

}  // namespace hflow
