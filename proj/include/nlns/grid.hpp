#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nlns {

/// Uniform periodic grid on the torus [-L, L)^dim with n points per axis.
///
/// Point j on an axis sits at x_j = -L + j*h, h = 2L/n, so the origin is the
/// grid point j = n/2 and the grid is symmetric under x -> -x. Storage of
/// fields on the grid is row-major with axis 0 slowest.
class TorusGrid {
 public:
  TorusGrid(int dim, int points_per_axis, double half_length);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double half_length() const { return half_length_; }
  double spacing() const { return spacing_; }

  /// n^dim
  std::size_t size() const { return size_; }
  /// h^dim, the quadrature weight of one cell.
  double cell_volume() const;
  /// (2L)^dim
  double volume() const;

  double coordinate(int j) const { return -half_length_ + j * spacing_; }

  /// Maps an index in [0, n) to the symmetric range [-n/2, n/2). The Nyquist
  /// index n/2 maps to -n/2, so it appears exactly once.
  int signed_index(int j) const { return j < n_ / 2 ? j : j - n_; }

  /// Angular wavenumber pi*j/L of DFT index j in [0, n).
  double wavenumber(int j) const;
  std::vector<double> wavenumbers() const;

  std::array<int, 3> unravel(std::size_t flat) const;
  std::size_t ravel(const std::array<int, 3>& idx) const;

  /// Physical position of a grid point.
  std::array<double, 3> position(std::size_t flat) const;

  /// Minimum-image displacement represented by a displacement index.
  std::array<double, 3> displacement(std::size_t flat) const;

  /// Flat index of the point mirrored through the origin (x -> -x), and of
  /// the displacement -d for a displacement index d.
  std::size_t mirror_point(std::size_t flat) const;
  std::size_t mirror_displacement(std::size_t flat) const;

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.half_length_ == b.half_length_;
  }

 private:
  int dim_;
  int n_;
  double half_length_;
  double spacing_;
  std::size_t size_;
};

/// Throws ValidationError when the grids differ.
void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what);

/// Real scalar field on a torus grid.
class Field {
 public:
  explicit Field(const TorusGrid& grid, double fill = 0.0);
  Field(const TorusGrid& grid, std::vector<double> values);

  template <class Fn>
  static Field from_function(const TorusGrid& grid, Fn&& fn) {
    Field f(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) f.values_[i] = fn(grid.position(i));
    return f;
  }

  const TorusGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Trapezoid (= midpoint) quadrature of the field over the torus.
  double integral() const;
  double min() const;
  double max() const;
  double max_abs() const;
  double mean() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);
  /// this += s * other
  Field& axpy(double s, const Field& other);

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

/// Throws NumericalError naming the first non-finite index.
void require_finite(const Field& f, const char* what);

/// Throws ValidationError if any value is negative.
void require_nonnegative(const Field& f, const char* what);

/// A vector field with dim components sharing one grid.
class VecField {
 public:
  explicit VecField(const TorusGrid& grid, double fill = 0.0);
  explicit VecField(std::vector<Field> components);

  const TorusGrid& grid() const { return grid_; }
  int dim() const { return static_cast<int>(components_.size()); }

  Field& operator[](int axis) { return components_[axis]; }
  const Field& operator[](int axis) const { return components_[axis]; }

  /// Pointwise Euclidean norm.
  Field magnitude() const;

  VecField& operator+=(const VecField& other);
  VecField& operator*=(double s);
  VecField& axpy(double s, const VecField& other);

 private:
  TorusGrid grid_;
  std::vector<Field> components_;
};

}  // namespace nlns
