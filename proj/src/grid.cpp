#include "nlns/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nlns/error.hpp"

namespace nlns {

TorusGrid::TorusGrid(int dim, int points_per_axis, double half_length)
    : dim_(dim), n_(points_per_axis), half_length_(half_length) {
  if (dim < 1 || dim > 3) throw ValidationError("dim must be 1, 2 or 3");
  if (points_per_axis < 2 || points_per_axis % 2 != 0)
    throw ValidationError("points per axis must be a positive even integer");
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw ValidationError("half length L must be positive");
  spacing_ = 2.0 * half_length / n_;
  size_ = 1;
  for (int a = 0; a < dim_; ++a) size_ *= static_cast<std::size_t>(n_);
}

double TorusGrid::cell_volume() const { return std::pow(spacing_, dim_); }

double TorusGrid::volume() const { return std::pow(2.0 * half_length_, dim_); }

double TorusGrid::wavenumber(int j) const {
  return std::numbers::pi * signed_index(j) / half_length_;
}

std::vector<double> TorusGrid::wavenumbers() const {
  std::vector<double> k(n_);
  for (int j = 0; j < n_; ++j) k[j] = wavenumber(j);
  return k;
}

std::array<int, 3> TorusGrid::unravel(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % n_);
    flat /= n_;
  }
  return idx;
}

std::size_t TorusGrid::ravel(const std::array<int, 3>& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) flat = flat * n_ + static_cast<std::size_t>(idx[a]);
  return flat;
}

std::array<double, 3> TorusGrid::position(std::size_t flat) const {
  const auto idx = unravel(flat);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = coordinate(idx[a]);
  return x;
}

std::array<double, 3> TorusGrid::displacement(std::size_t flat) const {
  const auto idx = unravel(flat);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = signed_index(idx[a]) * spacing_;
  return x;
}

std::size_t TorusGrid::mirror_point(std::size_t flat) const {
  // x_j = -L + j h  ->  -x_j = x_{n-j}
  auto idx = unravel(flat);
  for (int a = 0; a < dim_; ++a) idx[a] = (n_ - idx[a]) % n_;
  return ravel(idx);
}

std::size_t TorusGrid::mirror_displacement(std::size_t flat) const {
  // Same index map: displacement index m -> (n - m) mod n.
  return mirror_point(flat);
}

void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what) {
  if (!(a == b)) throw ValidationError(std::string(what) + ": grid mismatch");
}

Field::Field(const TorusGrid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

Field::Field(const TorusGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw ValidationError("field length " + std::to_string(values_.size()) +
                          " does not match grid size " + std::to_string(grid_.size()));
}

double Field::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_.cell_volume();
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }

double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Field::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_, "field addition");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_, "field subtraction");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Field& Field::axpy(double s, const Field& other) {
  require_same_grid(grid_, other.grid_, "field axpy");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
  return *this;
}

void require_finite(const Field& f, const char* what) {
  const auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]))
      throw NumericalError(std::string(what) + ": non-finite value at index " + std::to_string(i));
  }
}

void require_nonnegative(const Field& f, const char* what) {
  const auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0.0)
      throw ValidationError(std::string(what) + ": negative density at index " +
                            std::to_string(i));
  }
}

VecField::VecField(const TorusGrid& grid, double fill) : grid_(grid) {
  components_.reserve(grid.dim());
  for (int a = 0; a < grid.dim(); ++a) components_.emplace_back(grid, fill);
}

VecField::VecField(std::vector<Field> components)
    : grid_(components.empty() ? throw ValidationError("vector field needs components")
                               : components.front().grid()),
      components_(std::move(components)) {
  if (static_cast<int>(components_.size()) != grid_.dim())
    throw ValidationError("vector field needs exactly dim components");
  for (const auto& c : components_) require_same_grid(grid_, c.grid(), "vector field");
}

Field VecField::magnitude() const {
  Field out(grid_);
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    double s = 0.0;
    for (const auto& c : components_) s += c[i] * c[i];
    out[i] = std::sqrt(s);
  }
  return out;
}

VecField& VecField::operator+=(const VecField& other) {
  for (int a = 0; a < dim(); ++a) components_[a] += other.components_[a];
  return *this;
}

VecField& VecField::operator*=(double s) {
  for (auto& c : components_) c *= s;
  return *this;
}

VecField& VecField::axpy(double s, const VecField& other) {
  for (int a = 0; a < dim(); ++a) components_[a].axpy(s, other.components_[a]);
  return *this;
}

}  // namespace nlns
