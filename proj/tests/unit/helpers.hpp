#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "nlns/grid.hpp"

namespace testing {

inline double uniform(std::mt19937_64& gen, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(gen);
}

inline double max_abs_diff(const nlns::Field& a, const nlns::Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Random trigonometric polynomial with modes |j| <= max_mode on every axis.
inline nlns::Field band_limited(const nlns::TorusGrid& grid, std::mt19937_64& gen, int max_mode) {
  const double pi = std::acos(-1.0);
  const int d = grid.dim();
  nlns::Field f(grid);
  for (int a = 0; a < d; ++a) {
    for (int q = 1; q <= max_mode; ++q) {
      const double c = uniform(gen), s = uniform(gen);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double arg = q * pi * grid.position(i)[a] / grid.half_length();
        f[i] += c * std::cos(arg) + s * std::sin(arg);
      }
    }
  }
  // a cross term so 2D/3D fields are not separable
  if (d > 1) {
    const double c = uniform(gen);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto x = grid.position(i);
      f[i] += c * std::cos(pi * (x[0] + x[1]) / grid.half_length());
    }
  }
  return f;
}

}  // namespace testing
