#include "nlns/oracle.hpp"

#include <cmath>
#include <string>

#include "nlns/error.hpp"

namespace nlns::oracle {
namespace {

constexpr int kHalfWidth = 6;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::size_t shifted(const TorusGrid& grid, std::size_t flat, int axis, int offset) {
  auto idx = grid.unravel(flat);
  const int n = grid.n();
  idx[axis] = ((idx[axis] + offset) % n + n) % n;
  return grid.ravel(idx);
}

Field pointwise(const Field& a, const Field& b) {
  Field out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

}  // namespace

Field direct_convolve(const Field& f, const Field& table_values) {
  require_same_grid(f.grid(), table_values.grid(), "direct_convolve");
  const TorusGrid& grid = f.grid();
  const int d = grid.dim();
  const int n = grid.n();
  const double cell = grid.cell_volume();
  Field out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto xi = grid.unravel(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const auto xj = grid.unravel(j);
      std::array<int, 3> disp{0, 0, 0};
      for (int a = 0; a < d; ++a) disp[a] = ((xi[a] - xj[a]) % n + n) % n;
      acc += table_values[grid.ravel(disp)] * f[j];
    }
    out[i] = acc * cell;
  }
  return out;
}

std::vector<double> first_derivative_weights(int p) {
  if (p < 1) throw ValidationError("stencil half width must be positive");
  std::vector<double> c(p + 1, 0.0);
  const double pf2 = factorial(p) * factorial(p);
  for (int j = 1; j <= p; ++j) {
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    c[j] = sign * pf2 / (j * factorial(p - j) * factorial(p + j));
  }
  return c;
}

std::vector<double> second_derivative_weights(int p) {
  if (p < 1) throw ValidationError("stencil half width must be positive");
  std::vector<double> w(p + 1, 0.0);
  const double pf2 = factorial(p) * factorial(p);
  double sum = 0.0;
  for (int j = 1; j <= p; ++j) {
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    w[j] = 2.0 * sign * pf2 / (static_cast<double>(j) * j * factorial(p - j) * factorial(p + j));
    sum += w[j];
  }
  w[0] = -2.0 * sum;
  return w;
}

Field fd_derivative(const Field& f, int axis) {
  const TorusGrid& grid = f.grid();
  if (axis < 0 || axis >= grid.dim()) throw ValidationError("axis out of range");
  static const std::vector<double> c = first_derivative_weights(kHalfWidth);
  const double h = grid.spacing();
  Field out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double acc = 0.0;
    for (int j = 1; j <= kHalfWidth; ++j)
      acc += c[j] * (f[shifted(grid, i, axis, j)] - f[shifted(grid, i, axis, -j)]);
    out[i] = acc / h;
  }
  return out;
}

Field fd_second_derivative(const Field& f, int axis) {
  const TorusGrid& grid = f.grid();
  if (axis < 0 || axis >= grid.dim()) throw ValidationError("axis out of range");
  static const std::vector<double> w = second_derivative_weights(kHalfWidth);
  const double h2 = grid.spacing() * grid.spacing();
  Field out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double acc = w[0] * f[i];
    for (int j = 1; j <= kHalfWidth; ++j)
      acc += w[j] * (f[shifted(grid, i, axis, j)] + f[shifted(grid, i, axis, -j)]);
    out[i] = acc / h2;
  }
  return out;
}

VecField fd_gradient(const Field& f) {
  std::vector<Field> comps;
  for (int a = 0; a < f.grid().dim(); ++a) comps.push_back(fd_derivative(f, a));
  return VecField(std::move(comps));
}

Field fd_divergence(const VecField& v) {
  Field out(v.grid());
  for (int a = 0; a < v.dim(); ++a) out += fd_derivative(v[a], a);
  return out;
}

Field fd_laplacian(const Field& f) {
  Field out(f.grid());
  for (int a = 0; a < f.grid().dim(); ++a) out += fd_second_derivative(f, a);
  return out;
}

RhsResult fd_rhs_term(const State& state, const RegularizationParams& p,
                      const KernelTable& kernel, Term term) {
  const TorusGrid& grid = state.rho.grid();
  require_same_grid(grid, kernel.grid(), "fd_rhs_term");
  const int d = grid.dim();
  const Field& rho = state.rho;
  const VecField& m = state.momentum;
  const VecField u = recover_velocity(rho, m).u;
  RhsResult out{Field(grid), VecField(grid)};

  auto grad_u = [&] {
    std::vector<VecField> g;
    for (int i = 0; i < d; ++i) g.push_back(fd_gradient(u[i]));
    return g;
  };

  switch (term) {
    case Term::Transport:
      out.drho = fd_divergence(m);
      out.drho *= -1.0;
      break;
    case Term::Diffusion:
      out.drho = fd_laplacian(rho);
      out.drho *= p.epsilon;
      break;
    case Term::Advection:
      for (int i = 0; i < d; ++i) {
        Field acc(grid);
        for (int j = 0; j < d; ++j) acc -= fd_derivative(pointwise(m[i], u[j]), j);
        out.dmomentum[i] = acc;
      }
      break;
    case Term::Stress: {
      const auto g = grad_u();
      for (int i = 0; i < d; ++i) {
        Field acc(grid);
        for (int j = 0; j < d; ++j) {
          Field flux(grid);
          for (std::size_t q = 0; q < flux.size(); ++q)
            flux[q] = 0.5 * rho[q] * (g[i][j][q] + g[j][i][q]);
          acc += fd_derivative(flux, j);
        }
        out.dmomentum[i] = acc;
      }
      break;
    }
    case Term::Kernel: {
      const Field potential = direct_convolve(rho, kernel.potential().values());
      for (int a = 0; a < d; ++a) {
        out.dmomentum[a] = pointwise(rho, fd_derivative(potential, a));
        out.dmomentum[a] *= -1.0;
      }
      break;
    }
    case Term::LinearDamping:
      for (int a = 0; a < d; ++a) {
        out.dmomentum[a] = u[a];
        out.dmomentum[a] *= -p.r0;
      }
      break;
    case Term::CubicDamping:
      for (int a = 0; a < d; ++a) {
        Field f(grid);
        for (std::size_t q = 0; q < f.size(); ++q) {
          double s2 = 0.0;
          for (int b = 0; b < d; ++b) s2 += u[b][q] * u[b][q];
          f[q] = -p.r1 * rho[q] * s2 * u[a][q];
        }
        out.dmomentum[a] = f;
      }
      break;
    case Term::Quantum: {
      Field root(grid);
      for (std::size_t q = 0; q < root.size(); ++q) root[q] = std::sqrt(rho[q]);
      const Field lap = fd_laplacian(root);
      Field bohm(grid);
      for (std::size_t q = 0; q < bohm.size(); ++q) bohm[q] = lap[q] / root[q];
      for (int a = 0; a < d; ++a) {
        out.dmomentum[a] = pointwise(rho, fd_derivative(bohm, a));
        out.dmomentum[a] *= p.kappa;
      }
      break;
    }
    case Term::CrossDiffusion: {
      const VecField gr = fd_gradient(rho);
      const auto g = grad_u();
      for (int i = 0; i < d; ++i) {
        Field f(grid);
        for (int j = 0; j < d; ++j)
          for (std::size_t q = 0; q < f.size(); ++q) f[q] -= p.epsilon * gr[j][q] * g[i][j][q];
        out.dmomentum[i] = f;
      }
      break;
    }
    case Term::BiLaplacian:
      for (int a = 0; a < d; ++a) {
        out.dmomentum[a] = fd_laplacian(fd_laplacian(u[a]));
        out.dmomentum[a] *= -p.nu;
      }
      break;
    case Term::Barrier: {
      Field inv6(grid);
      for (std::size_t q = 0; q < inv6.size(); ++q) inv6[q] = std::pow(rho[q], -6.0);
      for (int a = 0; a < d; ++a) {
        out.dmomentum[a] = fd_derivative(inv6, a);
        out.dmomentum[a] *= p.eta;
      }
      break;
    }
    case Term::HighOrder: {
      const Field lap3 = fd_laplacian(fd_laplacian(fd_laplacian(rho)));
      for (int a = 0; a < d; ++a) {
        out.dmomentum[a] = pointwise(rho, fd_derivative(lap3, a));
        out.dmomentum[a] *= p.delta;
      }
      break;
    }
    case Term::Count:
      throw ValidationError("not a right-hand-side term");
  }
  return out;
}

double direct_pair_integral(const Field& rho, const Field& table_values) {
  const Field conv = direct_convolve(rho, table_values);
  double acc = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) acc += rho[i] * conv[i];
  return acc * rho.grid().cell_volume();
}

}  // namespace nlns::oracle
