#include "nlns/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlns/error.hpp"
#include "nlns/renormalization.hpp"

namespace nlns {
namespace {

void require_positive_density(const Field& rho, const char* what) {
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] > 0.0))
      throw NumericalError(std::string(what) + " requires a strictly positive density (index " +
                           std::to_string(i) + ")");
  }
}

Field map(const Field& f, double (*fn)(double)) {
  Field out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = fn(f[i]);
  return out;
}

double weighted_sum_of_squares(const Field& weight, const VecField& v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < weight.size(); ++i) {
    double s = 0.0;
    for (int a = 0; a < v.dim(); ++a) s += v[a][i] * v[a][i];
    acc += weight[i] * s;
  }
  return acc * weight.grid().cell_volume();
}

double sum_of_squares(const VecField& v) {
  double acc = 0.0;
  for (int a = 0; a < v.dim(); ++a)
    for (std::size_t i = 0; i < v[a].size(); ++i) acc += v[a][i] * v[a][i];
  return acc * v.grid().cell_volume();
}

double pairing(const Field& a, const Field& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc * a.grid().cell_volume();
}

// Hessian entries d_i d_j f, indexed [i][j].
std::vector<std::vector<Field>> hessian(const Field& f) {
  const int d = f.grid().dim();
  std::vector<std::vector<Field>> h(d, std::vector<Field>(d, Field(f.grid())));
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      std::array<int, 3> orders{0, 0, 0};
      orders[i] += 1;
      orders[j] += 1;
      h[i][j] = derivative(f, orders);
      if (j != i) h[j][i] = h[i][j];
    }
  }
  return h;
}

double weighted_frobenius(const Field* weight, const std::vector<std::vector<Field>>& h) {
  const std::size_t size = h[0][0].size();
  double acc = 0.0;
  for (std::size_t q = 0; q < size; ++q) {
    double s = 0.0;
    for (const auto& row : h)
      for (const auto& e : row) s += e[q] * e[q];
    acc += (weight ? (*weight)[q] : 1.0) * s;
  }
  return acc * h[0][0].grid().cell_volume();
}

// grad_u[i][j] = d_j u_i
std::vector<VecField> velocity_gradient(const VecField& u) {
  std::vector<VecField> g;
  for (int i = 0; i < u.dim(); ++i) g.push_back(gradient(u[i]));
  return g;
}

double hessian_log_term(const Field& rho) {
  const Field lg = map(rho, [](double v) { return std::log(v); });
  return weighted_frobenius(&rho, hessian(lg));
}

}  // namespace

EnergyParts energy_parts(const State& state, const RegularizationParams& p,
                         const KernelTable& kernel) {
  const Field& rho = state.rho;
  require_same_grid(rho.grid(), kernel.grid(), "energy");
  const auto vel = recover_velocity(rho, state.momentum);
  EnergyParts e;
  e.kinetic = 0.5 * weighted_sum_of_squares(rho, vel.u);
  e.interaction = 0.5 * pairing(rho, convolve_periodic(rho, kernel.potential()));
  if (p.eta > 0.0) {
    require_positive_density(rho, "barrier energy");
    double acc = 0.0;
    for (double v : rho.data()) acc += std::pow(v, -6.0);
    e.barrier = p.eta / 7.0 * acc * rho.grid().cell_volume();
  }
  if (p.kappa > 0.0) e.quantum = p.kappa * grad_sqrt_norm2(rho);
  if (p.delta > 0.0) e.highorder = 0.5 * p.delta * sum_of_squares(gradient(laplacian(rho)));
  return e;
}

double energy(const State& state, const RegularizationParams& params, const KernelTable& kernel) {
  return energy_parts(state, params, kernel).total();
}

double bd_entropy(const State& state, const RegularizationParams& p, const KernelTable& kernel) {
  const Field& rho = state.rho;
  require_positive_density(rho, "BD entropy");
  const auto vel = recover_velocity(rho, state.momentum);
  const VecField grad_log = gradient(map(rho, [](double v) { return std::log(v); }));
  VecField effective = vel.u;
  effective += grad_log;
  const EnergyParts parts = energy_parts(state, p, kernel);
  return 0.5 * weighted_sum_of_squares(rho, effective) + 2.0 * parts.interaction + parts.barrier +
         parts.quantum + parts.highorder;
}

ConvolutionTable mv_pair_table(const TorusGrid& grid) {
  return radial_table(grid, [](double r) { return mv_F(r); });
}

MvParts mv_functional(const State& state, const ConvolutionTable& f_table) {
  const Field& rho = state.rho;
  require_same_grid(rho.grid(), f_table.values().grid(), "mv_functional");
  const auto vel = recover_velocity(rho, state.momentum);
  const Field speed = vel.u.magnitude();
  MvParts mv;
  double acc = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) acc += rho[i] * mv_F(speed[i]);
  mv.velocity = acc * rho.grid().cell_volume();
  mv.pair = pairing(rho, convolve_periodic(rho, f_table));
  return mv;
}

double kernel_pairing(const Field& rho, const KernelTable& kernel) {
  require_same_grid(rho.grid(), kernel.grid(), "kernel_pairing");
  const VecField g = gradient(convolve_periodic(rho, kernel.potential()));
  const VecField gr = gradient(rho);
  double acc = 0.0;
  for (int a = 0; a < g.dim(); ++a) acc += pairing(g[a], gr[a]);
  return acc;
}

double grad_sqrt_norm2(const Field& rho) {
  const Field root = map(rho, [](double v) { return std::sqrt(std::max(v, 0.0)); });
  return sum_of_squares(gradient(root));
}

Dissipations dissipation_suite(const State& state, const RegularizationParams& p,
                               const KernelTable& kernel) {
  const Field& rho = state.rho;
  const TorusGrid& grid = rho.grid();
  require_same_grid(grid, kernel.grid(), "dissipation_suite");
  const double cell = grid.cell_volume();
  const auto vel = recover_velocity(rho, state.momentum);
  const VecField& u = vel.u;
  Dissipations d;

  d.viscous = stress_decomposition(rho, u).symmetric;
  if (p.nu > 0.0) {
    double acc = 0.0;
    for (int a = 0; a < u.dim(); ++a) {
      const Field lu = laplacian(u[a]);
      for (double v : lu.data()) acc += v * v;
    }
    d.nu = p.nu * acc * cell;
  }
  if (p.r0 > 0.0) d.r0 = p.r0 * sum_of_squares(u);
  if (p.r1 > 0.0) {
    const Field speed = u.magnitude();
    double acc = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) acc += rho[i] * std::pow(speed[i], 4.0);
    d.r1 = p.r1 * acc * cell;
  }
  if (p.kappa > 0.0 && p.epsilon > 0.0) {
    require_positive_density(rho, "quantum dissipation");
    d.kappa_eps = 0.5 * p.kappa * p.epsilon * hessian_log_term(rho);
  }
  if (p.delta > 0.0 && p.epsilon > 0.0) {
    const Field bl = laplacian(laplacian(rho));
    double acc = 0.0;
    for (double v : bl.data()) acc += v * v;
    d.eps_delta = p.epsilon * p.delta * acc * cell;
  }
  if (p.eta > 0.0 && p.epsilon > 0.0) {
    require_positive_density(rho, "barrier dissipation");
    const Field inv3 = map(rho, [](double v) { return std::pow(v, -3.0); });
    d.eps_eta = 2.0 / 3.0 * p.epsilon * p.eta * sum_of_squares(gradient(inv3));
  }

  d.kernel_pairing = kernel_pairing(rho, kernel);
  d.eps_kernel = p.epsilon * d.kernel_pairing;
  const double mass = rho.integral();
  d.kernel_lower_bound =
      -interaction_lower_bound_constant(grid.dim(), kernel.spec().alpha, grid.half_length()) *
      mass * mass;
  d.kernel_lower_bound_holds = d.kernel_pairing >= d.kernel_lower_bound;
  return d;
}

ConvolutionTable moment2_table(const TorusGrid& grid) {
  return radial_table(grid, [](double r) { return r * r; });
}

double moment2(const Field& rho) { return moment2(rho, moment2_table(rho.grid())); }

double moment2(const Field& rho, const ConvolutionTable& table) {
  return pairing(rho, convolve_periodic(rho, table));
}

StressDecomposition stress_decomposition(const Field& rho, const VecField& u) {
  require_same_grid(rho.grid(), u.grid(), "stress_decomposition");
  const int d = u.dim();
  const auto g = velocity_gradient(u);
  StressDecomposition s;
  for (std::size_t q = 0; q < rho.size(); ++q) {
    double full = 0.0, sym = 0.0, anti = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const double gij = g[i][j][q];
        const double gji = g[j][i][q];
        full += gij * gij;
        sym += 0.25 * (gij + gji) * (gij + gji);
        anti += (gij - gji) * (gij - gji);
      }
    }
    s.full += rho[q] * full;
    s.symmetric += rho[q] * sym;
    s.antisymmetric += 0.25 * rho[q] * anti;
  }
  const double cell = rho.grid().cell_volume();
  s.full *= cell;
  s.symmetric *= cell;
  s.antisymmetric *= cell;
  return s;
}

JungelResult jungel_check(const Field& rho) {
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] > 0.0))
      throw ValidationError("jungel_check requires a strictly positive density (index " +
                            std::to_string(i) + ")");
  }
  JungelResult r;
  r.lhs = hessian_log_term(rho);
  const Field root = map(rho, [](double v) { return std::sqrt(v); });
  r.rhs1 = weighted_frobenius(nullptr, hessian(root)) / 7.0;
  const VecField g = gradient(map(rho, [](double v) { return std::pow(v, 0.25); }));
  double acc = 0.0;
  for (std::size_t q = 0; q < rho.size(); ++q) {
    double s = 0.0;
    for (int a = 0; a < g.dim(); ++a) s += g[a][q] * g[a][q];
    acc += s * s;
  }
  r.rhs2 = acc * rho.grid().cell_volume() / 8.0;
  const double slack = 1.0 - 1e-8;
  r.pass = r.lhs >= r.rhs1 * slack && r.lhs >= r.rhs2 * slack;
  return r;
}

DiagnosticsEvaluator::DiagnosticsEvaluator(const RegularizationParams& params,
                                           const KernelTable& kernel)
    : params_(params),
      kernel_(kernel),
      f_table_(mv_pair_table(kernel.grid())),
      moment_table_(moment2_table(kernel.grid())) {}

DiagnosticsRecord DiagnosticsEvaluator::evaluate(const State& state) const {
  const Field& rho = state.rho;
  DiagnosticsRecord r;
  r.t = state.t;
  r.mass = rho.integral();
  r.energy_parts = energy_parts(state, params_, kernel_);
  r.energy_E = r.energy_parts.total();
  r.rho_min = rho.min();
  r.bd_entropy = r.rho_min > 0.0 ? bd_entropy(state, params_, kernel_)
                                 : std::numeric_limits<double>::quiet_NaN();
  const MvParts mv = mv_functional(state, f_table_);
  r.mv_velocity = mv.velocity;
  r.mv_pair = mv.pair;
  r.dissipations = dissipation_suite(state, params_, kernel_);
  r.moment2 = moment2(rho, moment_table_);
  r.grad_sqrt_rho = grad_sqrt_norm2(rho);
  if (r.rho_min > 0.0) {
    double acc = 0.0;
    for (double v : rho.data()) acc += std::log(v);
    r.log_rho_integral = acc * rho.grid().cell_volume();
  } else {
    r.log_rho_integral = std::numeric_limits<double>::quiet_NaN();
  }
  r.floored_points = static_cast<double>(recover_velocity(rho, state.momentum).floored_points);
  return r;
}

std::vector<std::string> csv_header() {
  return {"t",
          "mass",
          "energy_E",
          "energy_parts.kinetic",
          "energy_parts.interaction",
          "energy_parts.barrier",
          "energy_parts.quantum",
          "energy_parts.highorder",
          "bd_entropy",
          "mv_velocity",
          "mv_pair",
          "dissipations.viscous",
          "dissipations.nu",
          "dissipations.r0",
          "dissipations.r1",
          "dissipations.kappa_eps",
          "dissipations.eps_delta",
          "dissipations.eps_eta",
          "dissipations.eps_kernel",
          "moment2",
          "rho_min",
          "energy_budget_residual",
          "grad_sqrt_rho",
          "log_rho_integral",
          "floored_points"};
}

std::vector<double> csv_values(const DiagnosticsRecord& r) {
  const auto& e = r.energy_parts;
  const auto& d = r.dissipations;
  return {r.t,         r.mass,        r.energy_E,       e.kinetic,   e.interaction,
          e.barrier,   e.quantum,     e.highorder,      r.bd_entropy, r.mv_velocity,
          r.mv_pair,   d.viscous,     d.nu,             d.r0,        d.r1,
          d.kappa_eps, d.eps_delta,   d.eps_eta,        d.eps_kernel, r.moment2,
          r.rho_min,   r.energy_budget_residual, r.grad_sqrt_rho, r.log_rho_integral,
          r.floored_points};
}

DiagnosticsRecord record_from_values(const std::vector<double>& v) {
  if (v.size() != csv_header().size())
    throw ValidationError("diagnostics row has " + std::to_string(v.size()) + " fields, expected " +
                          std::to_string(csv_header().size()));
  DiagnosticsRecord r;
  auto& e = r.energy_parts;
  auto& d = r.dissipations;
  double* targets[] = {&r.t,         &r.mass,        &r.energy_E,     &e.kinetic,   &e.interaction,
                       &e.barrier,   &e.quantum,     &e.highorder,    &r.bd_entropy, &r.mv_velocity,
                       &r.mv_pair,   &d.viscous,     &d.nu,           &d.r0,        &d.r1,
                       &d.kappa_eps, &d.eps_delta,   &d.eps_eta,      &d.eps_kernel, &r.moment2,
                       &r.rho_min,   &r.energy_budget_residual, &r.grad_sqrt_rho,
                       &r.log_rho_integral, &r.floored_points};
  for (std::size_t i = 0; i < v.size(); ++i) *targets[i] = v[i];
  return r;
}

std::vector<double> energy_budget_residual(const std::vector<DiagnosticsRecord>& records) {
  std::vector<double> t, e, diss;
  for (const auto& r : records) {
    t.push_back(r.t);
    e.push_back(r.energy_E);
    diss.push_back(r.dissipations.sum());
  }
  return energy_budget_residual(t, e, diss);
}

std::vector<double> energy_budget_residual(const std::vector<double>& t,
                                           const std::vector<double>& energy,
                                           const std::vector<double>& dissipation) {
  const std::size_t n = t.size();
  if (energy.size() != n || dissipation.size() != n)
    throw ValidationError("energy budget: series lengths differ");
  if (n < 3) throw ValidationError("energy budget needs at least 3 records");
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = t[i] - t[i - 1];
    const double h2 = t[i + 1] - t[i];
    if (!(h1 > 0.0) || !(h2 > 0.0))
      throw ValidationError("energy budget: record times must increase strictly");
    const double de = -h2 / (h1 * (h1 + h2)) * energy[i - 1] + (h2 - h1) / (h1 * h2) * energy[i] +
                      h1 / (h2 * (h1 + h2)) * energy[i + 1];
    out[i] = (de + dissipation[i]) / std::max(std::abs(energy[i]), 1.0);
  }
  return out;
}

}  // namespace nlns
