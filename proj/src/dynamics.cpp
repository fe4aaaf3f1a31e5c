#include "nlns/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "nlns/spectral.hpp"

namespace nlns {
namespace {

Field product(const Field& a, const Field& b) {
  Field out(a.grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

double uniform_pm1(std::mt19937_64& gen) {
  // Portable across standard libraries, unlike std::uniform_real_distribution.
  return 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0;
}

double norm_of_gradient(const Field& f) {
  const VecField g = gradient(f);
  double acc = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const double n = l2_norm(g[a]);
    acc += n * n;
  }
  return std::sqrt(acc);
}

// Cached derived quantities shared by the individual terms.
class TermContext {
 public:
  TermContext(const State& s, const RegularizationParams& p, const KernelTable& k)
      : state(s), params(p), kernel(k), grid(s.rho.grid()), vel(recover_velocity(s.rho, s.momentum)) {}

  const State& state;
  const RegularizationParams& params;
  const KernelTable& kernel;
  const TorusGrid& grid;
  VelocityRecovery vel;

  const VecField& grad_rho() {
    if (!grad_rho_) grad_rho_ = gradient(state.rho);
    return *grad_rho_;
  }
  // grad_u()[i][j] = d_j u_i
  const std::vector<VecField>& grad_u() {
    if (!grad_u_) {
      grad_u_.emplace();
      for (int i = 0; i < grid.dim(); ++i) grad_u_->push_back(gradient(vel.u[i]));
    }
    return *grad_u_;
  }

  void require_positive(const char* term) const {
    const double floor = density_floor(state.rho);
    for (std::size_t i = 0; i < state.rho.size(); ++i) {
      if (!(state.rho[i] >= floor) || state.rho[i] <= 0.0)
        throw NumericalError(std::string(term) + ": density underflow at index " +
                             std::to_string(i));
    }
  }

 private:
  std::optional<VecField> grad_rho_;
  std::optional<std::vector<VecField>> grad_u_;
};

RhsResult zero_result(const TorusGrid& grid) { return RhsResult{Field(grid), VecField(grid)}; }

// d_j applied to each entry of a row-major tensor field and summed over j.
Field row_divergence(const std::vector<Field>& row) {
  return divergence(VecField(std::vector<Field>(row)));
}

RhsResult evaluate_term(TermContext& c, Term term) {
  const auto& grid = c.grid;
  const int d = grid.dim();
  const auto& p = c.params;
  const Field& rho = c.state.rho;
  const VecField& m = c.state.momentum;
  const VecField& u = c.vel.u;
  RhsResult out = zero_result(grid);

  switch (term) {
    case Term::Transport:
      out.drho = divergence(m);
      out.drho *= -1.0;
      break;

    case Term::Diffusion:
      if (p.epsilon == 0.0) break;
      out.drho = laplacian(rho);
      out.drho *= p.epsilon;
      break;

    case Term::Advection:
      for (int i = 0; i < d; ++i) {
        std::vector<Field> flux;
        for (int j = 0; j < d; ++j) flux.push_back(dealias(product(m[i], u[j])));
        out.dmomentum[i] = row_divergence(flux);
        out.dmomentum[i] *= -1.0;
      }
      break;

    case Term::Stress: {
      const auto& gu = c.grad_u();
      for (int i = 0; i < d; ++i) {
        std::vector<Field> flux;
        for (int j = 0; j < d; ++j) {
          Field sym(grid);
          for (std::size_t q = 0; q < sym.size(); ++q)
            sym[q] = 0.5 * rho[q] * (gu[i][j][q] + gu[j][i][q]);
          flux.push_back(dealias(sym));
        }
        out.dmomentum[i] = row_divergence(flux);
      }
      break;
    }

    case Term::Kernel: {
      // Differentiating K_L*rho spectrally keeps this force the exact
      // variational derivative of the discrete interaction energy.
      const VecField g = gradient(convolve_periodic(rho, c.kernel.potential()));
      for (int a = 0; a < d; ++a) {
        out.dmomentum[a] = dealias(product(rho, g[a]));
        out.dmomentum[a] *= -1.0;
      }
      break;
    }

    case Term::LinearDamping:
      if (p.r0 == 0.0) break;
      for (int a = 0; a < d; ++a) {
        out.dmomentum[a] = u[a];
        out.dmomentum[a] *= -p.r0;
      }
      break;

    case Term::CubicDamping: {
      if (p.r1 == 0.0) break;
      const Field speed2 = [&] {
        Field s(grid);
        for (int a = 0; a < d; ++a)
          for (std::size_t q = 0; q < s.size(); ++q) s[q] += u[a][q] * u[a][q];
        return s;
      }();
      for (int a = 0; a < d; ++a) {
        Field f(grid);
        for (std::size_t q = 0; q < f.size(); ++q) f[q] = rho[q] * speed2[q] * u[a][q];
        out.dmomentum[a] = dealias(f);
        out.dmomentum[a] *= -p.r1;
      }
      break;
    }

    case Term::Quantum: {
      if (p.kappa == 0.0) break;
      c.require_positive("quantum term");
      Field root(grid);
      for (std::size_t q = 0; q < root.size(); ++q) root[q] = std::sqrt(rho[q]);
      const Field lap_root = laplacian(root);
      Field bohm(grid);
      for (std::size_t q = 0; q < bohm.size(); ++q) bohm[q] = lap_root[q] / root[q];
      const VecField g = gradient(dealias(bohm));
      for (int a = 0; a < d; ++a) {
        out.dmomentum[a] = dealias(product(rho, g[a]));
        out.dmomentum[a] *= p.kappa;
      }
      break;
    }

    case Term::CrossDiffusion: {
      if (p.epsilon == 0.0) break;
      const auto& gr = c.grad_rho();
      const auto& gu = c.grad_u();
      for (int i = 0; i < d; ++i) {
        Field f(grid);
        for (int j = 0; j < d; ++j)
          for (std::size_t q = 0; q < f.size(); ++q) f[q] += gr[j][q] * gu[i][j][q];
        out.dmomentum[i] = dealias(f);
        out.dmomentum[i] *= -p.epsilon;
      }
      break;
    }

    case Term::BiLaplacian:
      if (p.nu == 0.0) break;
      for (int a = 0; a < d; ++a) {
        out.dmomentum[a] = laplacian(laplacian(u[a]));
        out.dmomentum[a] *= -p.nu;
      }
      break;

    case Term::Barrier: {
      if (p.eta == 0.0) break;
      c.require_positive("barrier term");
      const double floor = density_floor(rho);
      Field inv6(grid);
      for (std::size_t q = 0; q < inv6.size(); ++q) inv6[q] = std::pow(std::max(rho[q], floor), -6.0);
      const VecField g = gradient(dealias(inv6));
      for (int a = 0; a < d; ++a) {
        out.dmomentum[a] = g[a];
        out.dmomentum[a] *= p.eta;
      }
      break;
    }

    case Term::HighOrder: {
      if (p.delta == 0.0) break;
      const Field lap3 = laplacian(laplacian(laplacian(rho)));
      const VecField g = gradient(lap3);
      for (int a = 0; a < d; ++a) {
        out.dmomentum[a] = dealias(product(rho, g[a]));
        out.dmomentum[a] *= p.delta;
      }
      break;
    }

    case Term::Count:
      break;
  }

  const std::string name = term_name(term);
  require_finite(out.drho, (name + " term").c_str());
  for (int a = 0; a < d; ++a) require_finite(out.dmomentum[a], (name + " term").c_str());
  return out;
}

// Spectral representation used inside the step.
struct SpecState {
  Spectrum rho;
  std::vector<Spectrum> m;

  void axpy(double s, const SpecState& o) {
    for (std::size_t q = 0; q < rho.size(); ++q) rho[q] += s * o.rho[q];
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t q = 0; q < m[a].size(); ++q) m[a][q] += s * o.m[a][q];
  }
};

SpecState to_spectral(const Field& rho, const VecField& m) {
  SpecState s{forward(rho), {}};
  for (int a = 0; a < m.dim(); ++a) s.m.push_back(forward(m[a]));
  return s;
}

// Linear part: rho gets lambda(k); momentum gets a(k) I + b(k) P with P the
// projection onto k.
class LinearPart {
 public:
  LinearPart(const TorusGrid& grid, const RegularizationParams& p, const TermMask& mask,
             double mean_density)
      : modes_(mode_table(grid)), dim_(grid.dim()) {
    const auto& md = *modes_;
    lambda_.resize(md.count);
    a_.resize(md.count);
    b_.resize(md.count);
    const bool diff = mask.has(Term::Diffusion);
    const bool visc = mask.has(Term::Stress);
    const double nu = mask.has(Term::BiLaplacian) ? p.nu : 0.0;
    const double r0 = mask.has(Term::LinearDamping) ? p.r0 : 0.0;
    for (std::size_t q = 0; q < md.count; ++q) {
      const double k2 = md.k2[q];
      lambda_[q] = diff ? -p.epsilon * k2 : 0.0;
      a_[q] = -(nu * k2 * k2 + r0) / mean_density - (visc ? 0.5 * k2 : 0.0);
      b_[q] = visc ? -0.5 * k2 : 0.0;
    }
  }

  // y <- L y
  SpecState apply(const SpecState& y) const {
    SpecState out = y;
    const auto& md = *modes_;
    for (std::size_t q = 0; q < md.count; ++q) {
      out.rho[q] = lambda_[q] * y.rho[q];
      const Complex kp = projection_coeff(y, q);
      for (int a = 0; a < dim_; ++a)
        out.m[a][q] = a_[q] * y.m[a][q] + b_[q] * kp * md.k[q][a];
    }
    return out;
  }

  // y <- exp(tau L) y
  void propagate(SpecState& y, double tau) const {
    if (tau == 0.0) return;
    const auto& md = *modes_;
    for (std::size_t q = 0; q < md.count; ++q) {
      y.rho[q] *= std::exp(tau * lambda_[q]);
      const double ea = std::exp(tau * a_[q]);
      const double eab = std::exp(tau * (a_[q] + b_[q]));
      const Complex kp = projection_coeff(y, q);
      for (int a = 0; a < dim_; ++a) y.m[a][q] = ea * y.m[a][q] + (eab - ea) * kp * md.k[q][a];
    }
  }

 private:
  // (k . m) / |k|^2, zero at k = 0.
  Complex projection_coeff(const SpecState& y, std::size_t q) const {
    const auto& md = *modes_;
    if (md.k2[q] == 0.0) return 0.0;
    Complex dot = 0.0;
    for (int a = 0; a < dim_; ++a) dot += md.k[q][a] * y.m[a][q];
    return dot / md.k2[q];
  }

  std::shared_ptr<const ModeTable> modes_;
  int dim_;
  std::vector<double> lambda_, a_, b_;
};

}  // namespace

void RegularizationParams::validate() const {
  const std::pair<const char*, double> nonneg[] = {{"epsilon", epsilon}, {"nu", nu},
                                                   {"eta", eta},         {"delta", delta},
                                                   {"kappa", kappa},     {"r0", r0},
                                                   {"r1", r1}};
  for (const auto& [name, v] : nonneg) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ValidationError(std::string(name) + " must be a finite non-negative number");
  }
  if (!(alpha > 0.0 && alpha < 2.0)) throw ValidationError("alpha must lie in (0,2)");
  if (!(half_length > 0.0)) throw ValidationError("L must be positive");
  if (!(m1 > 0.0)) throw ValidationError("m1 must be positive");
  if (!(mollifier_width > 0.0)) throw ValidationError("mollifier_width must be positive");
}

const char* term_name(Term t) {
  switch (t) {
    case Term::Transport: return "transport";
    case Term::Diffusion: return "diffusion";
    case Term::Advection: return "advection";
    case Term::Stress: return "stress";
    case Term::Kernel: return "kernel";
    case Term::LinearDamping: return "linear_damping";
    case Term::CubicDamping: return "cubic_damping";
    case Term::Quantum: return "quantum";
    case Term::CrossDiffusion: return "cross_diffusion";
    case Term::BiLaplacian: return "bilaplacian";
    case Term::Barrier: return "barrier";
    case Term::HighOrder: return "high_order";
    case Term::Count: break;
  }
  return "unknown";
}

TermMask TermMask::all() {
  TermMask m;
  m.bits_.set();
  return m;
}

TermMask TermMask::none() { return TermMask(); }

TermMask TermMask::only(std::initializer_list<Term> terms) {
  TermMask m;
  for (Term t : terms) m.set(t);
  return m;
}

double density_floor(const Field& rho) { return 1e-12 * rho.mean(); }

VelocityRecovery recover_velocity(const Field& rho, const VecField& momentum) {
  VelocityRecovery r{VecField(rho.grid()), 0};
  const double floor = density_floor(rho);
  for (std::size_t i = 0; i < rho.size(); ++i) {
    double den = rho[i];
    if (!(den >= floor)) {
      den = floor;
      ++r.floored_points;
    }
    if (den <= 0.0) {
      // rho vanishes identically; there is no velocity to recover.
      for (int a = 0; a < momentum.dim(); ++a) r.u[a][i] = 0.0;
      continue;
    }
    for (int a = 0; a < momentum.dim(); ++a) r.u[a][i] = momentum[a][i] / den;
  }
  return r;
}

Field gaussian_density(const TorusGrid& grid) {
  const double norm = std::pow(2.0 * std::acos(-1.0), -0.5 * grid.dim());
  return Field::from_function(grid, [norm](const std::array<double, 3>& x) {
    return norm * std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  });
}

VecField random_velocity(const TorusGrid& grid, std::uint64_t seed, double amplitude) {
  VecField u(grid);
  if (seed == 0) return u;
  const int d = grid.dim();
  const double L = grid.half_length();
  const double pi = std::acos(-1.0);
  std::mt19937_64 gen(seed);
  constexpr int kModes = 4;
  const CutoffProfile cutoff(L);
  for (int a = 0; a < d; ++a) {
    std::vector<double> cs(d * kModes), sn(d * kModes);
    for (auto& v : cs) v = uniform_pm1(gen);
    for (auto& v : sn) v = uniform_pm1(gen);
    Field f(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto x = grid.position(i);
      double v = 0.0;
      for (int b = 0; b < d; ++b) {
        for (int q = 1; q <= kModes; ++q) {
          const double arg = q * pi * x[b] / L;
          v += cs[b * kModes + q - 1] * std::cos(arg) + sn[b * kModes + q - 1] * std::sin(arg);
        }
      }
      f[i] = v;
    }
    const double peak = f.max_abs();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto x = grid.position(i);
      const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      f[i] = peak > 0.0 ? amplitude * f[i] / peak * cutoff.value(r) : 0.0;
    }
    u[a] = std::move(f);
  }
  return u;
}

InitialData initial_data(const Field& rho0, const VecField& u0,
                         const RegularizationParams& params) {
  params.validate();
  const TorusGrid& grid = rho0.grid();
  require_same_grid(grid, u0.grid(), "initial_data");
  if (grid.half_length() != params.half_length)
    throw ValidationError("initial_data: grid half length differs from L");
  require_nonnegative(rho0, "initial density");
  require_finite(rho0, "initial density");
  for (int a = 0; a < u0.dim(); ++a) require_finite(u0[a], "initial velocity");

  const int d = grid.dim();
  const CutoffProfile cutoff(params.half_length);
  Field root0(grid), root_trunc(grid), rho_trunc(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.position(i);
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    root0[i] = std::sqrt(rho0[i]);
    root_trunc[i] = root0[i] * cutoff.value(r);
    rho_trunc[i] = root_trunc[i] * root_trunc[i];
  }

  Field rho_tilde = mollify(rho_trunc, params.mollifier_width);
  for (double& v : rho_tilde.data()) v += 1.0 / params.m1;

  VecField m(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (int a = 0; a < d; ++a) m[a][i] = rho_trunc[i] == 0.0 ? 0.0 : rho_tilde[i] * u0[a][i];
  }

  InitialDataReport rep;
  rep.grad_sqrt_truncated = norm_of_gradient(root_trunc);
  rep.grad_sqrt_original = norm_of_gradient(root0);
  rep.grad_sqrt_bound = rep.grad_sqrt_original + CutoffProfile::gradient_constant() /
                                                     params.half_length *
                                                     std::sqrt(rho0.integral());
  rep.grad_sqrt_holds = rep.grad_sqrt_truncated <= rep.grad_sqrt_bound * (1.0 + 1e-12);

  KernelSpec spec{params.alpha, params.half_length, true, true};
  const KernelTable table = build_kernel_table(grid, spec, cutoff);
  rep.interaction_truncated = product(rho_trunc, convolve_periodic(rho_trunc, table.potential())).integral();

  // Whole-space pairing of the sampled rho0 with the untruncated kernel:
  // zero-pad to a torus twice as wide so no pair wraps around.
  const TorusGrid wide(d, 2 * grid.n(), 2.0 * grid.half_length());
  Field padded(wide);
  const int off = grid.n() / 2;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto idx = grid.unravel(i);
    for (int a = 0; a < d; ++a) idx[a] += off;
    padded[wide.ravel(idx)] = rho0[i];
  }
  const double origin = singular_cell_average(d, grid.spacing(), params.alpha);
  const ConvolutionTable whole = radial_table(wide, [&](double r) {
    return r == 0.0 ? origin : std::pow(r, -params.alpha) + 0.5 * r * r;
  });
  rep.interaction_whole = product(padded, convolve_periodic(padded, whole)).integral();
  rep.interaction_holds = rep.interaction_truncated <=
                          rep.interaction_whole + 1e-12 * std::max(1.0, std::abs(rep.interaction_whole));

  double l1 = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) l1 += std::abs(rho_trunc[i] - rho0[i]);
  rep.l1_truncation_error = l1 * grid.cell_volume();

  return InitialData{State{0.0, std::move(rho_tilde), std::move(m)}, rep};
}

RhsResult rhs(const State& state, const RegularizationParams& params, const KernelTable& kernel,
              const TermMask& mask) {
  require_same_grid(state.rho.grid(), kernel.grid(), "rhs");
  TermContext ctx(state, params, kernel);
  RhsResult total = zero_result(ctx.grid);
  for (int t = 0; t < kTermCount; ++t) {
    const Term term = static_cast<Term>(t);
    if (!mask.has(term)) continue;
    const RhsResult part = evaluate_term(ctx, term);
    total.drho += part.drho;
    total.dmomentum += part.dmomentum;
  }
  return total;
}

RhsResult rhs_term(const State& state, const RegularizationParams& params,
                   const KernelTable& kernel, Term term) {
  require_same_grid(state.rho.grid(), kernel.grid(), "rhs_term");
  TermContext ctx(state, params, kernel);
  return evaluate_term(ctx, term);
}

State step(const State& state, double dt, const RegularizationParams& params,
           const KernelTable& kernel, const TermMask& mask) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time step must be positive");
  const TorusGrid& grid = state.rho.grid();
  const double mean = state.rho.mean();
  if (!(mean > 0.0)) throw NumericalError("step: mean density must be positive");
  const LinearPart lin(grid, params, mask, mean);

  // Nonlinear remainder N(y) = rhs(y) - L y, in spectral space.
  auto remainder = [&](const SpecState& y, double t) {
    State phys{t, inverse(y.rho), VecField(grid)};
    for (int a = 0; a < grid.dim(); ++a) phys.momentum[a] = inverse(y.m[a]);
    const RhsResult r = rhs(phys, params, kernel, mask);
    SpecState out = to_spectral(r.drho, r.dmomentum);
    out.axpy(-1.0, lin.apply(y));
    return out;
  };

  const double h = 0.5 * dt;
  const SpecState y = to_spectral(state.rho, state.momentum);

  const SpecState k1 = remainder(y, state.t);

  SpecState y2 = y;
  y2.axpy(h, k1);
  lin.propagate(y2, h);
  const SpecState k2 = remainder(y2, state.t + h);

  SpecState ey_half = y;
  lin.propagate(ey_half, h);
  SpecState y3 = ey_half;
  y3.axpy(h, k2);
  const SpecState k3 = remainder(y3, state.t + h);

  SpecState ek3 = k3;
  lin.propagate(ek3, h);
  SpecState y4 = ey_half;
  lin.propagate(y4, h);
  y4.axpy(dt, ek3);
  const SpecState k4 = remainder(y4, state.t + dt);

  // y_{n+1} = E y + dt/6 (E k1 + 2 E2 (k2 + k3) + k4)
  SpecState result = y;
  lin.propagate(result, dt);  // E y
  SpecState e_k1 = k1;
  lin.propagate(e_k1, dt);
  result.axpy(dt / 6.0, e_k1);
  SpecState e2_k23 = k2;
  e2_k23.axpy(1.0, k3);
  lin.propagate(e2_k23, h);
  result.axpy(dt / 3.0, e2_k23);
  result.axpy(dt / 6.0, k4);

  State out{state.t + dt, inverse(result.rho), VecField(grid)};
  for (int a = 0; a < grid.dim(); ++a) out.momentum[a] = inverse(result.m[a]);

  require_finite(out.rho, "step density");
  for (int a = 0; a < grid.dim(); ++a) require_finite(out.momentum[a], "step momentum");
  const double floor = density_floor(state.rho);
  const double lowest = out.rho.min();
  if (lowest < floor) {
    throw StepRejected("density floor violated after step (min " + std::to_string(lowest) +
                           "); retry with a smaller dt",
                       0.5 * dt);
  }
  return out;
}

double suggest_dt(const State& state, const RegularizationParams& p, const KernelTable& kernel,
                  const TermMask& mask, const DtOptions& opt) {
  const TorusGrid& grid = state.rho.grid();
  const int d = grid.dim();
  const double h = grid.spacing();
  const double pi = std::acos(-1.0);
  const double kmax = std::sqrt(static_cast<double>(d)) * pi / h;
  const Field& rho = state.rho;
  const double rho_max = rho.max();
  const double rho_min = rho.min();
  const double mean = rho.mean();
  const auto vel = recover_velocity(rho, state.momentum);
  const Field speed = vel.u.magnitude();

  double bound = std::numeric_limits<double>::infinity();
  auto limit = [&](double v) {
    if (v > 0.0 && std::isfinite(v)) bound = std::min(bound, v);
  };

  const bool positive = rho_min > 0.0;
  std::optional<VecField> grad_log;
  if (positive) {
    Field lg(grid);
    for (std::size_t i = 0; i < lg.size(); ++i) lg[i] = std::log(rho[i]);
    grad_log = gradient(lg);
  }

  if (mask.has(Term::Transport) || mask.has(Term::Advection)) {
    double fastest = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
      double s = speed[i];
      if (mask.has(Term::CrossDiffusion) && p.epsilon > 0.0 && grad_log) {
        double g2 = 0.0;
        for (int a = 0; a < d; ++a) g2 += (*grad_log)[a][i] * (*grad_log)[a][i];
        s += p.epsilon * std::sqrt(g2);
      }
      fastest = std::max(fastest, s);
    }
    if (fastest > 0.0) limit(h / fastest);
  }

  if (mask.has(Term::Stress) && grad_log) {
    double g = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
      double g2 = 0.0;
      for (int a = 0; a < d; ++a) g2 += (*grad_log)[a][i] * (*grad_log)[a][i];
      g = std::max(g, std::sqrt(g2));
    }
    if (g > 0.0) {
      limit(2.8 / (kmax * g));
      const Field lap_log = divergence(*grad_log);
      limit(2.78 / (lap_log.max_abs() + g * g));
    }
  }

  if (mask.has(Term::Kernel)) {
    const auto& spec = kernel.potential().spectrum();
    const auto& md = spec.modes();
    double worst = 0.0;
    for (std::size_t q = 0; q < md.count; ++q) worst = std::max(worst, std::abs(spec[q]) * md.k2[q]);
    if (worst > 0.0) limit(2.8 / std::sqrt(rho_max * worst));
  }

  if (mask.has(Term::Quantum) && p.kappa > 0.0) limit(2.83 / (std::sqrt(0.5 * p.kappa) * kmax * kmax));
  if (mask.has(Term::HighOrder) && p.delta > 0.0)
    limit(2.83 / (std::sqrt(p.delta * rho_max) * std::pow(kmax, 4)));
  if (mask.has(Term::Barrier) && p.eta > 0.0 && positive)
    limit(2.83 / (std::sqrt(6.0 * p.eta * std::pow(rho_min, -7.0)) * kmax));
  if (mask.has(Term::CubicDamping) && p.r1 > 0.0) {
    const double s = speed.max_abs();
    if (s > 0.0) limit(2.78 / (3.0 * p.r1 * s * s));
  }

  // Parts of the frozen-coefficient linear terms that remain explicit.
  if (positive) {
    const double spread = std::max(std::abs(1.0 / rho_min - 1.0 / mean),
                                   std::abs(1.0 / rho_max - 1.0 / mean));
    if (mask.has(Term::BiLaplacian) && p.nu > 0.0 && spread > 0.0)
      limit(2.78 / (p.nu * std::pow(kmax, 4) * spread));
    if (mask.has(Term::LinearDamping) && p.r0 > 0.0 && spread > 0.0) limit(2.78 / (p.r0 * spread));
  }

  return std::min(opt.cap, opt.safety * bound);
}

}  // namespace nlns
