#pragma once

#include <bitset>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>

#include "nlns/error.hpp"
#include "nlns/grid.hpp"
#include "nlns/kernel.hpp"

namespace nlns {

/// Coefficients of the regularized system. Every coefficient is >= 0.
struct RegularizationParams {
  double epsilon = 0.0;  // density diffusion, also scales the cross term
  double nu = 0.0;       // bi-Laplacian on velocity
  double eta = 0.0;      // rho^-6 barrier
  double delta = 0.0;    // seventh-order density term
  double kappa = 0.0;    // Bohm term
  double r0 = 0.0;       // linear drag
  double r1 = 0.0;       // cubic drag
  double alpha = 0.5;
  double half_length = 8.0;
  double m1 = 10.0;               // initial density is lifted by 1/m1
  double mollifier_width = 0.25;  // support radius of the initial-data mollifier

  void validate() const;
};

/// Individual contributions to the right-hand side.
enum class Term : int {
  Transport = 0,    // -div m
  Diffusion,        // eps lap rho
  Advection,        // -div(m (x) u)
  Stress,           // div(rho D u)
  Kernel,           // -rho grad(K_L * rho)
  LinearDamping,    // -r0 u
  CubicDamping,     // -r1 rho |u|^2 u
  Quantum,          // kappa rho grad(lap sqrt(rho) / sqrt(rho))
  CrossDiffusion,   // -eps (grad rho . grad) u
  BiLaplacian,      // -nu lap^2 u
  Barrier,          // eta grad rho^-6
  HighOrder,        // delta rho grad lap^3 rho
  Count
};

constexpr int kTermCount = static_cast<int>(Term::Count);
const char* term_name(Term t);

class TermMask {
 public:
  static TermMask all();
  static TermMask none();
  static TermMask only(std::initializer_list<Term> terms);

  bool has(Term t) const { return bits_.test(static_cast<std::size_t>(t)); }
  TermMask& set(Term t, bool on = true) {
    bits_.set(static_cast<std::size_t>(t), on);
    return *this;
  }

 private:
  std::bitset<kTermCount> bits_;
};

/// Prognostic pair: density and momentum rho*u.
struct State {
  double t = 0.0;
  Field rho;
  VecField momentum;
};

/// u = m / max(rho, floor) with floor = 1e-12 * mean(rho).
struct VelocityRecovery {
  VecField u;
  std::size_t floored_points = 0;
};
double density_floor(const Field& rho);
VelocityRecovery recover_velocity(const Field& rho, const VecField& momentum);

/// Unit-mass Gaussian (2 pi)^(-dim/2) exp(-|x|^2/2) sampled on the grid.
Field gaussian_density(const TorusGrid& grid);

/// A smooth random velocity built from low Fourier modes, multiplied by the
/// torus cutoff so it vanishes where the truncated density does. Zero for
/// seed 0.
VecField random_velocity(const TorusGrid& grid, std::uint64_t seed, double amplitude = 0.2);

/// The three quantities controlled by the truncation lemma for initial data.
struct InitialDataReport {
  double grad_sqrt_truncated = 0.0;  // ||grad sqrt(rho_{0,L})||_2 on the torus
  double grad_sqrt_original = 0.0;   // ||grad sqrt(rho0)||_2
  double grad_sqrt_bound = 0.0;      // original + C1/L ||rho0||_1^(1/2)
  bool grad_sqrt_holds = false;
  double interaction_truncated = 0.0;  // iint rho_{0,L} rho_{0,L} K_L on the torus
  double interaction_whole = 0.0;      // iint rho0 rho0 K over the sampled region, no cutoff
  bool interaction_holds = false;
  double l1_truncation_error = 0.0;  // ||rho_{0,L} - rho0||_1
};

struct InitialData {
  State state;
  InitialDataReport report;
};

/// Truncates rho0 by phi_L^2, mollifies, lifts by 1/m1, and zeroes the
/// velocity where the truncated density vanishes.
InitialData initial_data(const Field& rho0, const VecField& u0,
                         const RegularizationParams& params);

struct RhsResult {
  Field drho;
  VecField dmomentum;
};

/// Full right-hand side restricted to the terms in `mask`.
RhsResult rhs(const State& state, const RegularizationParams& params, const KernelTable& kernel,
              const TermMask& mask = TermMask::all());

/// One term of the right-hand side with its coefficient applied.
RhsResult rhs_term(const State& state, const RegularizationParams& params,
                   const KernelTable& kernel, Term term);

/// Thrown when a step drives the density below its floor.
class StepRejected : public NumericalError {
 public:
  StepRejected(const std::string& what, double suggested_dt)
      : NumericalError(what), suggested_dt_(suggested_dt) {}
  double suggested_dt() const { return suggested_dt_; }

 private:
  double suggested_dt_;
};

/// Integrating-factor RK4 step. The stiff linear parts (eps lap on rho; the
/// nu, r0 and leading viscous symbols on momentum, frozen at the mean
/// density) are integrated exactly per stage, the rest explicitly.
State step(const State& state, double dt, const RegularizationParams& params,
           const KernelTable& kernel, const TermMask& mask = TermMask::all());

struct DtOptions {
  double safety = 0.25;
  double cap = 0.05;
};

/// Stable step estimate from the explicit terms' spectral radii.
double suggest_dt(const State& state, const RegularizationParams& params,
                  const KernelTable& kernel, const TermMask& mask = TermMask::all(),
                  const DtOptions& options = {});

}  // namespace nlns
