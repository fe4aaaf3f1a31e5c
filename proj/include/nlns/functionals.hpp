#pragma once

#include <string>
#include <vector>

#include "nlns/dynamics.hpp"
#include "nlns/grid.hpp"
#include "nlns/kernel.hpp"
#include "nlns/spectral.hpp"

namespace nlns {

/// Parts of the total energy. The quantum part carries the full kappa so that
/// its variational derivative reproduces the Bohm force of the dynamics.
struct EnergyParts {
  double kinetic = 0.0;      // 1/2 int rho |u|^2
  double interaction = 0.0;  // 1/2 int rho (K_L * rho)
  double barrier = 0.0;      // eta/7 int rho^-6
  double quantum = 0.0;      // kappa int |grad sqrt(rho)|^2
  double highorder = 0.0;    // delta/2 int |grad lap rho|^2

  double total() const { return kinetic + interaction + barrier + quantum + highorder; }
};

EnergyParts energy_parts(const State& state, const RegularizationParams& params,
                         const KernelTable& kernel);
double energy(const State& state, const RegularizationParams& params, const KernelTable& kernel);

/// int 1/2 rho |u + grad log rho|^2 + rho (K_L * rho) plus the same
/// regularizer parts as the energy. Requires rho > 0.
double bd_entropy(const State& state, const RegularizationParams& params,
                  const KernelTable& kernel);

/// Radial table of F(|x|) at minimum-image distance, without cutoff.
ConvolutionTable mv_pair_table(const TorusGrid& grid);

struct MvParts {
  double velocity = 0.0;  // int rho F(|u|)
  double pair = 0.0;      // iint F(|x-y|) rho rho
};
MvParts mv_functional(const State& state, const ConvolutionTable& f_table);

struct Dissipations {
  double viscous = 0.0;     // int rho |D u|^2
  double nu = 0.0;          // nu int |lap u|^2
  double r0 = 0.0;          // r0 int |u|^2
  double r1 = 0.0;          // r1 int rho |u|^4
  double kappa_eps = 0.0;   // kappa eps / 2 int rho |hess log rho|^2
  double eps_delta = 0.0;   // eps delta int |lap^2 rho|^2
  double eps_eta = 0.0;     // 2/3 eps eta int |grad rho^-3|^2
  double eps_kernel = 0.0;  // eps int grad(K_L * rho) . grad rho

  /// The unweighted pairing int grad(K_L * rho) . grad rho and whether it
  /// clears -C_impl * mass^2.
  double kernel_pairing = 0.0;
  double kernel_lower_bound = 0.0;
  bool kernel_lower_bound_holds = false;

  double sum() const {
    return viscous + nu + r0 + r1 + kappa_eps + eps_delta + eps_eta + eps_kernel;
  }
};

Dissipations dissipation_suite(const State& state, const RegularizationParams& params,
                               const KernelTable& kernel);

/// int grad(K_L * rho) . grad rho
double kernel_pairing(const Field& rho, const KernelTable& kernel);

/// int |grad sqrt(rho)|^2 for rho >= 0.
double grad_sqrt_norm2(const Field& rho);

/// Radial table of |x|^2 at minimum-image distance.
ConvolutionTable moment2_table(const TorusGrid& grid);
/// iint |x-y|^2 rho(x) rho(y)
double moment2(const Field& rho);
double moment2(const Field& rho, const ConvolutionTable& table);

struct StressDecomposition {
  double full = 0.0;           // int rho |grad u|^2
  double symmetric = 0.0;      // int rho |D u|^2
  double antisymmetric = 0.0;  // 1/4 int rho |grad u - grad u^T|^2
};
StressDecomposition stress_decomposition(const Field& rho, const VecField& u);

struct JungelResult {
  double lhs = 0.0;   // int rho |hess log rho|^2
  double rhs1 = 0.0;  // 1/7 int |hess sqrt(rho)|^2
  double rhs2 = 0.0;  // 1/8 int |grad rho^(1/4)|^4
  bool pass = false;
};
JungelResult jungel_check(const Field& rho);

/// One row of the diagnostics series.
struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double energy_E = 0.0;
  EnergyParts energy_parts;
  double bd_entropy = 0.0;
  double mv_velocity = 0.0;
  double mv_pair = 0.0;
  Dissipations dissipations;
  double moment2 = 0.0;
  double rho_min = 0.0;
  double energy_budget_residual = 0.0;
  double grad_sqrt_rho = 0.0;     // int |grad sqrt(rho)|^2
  double log_rho_integral = 0.0;  // int log rho
  double floored_points = 0.0;    // cells where velocity recovery used the floor
};

/// Evaluates records for one grid, parameter set and kernel, caching the
/// convolution tables.
class DiagnosticsEvaluator {
 public:
  DiagnosticsEvaluator(const RegularizationParams& params, const KernelTable& kernel);
  DiagnosticsRecord evaluate(const State& state) const;

 private:
  RegularizationParams params_;
  const KernelTable& kernel_;
  ConvolutionTable f_table_;
  ConvolutionTable moment_table_;
};

std::vector<std::string> csv_header();
std::vector<double> csv_values(const DiagnosticsRecord& r);
DiagnosticsRecord record_from_values(const std::vector<double>& values);

/// Residual of dE/dt + sum of dissipations at each record, with dE/dt from
/// the three-point centered difference (non-uniform spacing allowed) and
/// normalized by max(|E|, 1). The two endpoint entries are 0.
std::vector<double> energy_budget_residual(const std::vector<DiagnosticsRecord>& records);
std::vector<double> energy_budget_residual(const std::vector<double>& t,
                                           const std::vector<double>& energy,
                                           const std::vector<double>& dissipation);

}  // namespace nlns
