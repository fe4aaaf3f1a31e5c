#pragma once

#include <array>
#include <functional>
#include <vector>

#include "nlns/grid.hpp"

namespace nlns {

// F(z) = (1+z^2)/2 ln(1+z^2) and its derivatives.
double mv_F(double z);
double mv_F_prime(double z);
/// F'(z)/z, equal to 1 at z = 0.
double mv_psi(double z);

/// Level-n approximation: equal to F for z <= n, asymptotically linear times
/// a logarithm beyond.
double mv_F_n(double z, int n);
double mv_F_n_prime(double z, int n);
double mv_psi_n(double z, int n);
double mv_F_n_second(double z, int n);

struct GrowthReport {
  int n = 0;
  double exponent_margin = 0.0;    // the delta in z^(1+delta)
  double c_value = 0.0;            // smallest C with F_n(z) <= C z^(1+delta) on the grid
  double c_slope = 0.0;            // smallest C with F_n'(z) <= C z^delta
  bool factor_four_holds = false;  // z F_n'(z) <= 4 F_n(z) everywhere on the grid
  double worst_factor = 0.0;       // max of z F_n'(z) / F_n(z)
  double second_min = 0.0;         // F_n'' positive and bounded
  double second_max = 0.0;
  double z_max = 0.0;
  std::size_t samples = 0;
};

/// Certifies the growth bounds of F_n on {0} plus a log grid up to z_max.
GrowthReport growth_bounds_check(int n, double delta, double z_max = 1e6,
                                 std::size_t samples = 20001);

/// Smallest level in [1, n_max] whose factor-four bound holds on the grid,
/// or -1 if none does.
int smallest_factor_four_level(int n_max = 32, double z_max = 1e6);

/// Level-independent constants C with F_n <= C(1 + z^(2+delta)) and
/// z psi_n <= C(1 + z^(1+delta)), taken over n in [1, n_max].
struct UniformGrowth {
  double c_value = 0.0;
  double c_slope = 0.0;
};
UniformGrowth uniform_growth_constants(int n_max, double delta, double z_max = 1e6);

struct ConjugateValue {
  double conjugate_at_slope = 0.0;  // z F'(z) - F(z)
  double bound = 0.0;               // (a - 1) F(z)
};

/// For a strictly convex F with z F' <= a F, the closed form of F*(F'(z))
/// and the bound (a-1)F(z).
ConjugateValue convex_conjugate_identity(const std::function<double(double)>& f,
                                         const std::function<double(double)>& f_prime, double z,
                                         double a = 4.0);

/// sup_{z >= 0} (b z - F_n(z)) for the even extension of F_n: a coarse log
/// grid followed by golden-section refinement of the concave objective.
double mv_F_n_conjugate_numeric(double b, int n);

/// Radial clamp of a vector to length M.
std::array<double, 3> truncate_vector(const std::array<double, 3>& v, int dim, double M);
VecField truncate_velocity(const VecField& u, double M);

/// Smooth cutoffs in the density: the zero cutoff rises from 0 at 1/(2m) to 1
/// at 1/m, the infinity cutoff falls from 1 at k to 0 at 2k.
class DensityCutoffs {
 public:
  DensityCutoffs(double m, double k);

  double m() const { return m_; }
  double k() const { return k_; }

  double zero_cutoff(double rho) const;
  double zero_cutoff_slope(double rho) const;
  double infinity_cutoff(double rho) const;
  double infinity_cutoff_slope(double rho) const;
  /// Product of the two cutoffs and its derivative.
  double combined(double rho) const;
  double combined_slope(double rho) const;

  /// Maxima of |slope| measured by dense sampling.
  double measured_zero_slope() const;
  double measured_infinity_slope() const;

 private:
  double m_;
  double k_;
};

struct CutoffApplication {
  VecField v;
  double max_phi_over_sqrt_rho = 0.0;      // bound sqrt(2m)
  double max_slope_times_sqrt_rho = 0.0;   // bound max(2 sqrt(m), 2 sqrt(2/k))
};

CutoffApplication apply_cutoffs(const Field& rho, const VecField& u, const DensityCutoffs& cutoffs);

struct GronwallResult {
  bool pass = false;
  double worst_margin = 0.0;  // min over pairs of rhs - f(t), scaled by max(1, |f(t)|)
  std::size_t worst_s = 0;
  std::size_t worst_t = 0;
};

/// Checks f(t) <= f(s) e^{a(t-s)} + int_s^t e^{a(t-tau)} b(tau) dtau for all
/// sample pairs s < t on a uniform grid of spacing `step`, with trapezoid
/// quadrature of the integral.
GronwallResult weak_gronwall(const std::vector<double>& f, double a, const std::vector<double>& b,
                             double step, double tolerance = 1e-9);

}  // namespace nlns
