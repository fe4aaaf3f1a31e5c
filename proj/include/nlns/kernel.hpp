#pragma once

#include <vector>

#include "nlns/grid.hpp"
#include "nlns/spectral.hpp"

namespace nlns {

/// K(x) = |x|^-alpha + |x|^2/2, either part switchable.
struct KernelSpec {
  double alpha = 0.5;
  double half_length = 1.0;
  bool include_attraction = true;
  bool include_repulsion = true;

  /// Throws ValidationError unless 0 < alpha < 2 (when repulsion is on) and L > 0.
  void validate() const;
};

/// Radial cutoff equal to 1 on |x| <= L/2 and 0 on |x| >= L, joined by a
/// quintic smoothstep in s = (|x| - L/2)/(L/2).
class CutoffProfile {
 public:
  explicit CutoffProfile(double half_length);

  double half_length() const { return half_length_; }

  double value(double r) const;
  /// d/dr and d^2/dr^2 of the radial profile.
  double first_derivative(double r) const;
  double second_derivative(double r) const;
  /// Laplacian of the radial function in `dim` dimensions (r > 0).
  double laplacian(double r, int dim) const;

  /// |grad phi| <= gradient_constant() / L.
  static double gradient_constant();
  /// |laplacian phi| <= laplacian_constant(dim) / L^2, measured by dense sampling.
  static double laplacian_constant(int dim);

 private:
  double half_length_;
};

CutoffProfile build_cutoff(double half_length);

/// Samples of K_L and grad K_L at minimum-image displacements, with the
/// transforms needed for periodic convolution.
class KernelTable {
 public:
  KernelTable(ConvolutionTable potential, std::vector<ConvolutionTable> gradient, KernelSpec spec,
              double origin_value);

  const TorusGrid& grid() const { return potential_.grid(); }
  const KernelSpec& spec() const { return spec_; }
  const ConvolutionTable& potential() const { return potential_; }
  const ConvolutionTable& gradient(int axis) const { return gradient_[axis]; }
  /// Value stored in the cell containing the origin.
  double origin_value() const { return origin_value_; }

 private:
  ConvolutionTable potential_;
  std::vector<ConvolutionTable> gradient_;
  KernelSpec spec_;
  double origin_value_;
};

/// Mean of |x|^-alpha over the grid cell centred at the origin.
double singular_cell_average(int dim, double spacing, double alpha);

KernelTable build_kernel_table(const TorusGrid& grid, const KernelSpec& spec,
                               const CutoffProfile& cutoff);

/// Closed form -alpha(1-alpha)/r^(alpha+2) of the three-dimensional Laplacian
/// of |x|^-alpha, valid for 0 < alpha < 1.
double laplacian_of_singular_part(double alpha, double r);

/// Laplacian of |x|^2/2 in `dim` dimensions.
double laplacian_of_attraction(int dim);

struct PositivityReport {
  double alpha = 0.0;
  double half_length = 0.0;
  int n = 0;
  int dim = 0;
  double min_mode_value = 0.0;
  double max_mode_value = 0.0;
  bool positivity_pass = false;
  /// r * phi_L(r) / r^alpha non-increasing over the sampled radii.
  bool hypothesis_holds = false;
  double cutoff_c1 = 0.0;
  double cutoff_c2 = 0.0;
};

/// Discrete transform of the phi_L/|x|^alpha table (repulsion only).
PositivityReport fourier_positivity_check(const TorusGrid& grid, const KernelSpec& spec,
                                          const CutoffProfile& cutoff);

/// p* = 3p / (3 - (3 - alpha) p), dim must be 3.
double riesz_exponent(double p, double alpha, int dim);

/// rho * (grad K_L * rho), one component per axis.
VecField nonlocal_force(const Field& rho, const KernelTable& table);

/// Constant C with  int grad(K_L*rho).grad rho >= -C ||rho||_1^2,  assembled
/// from the cutoff constants.
double interaction_lower_bound_constant(int dim, double alpha, double half_length);

}  // namespace nlns
