#include "nlns/kernel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "nlns/error.hpp"

namespace nlns {
namespace {

double smoothstep(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
double smoothstep_d1(double s) { return 30.0 * s * s * (1.0 - s) * (1.0 - s); }
double smoothstep_d2(double s) { return 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s); }

double measure_laplacian_constant(int dim) {
  // L^2 |lap phi| = |4 S''(s) + (dim-1) 4 S'(s)/(1+s)| on s in [0,1].
  constexpr int samples = 200000;
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double s = static_cast<double>(i) / samples;
    const double v = 4.0 * smoothstep_d2(s) + (dim - 1) * 4.0 * smoothstep_d1(s) / (1.0 + s);
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

using Gauss = boost::math::quadrature::gauss<double, 32>;

}  // namespace

void KernelSpec::validate() const {
  if (!(half_length > 0.0)) throw ValidationError("kernel half length L must be positive");
  if (include_repulsion && !(alpha > 0.0 && alpha < 2.0))
    throw ValidationError("alpha must lie in (0,2)");
}

CutoffProfile::CutoffProfile(double half_length) : half_length_(half_length) {
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw ValidationError("cutoff half length L must be positive");
}

double CutoffProfile::value(double r) const {
  const double s = (r - 0.5 * half_length_) / (0.5 * half_length_);
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  return 1.0 - smoothstep(s);
}

double CutoffProfile::first_derivative(double r) const {
  const double s = (r - 0.5 * half_length_) / (0.5 * half_length_);
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return -smoothstep_d1(s) * 2.0 / half_length_;
}

double CutoffProfile::second_derivative(double r) const {
  const double s = (r - 0.5 * half_length_) / (0.5 * half_length_);
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return -smoothstep_d2(s) * 4.0 / (half_length_ * half_length_);
}

double CutoffProfile::laplacian(double r, int dim) const {
  return second_derivative(r) + (dim - 1) * first_derivative(r) / r;
}

double CutoffProfile::gradient_constant() { return 2.0 * smoothstep_d1(0.5); }

double CutoffProfile::laplacian_constant(int dim) {
  if (dim < 1 || dim > 3) throw ValidationError("dim must be 1, 2 or 3");
  static const std::array<double, 3> measured = {
      measure_laplacian_constant(1), measure_laplacian_constant(2), measure_laplacian_constant(3)};
  return measured[dim - 1];
}

CutoffProfile build_cutoff(double half_length) { return CutoffProfile(half_length); }

KernelTable::KernelTable(ConvolutionTable potential, std::vector<ConvolutionTable> gradient,
                         KernelSpec spec, double origin_value)
    : potential_(std::move(potential)),
      gradient_(std::move(gradient)),
      spec_(spec),
      origin_value_(origin_value) {}

double singular_cell_average(int dim, double spacing, double alpha) {
  const double a = 0.5 * spacing;
  switch (dim) {
    case 1:
      if (!(alpha < 1.0)) throw ValidationError("singular kernel not integrable in 1D");
      return std::pow(a, 1.0 - alpha) / (1.0 - alpha) / a;
    case 2: {
      // Split the quadrant [0,a]^2 along its diagonal; on each half put
      // y = x v so the radial singularity factors out as x^(1-alpha).
      const double inner = Gauss::integrate(
          [alpha](double v) { return std::pow(1.0 + v * v, -0.5 * alpha); }, 0.0, 1.0);
      const double quadrant = 2.0 * std::pow(a, 2.0 - alpha) / (2.0 - alpha) * inner;
      return quadrant / (a * a);
    }
    case 3: {
      // Three pyramids with apex at the origin, one per coordinate axis.
      const double inner = Gauss::integrate(
          [alpha](double v) {
            return Gauss::integrate(
                [alpha, v](double w) { return std::pow(1.0 + v * v + w * w, -0.5 * alpha); },
                0.0, 1.0);
          },
          0.0, 1.0);
      const double quadrant = 3.0 * std::pow(a, 3.0 - alpha) / (3.0 - alpha) * inner;
      return quadrant / (a * a * a);
    }
    default:
      throw ValidationError("dim must be 1, 2 or 3");
  }
}

KernelTable build_kernel_table(const TorusGrid& grid, const KernelSpec& spec,
                               const CutoffProfile& cutoff) {
  spec.validate();
  if (cutoff.half_length() != grid.half_length() || spec.half_length != grid.half_length())
    throw ValidationError("kernel and cutoff half length must match the grid");

  const int d = grid.dim();
  const double alpha = spec.alpha;
  const double origin =
      spec.include_repulsion ? singular_cell_average(d, grid.spacing(), alpha) : 0.0;

  Field pot(grid);
  std::vector<Field> grad(d, Field(grid));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.displacement(i);
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (r == 0.0) {
      pot[i] = origin;
      continue;
    }
    const double phi = cutoff.value(r);
    if (phi == 0.0) continue;  // outside the support, gradient vanishes too
    double k = 0.0;
    double dk = 0.0;
    if (spec.include_repulsion) {
      const double ra = std::pow(r, -alpha);
      k += ra;
      dk += -alpha * ra / r;
    }
    if (spec.include_attraction) {
      k += 0.5 * r * r;
      dk += r;
    }
    pot[i] = k * phi;
    const double radial = dk * phi + k * cutoff.first_derivative(r);
    for (int a = 0; a < d; ++a) grad[a][i] = radial * x[a] / r;
  }

  ConvolutionTable pot_table(std::move(pot));
  std::vector<ConvolutionTable> grad_tables;
  for (int a = 0; a < d; ++a) grad_tables.emplace_back(std::move(grad[a]));
  return KernelTable(std::move(pot_table), std::move(grad_tables), spec, origin);
}

double laplacian_of_singular_part(double alpha, double r) {
  if (alpha >= 1.0 && alpha < 2.0)
    throw ValidationError("distributional case: the Laplacian of |x|^-alpha has no pointwise "
                          "closed form for alpha >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0,1)");
  if (!(r > 0.0)) throw ValidationError("radius must be positive");
  return -alpha * (1.0 - alpha) / std::pow(r, alpha + 2.0);
}

double laplacian_of_attraction(int dim) {
  if (dim < 1 || dim > 3) throw ValidationError("dim must be 1, 2 or 3");
  return static_cast<double>(dim);
}

PositivityReport fourier_positivity_check(const TorusGrid& grid, const KernelSpec& spec,
                                          const CutoffProfile& cutoff) {
  KernelSpec rep = spec;
  rep.include_attraction = false;
  rep.include_repulsion = true;
  rep.validate();
  const double alpha = rep.alpha;
  const double origin = singular_cell_average(grid.dim(), grid.spacing(), alpha);
  const ConvolutionTable table = radial_table(grid, [&](double r) {
    return r == 0.0 ? origin : cutoff.value(r) * std::pow(r, -alpha);
  });

  PositivityReport rep_out;
  rep_out.alpha = alpha;
  rep_out.half_length = grid.half_length();
  rep_out.n = grid.n();
  rep_out.dim = grid.dim();
  double lo = table.spectrum()[0].real();
  double hi = lo;
  for (const auto& c : table.spectrum().data()) {
    lo = std::min(lo, c.real());
    hi = std::max(hi, c.real());
  }
  rep_out.min_mode_value = lo;
  rep_out.max_mode_value = hi;
  rep_out.positivity_pass = lo >= -1e-10 * hi;

  constexpr int samples = 4096;
  const double L = grid.half_length();
  bool monotone = true;
  double prev = std::pow(L / samples, 1.0 - alpha) * cutoff.value(L / samples);
  for (int i = 2; i <= samples; ++i) {
    const double r = L * i / samples;
    const double g = std::pow(r, 1.0 - alpha) * cutoff.value(r);
    if (g > prev * (1.0 + 1e-14)) {
      monotone = false;
      break;
    }
    prev = g;
  }
  rep_out.hypothesis_holds = monotone;
  rep_out.cutoff_c1 = CutoffProfile::gradient_constant();
  rep_out.cutoff_c2 = CutoffProfile::laplacian_constant(grid.dim());
  return rep_out;
}

double riesz_exponent(double p, double alpha, int dim) {
  if (dim != 3) throw ValidationError("riesz exponent map is defined for dim = 3");
  if (!(p > 0.0)) throw ValidationError("exponent p must be positive");
  const double denom = 3.0 - (3.0 - alpha) * p;
  if (!(denom > 0.0)) throw ValidationError("exponent out of range");
  return 3.0 * p / denom;
}

VecField nonlocal_force(const Field& rho, const KernelTable& table) {
  require_same_grid(rho.grid(), table.grid(), "nonlocal_force");
  std::vector<Field> comps;
  for (int a = 0; a < rho.grid().dim(); ++a) {
    Field c = convolve_periodic(rho, table.gradient(a));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= rho[i];
    comps.push_back(std::move(c));
  }
  return VecField(std::move(comps));
}

double interaction_lower_bound_constant(int dim, double alpha, double half_length) {
  // int grad(K_L*rho).grad rho = -iint lap(K_L)(x-y) rho(x) rho(y).
  // Attraction: lap(|x|^2 phi/2) = dim phi + 2 x.grad phi + |x|^2 lap(phi)/2
  //   <= dim + 2 C1 + C2/2  (|x| <= L on the support of grad phi).
  // Repulsion: the cross terms live on L/2 <= |x| <= L, where
  //   2 |grad |x|^-alpha| |grad phi| <= 2^(alpha+2) alpha C1 / L^(alpha+2)
  //   |x|^-alpha |lap phi|           <= 2^alpha C2 / L^(alpha+2);
  // the remaining phi lap|x|^-alpha part is a non-negative form.
  const double c1 = CutoffProfile::gradient_constant();
  const double c2 = CutoffProfile::laplacian_constant(dim);
  const double tail =
      (std::pow(2.0, alpha + 2.0) * alpha * c1 + std::pow(2.0, alpha) * c2) /
      std::pow(half_length, alpha + 2.0);
  return dim + 2.0 * c1 + 0.5 * c2 + tail;
}

}  // namespace nlns
