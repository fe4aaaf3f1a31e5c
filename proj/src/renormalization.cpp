#include "nlns/renormalization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlns/error.hpp"

namespace nlns {
namespace {

double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double smoothstep_slope(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return 30.0 * s * s * (1.0 - s) * (1.0 - s);
}

void require_level(int n) {
  if (n < 1) throw ValidationError("approximation level n must be at least 1");
}

std::vector<double> log_grid(double z_max, std::size_t samples) {
  std::vector<double> z;
  z.reserve(samples + 1);
  z.push_back(0.0);
  const double lo = std::log(1e-6);
  const double hi = std::log(z_max);
  for (std::size_t i = 0; i < samples; ++i)
    z.push_back(std::exp(lo + (hi - lo) * static_cast<double>(i) / (samples - 1)));
  return z;
}

}  // namespace

double mv_F(double z) {
  const double s = z * z;
  return 0.5 * (1.0 + s) * std::log1p(s);
}

double mv_F_prime(double z) { return z * mv_psi(z); }

double mv_psi(double z) { return 1.0 + std::log1p(z * z); }

double mv_F_n(double z, int n) {
  require_level(n);
  if (z <= n) return mv_F(z);
  const double nn = n;
  return (nn * z + 0.5 * (1.0 - nn * nn)) * std::log1p(z * z);
}

double mv_F_n_prime(double z, int n) { return z * mv_psi_n(z, n); }

double mv_psi_n(double z, int n) {
  require_level(n);
  if (z <= n) return mv_psi(z);
  const double nn = n;
  return nn / z * std::log1p(z * z) + (2.0 * nn * z + 1.0 - nn * nn) / (1.0 + z * z);
}

double mv_F_n_second(double z, int n) {
  require_level(n);
  const double s = z * z;
  if (z <= n) return 1.0 + std::log1p(s) + 2.0 * s / (1.0 + s);
  const double nn = n;
  const double q = nn * nn - 1.0;
  return 2.0 * nn * z / (1.0 + s) + (q * s + 4.0 * nn * z - q) / ((1.0 + s) * (1.0 + s));
}

GrowthReport growth_bounds_check(int n, double delta, double z_max, std::size_t samples) {
  require_level(n);
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0,1)");
  GrowthReport r;
  r.n = n;
  r.exponent_margin = delta;
  r.z_max = z_max;
  r.second_min = std::numeric_limits<double>::infinity();
  r.factor_four_holds = true;
  const auto zs = log_grid(z_max, samples);
  r.samples = zs.size();
  for (double z : zs) {
    const double fn = mv_F_n(z, n);
    const double fp = mv_F_n_prime(z, n);
    const double f2 = mv_F_n_second(z, n);
    r.second_min = std::min(r.second_min, f2);
    r.second_max = std::max(r.second_max, f2);
    if (z == 0.0) continue;
    r.c_value = std::max(r.c_value, fn / std::pow(z, 1.0 + delta));
    r.c_slope = std::max(r.c_slope, fp / std::pow(z, delta));
    if (fn > 0.0) {
      const double ratio = z * fp / fn;
      r.worst_factor = std::max(r.worst_factor, ratio);
      if (z * fp > 4.0 * fn * (1.0 + 1e-12)) r.factor_four_holds = false;
    }
  }
  return r;
}

int smallest_factor_four_level(int n_max, double z_max) {
  for (int n = 1; n <= n_max; ++n) {
    if (growth_bounds_check(n, 0.5, z_max).factor_four_holds) return n;
  }
  return -1;
}

UniformGrowth uniform_growth_constants(int n_max, double delta, double z_max) {
  UniformGrowth g;
  const auto zs = log_grid(z_max, 20001);
  for (int n = 1; n <= n_max; ++n) {
    for (double z : zs) {
      g.c_value = std::max(g.c_value, mv_F_n(z, n) / (1.0 + std::pow(z, 2.0 + delta)));
      g.c_slope = std::max(g.c_slope, mv_F_n_prime(z, n) / (1.0 + std::pow(z, 1.0 + delta)));
    }
  }
  return g;
}

ConjugateValue convex_conjugate_identity(const std::function<double(double)>& f,
                                         const std::function<double(double)>& f_prime, double z,
                                         double a) {
  ConjugateValue v;
  v.conjugate_at_slope = z * f_prime(z) - f(z);
  v.bound = (a - 1.0) * f(z);
  return v;
}

double mv_F_n_conjugate_numeric(double b, int n) {
  require_level(n);
  b = std::abs(b);  // F_n extended evenly, so its conjugate is even too
  if (b == 0.0) return 0.0;
  auto objective = [&](double z) { return b * z - mv_F_n(z, n); };

  // Coarse log grid on [1e-8, 1e12] locates the bracket of the maximum.
  constexpr int kCoarse = 2000;
  const double lo = std::log(1e-8);
  const double hi = std::log(1e12);
  double best_z = 0.0;
  double best = 0.0;  // objective(0) = 0
  int best_i = -1;
  std::vector<double> zs(kCoarse);
  for (int i = 0; i < kCoarse; ++i) {
    zs[i] = std::exp(lo + (hi - lo) * i / (kCoarse - 1));
    const double v = objective(zs[i]);
    if (v > best) {
      best = v;
      best_z = zs[i];
      best_i = i;
    }
  }
  double left = best_i <= 0 ? 0.0 : zs[best_i - 1];
  double right = best_i < 0 ? zs[0] : (best_i + 1 < kCoarse ? zs[best_i + 1] : zs[best_i]);

  // Golden-section refinement; the objective is concave.
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = right - g * (right - left);
  double x2 = left + g * (right - left);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 200 && right - left > 1e-15 * std::max(1.0, right); ++it) {
    if (f1 < f2) {
      left = x1;
      x1 = x2;
      f1 = f2;
      x2 = left + g * (right - left);
      f2 = objective(x2);
    } else {
      right = x2;
      x2 = x1;
      f2 = f1;
      x1 = right - g * (right - left);
      f1 = objective(x1);
    }
  }
  (void)best_z;
  return std::max({best, f1, f2});
}

std::array<double, 3> truncate_vector(const std::array<double, 3>& v, int dim, double M) {
  if (!(M > 0.0)) throw ValidationError("truncation level M must be positive");
  double n2 = 0.0;
  for (int a = 0; a < dim; ++a) n2 += v[a] * v[a];
  const double norm = std::sqrt(n2);
  if (norm <= M) return v;
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) out[a] = M * v[a] / norm;
  return out;
}

VecField truncate_velocity(const VecField& u, double M) {
  if (!(M > 0.0)) throw ValidationError("truncation level M must be positive");
  VecField out = u;
  const int d = u.dim();
  for (std::size_t i = 0; i < u.grid().size(); ++i) {
    std::array<double, 3> v{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) v[a] = u[a][i];
    const auto t = truncate_vector(v, d, M);
    for (int a = 0; a < d; ++a) out[a][i] = t[a];
  }
  return out;
}

DensityCutoffs::DensityCutoffs(double m, double k) : m_(m), k_(k) {
  if (!(m > 0.0) || !(k > 0.0)) throw ValidationError("cutoff levels m and k must be positive");
}

double DensityCutoffs::zero_cutoff(double rho) const {
  // rises over [1/(2m), 1/m], an interval of length 1/(2m)
  return smoothstep((rho - 0.5 / m_) * 2.0 * m_);
}

double DensityCutoffs::zero_cutoff_slope(double rho) const {
  return smoothstep_slope((rho - 0.5 / m_) * 2.0 * m_) * 2.0 * m_;
}

double DensityCutoffs::infinity_cutoff(double rho) const {
  return 1.0 - smoothstep((rho - k_) / k_);
}

double DensityCutoffs::infinity_cutoff_slope(double rho) const {
  return -smoothstep_slope((rho - k_) / k_) / k_;
}

double DensityCutoffs::combined(double rho) const { return zero_cutoff(rho) * infinity_cutoff(rho); }

double DensityCutoffs::combined_slope(double rho) const {
  return zero_cutoff_slope(rho) * infinity_cutoff(rho) + zero_cutoff(rho) * infinity_cutoff_slope(rho);
}

double DensityCutoffs::measured_zero_slope() const {
  constexpr int samples = 100000;
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double rho = 0.5 / m_ + (0.5 / m_) * i / samples;
    worst = std::max(worst, std::abs(zero_cutoff_slope(rho)));
  }
  return worst;
}

double DensityCutoffs::measured_infinity_slope() const {
  constexpr int samples = 100000;
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double rho = k_ + k_ * i / samples;
    worst = std::max(worst, std::abs(infinity_cutoff_slope(rho)));
  }
  return worst;
}

CutoffApplication apply_cutoffs(const Field& rho, const VecField& u, const DensityCutoffs& cutoffs) {
  require_same_grid(rho.grid(), u.grid(), "apply_cutoffs");
  CutoffApplication out{u, 0.0, 0.0};
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double r = rho[i];
    const double phi = cutoffs.combined(r);
    for (int a = 0; a < u.dim(); ++a) out.v[a][i] = phi * u[a][i];
    if (r > 0.0) {
      out.max_phi_over_sqrt_rho = std::max(out.max_phi_over_sqrt_rho, phi / std::sqrt(r));
      out.max_slope_times_sqrt_rho =
          std::max(out.max_slope_times_sqrt_rho, std::abs(cutoffs.combined_slope(r)) * std::sqrt(r));
    }
  }
  return out;
}

GronwallResult weak_gronwall(const std::vector<double>& f, double a, const std::vector<double>& b,
                             double step, double tolerance) {
  if (f.size() != b.size()) throw ValidationError("weak_gronwall: f and b differ in length");
  if (f.size() < 2) throw ValidationError("weak_gronwall: need at least two samples");
  if (!(a >= 0.0)) throw ValidationError("weak_gronwall: a must be non-negative");
  if (!(step > 0.0)) throw ValidationError("weak_gronwall: sample spacing must be positive");
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] < 0.0)
      throw ValidationError("weak_gronwall: b is negative at sample " + std::to_string(i));
  }

  // B_i = trapezoid of e^{-a tau} b(tau) on [0, t_i], so that
  // int_s^t e^{a(t-tau)} b = e^{a t} (B_t - B_s).
  const std::size_t n = f.size();
  std::vector<double> cum(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double g0 = std::exp(-a * step * (i - 1)) * b[i - 1];
    const double g1 = std::exp(-a * step * i) * b[i];
    cum[i] = cum[i - 1] + 0.5 * step * (g0 + g1);
  }

  GronwallResult r;
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      const double tt = step * t;
      const double bound =
          f[s] * std::exp(a * step * (t - s)) + std::exp(a * tt) * (cum[t] - cum[s]);
      const double margin = (bound - f[t]) / std::max(1.0, std::abs(f[t]));
      if (margin < r.worst_margin) {
        r.worst_margin = margin;
        r.worst_s = s;
        r.worst_t = t;
      }
    }
  }
  r.pass = r.worst_margin >= -tolerance;
  return r;
}

}  // namespace nlns
