#include "nlns/reports.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nlns/dynamics.hpp"
#include "nlns/error.hpp"
#include "nlns/functionals.hpp"
#include "nlns/io.hpp"
#include "nlns/kernel.hpp"
#include "nlns/oracle.hpp"
#include "nlns/renormalization.hpp"
#include "nlns/spectral.hpp"

namespace nlns {
namespace {

double uniform_pm1(std::mt19937_64& gen) {
  return 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0;
}

// Sum of random low Fourier modes (1..3 per axis), scaled to max |value| = 1.
Field low_mode_field(const TorusGrid& grid, std::mt19937_64& gen) {
  const int d = grid.dim();
  const double pi = std::acos(-1.0);
  std::vector<double> coef(2 * 3 * d);
  for (auto& c : coef) c = uniform_pm1(gen);
  Field f = Field::from_function(grid, [&](const std::array<double, 3>& x) {
    double v = 0.0;
    for (int a = 0; a < d; ++a)
      for (int q = 1; q <= 3; ++q) {
        const double arg = q * pi * x[a] / grid.half_length();
        v += coef[(a * 3 + q - 1) * 2] * std::cos(arg) + coef[(a * 3 + q - 1) * 2 + 1] * std::sin(arg);
      }
    return v;
  });
  const double peak = f.max_abs();
  if (peak > 0.0) f *= 1.0 / peak;
  return f;
}

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

Json kernel_report(int dim, int n, double half_length, double alpha) {
  const TorusGrid grid(dim, n, half_length);
  const KernelSpec spec{alpha, half_length, false, true};
  const auto r = fourier_positivity_check(grid, spec, build_cutoff(half_length));
  Json j;
  j["alpha"] = r.alpha;
  j["L"] = r.half_length;
  j["n"] = r.n;
  j["dim"] = r.dim;
  j["min_mode_value"] = r.min_mode_value;
  j["max_mode_value"] = r.max_mode_value;
  j["positivity_pass"] = r.positivity_pass;
  j["radial_hypothesis_holds"] = r.hypothesis_holds;
  j["cutoff_C1"] = r.cutoff_c1;
  j["cutoff_C2"] = r.cutoff_c2;
  j["C_impl"] = interaction_lower_bound_constant(dim, alpha, half_length);
  return j;
}

Json scalar_check(int n, double m, double k, double M, double delta) {
  if (!(M > 0.0)) throw ValidationError("truncation level M must be positive");
  const GrowthReport g = growth_bounds_check(n, delta);
  Json j;
  j["n"] = n;
  j["delta"] = delta;
  j["growth"] = {{"C_value", g.c_value},
                 {"C_slope", g.c_slope},
                 {"factor_four_holds", g.factor_four_holds},
                 {"worst_factor", g.worst_factor},
                 {"second_derivative_min", g.second_min},
                 {"second_derivative_max", g.second_max},
                 {"z_max", g.z_max},
                 {"samples", g.samples}};
  j["smallest_factor_four_level"] = smallest_factor_four_level();

  const double knee = static_cast<double>(n);
  const double below = mv_F(knee);
  const double above = (knee * knee + 0.5 * (1.0 - knee * knee)) * std::log1p(knee * knee);
  j["knee_jump"] = std::abs(below - above);

  // F_n <= F and monotone in n on a log grid.
  bool below_f = true;
  bool monotone = true;
  for (int i = 0; i <= 2000; ++i) {
    const double z = std::pow(10.0, -6.0 + 12.0 * i / 2000.0);
    if (mv_F_n(z, n) > mv_F(z) * (1.0 + 1e-15)) below_f = false;
    if (mv_F_n(z, n + 1) < mv_F_n(z, n) * (1.0 - 1e-15)) monotone = false;
  }
  j["F_n_below_F"] = below_f;
  j["monotone_in_n"] = monotone;

  const auto conj = convex_conjugate_identity([n](double z) { return mv_F_n(z, n); },
                                              [n](double z) { return mv_F_n_prime(z, n); }, 10.0);
  j["conjugate_at_10"] = {{"value", conj.conjugate_at_slope},
                          {"bound", conj.bound},
                          {"holds", conj.conjugate_at_slope <= conj.bound + 1e-10}};

  const DensityCutoffs cut(m, k);
  const double zero_slope = cut.measured_zero_slope();
  const double inf_slope = cut.measured_infinity_slope();
  j["cutoffs"] = {{"m", m},
                  {"k", k},
                  {"zero_slope_measured", zero_slope},
                  {"zero_slope_bound", 2.0 * m},
                  {"zero_slope_within_bound", zero_slope <= 2.0 * m},
                  {"infinity_slope_measured", inf_slope},
                  {"infinity_slope_bound", 2.0 / k},
                  {"infinity_slope_within_bound", inf_slope <= 2.0 / k}};

  const auto t = truncate_vector({3.0, 4.0, 0.0}, 2, M);
  j["truncation"] = {{"M", M}, {"T_M(3,4)", {t[0], t[1]}}};
  return j;
}

Json oracle_convolve(int dim, int n, double half_length, double alpha, std::uint64_t seed) {
  const TorusGrid grid(dim, n, half_length);
  const KernelTable table = build_kernel_table(grid, KernelSpec{alpha, half_length, true, true},
                                               build_cutoff(half_length));
  std::mt19937_64 gen(seed);
  Field f(grid);
  for (double& v : f.data()) v = uniform_pm1(gen);
  const Field fast = convolve_periodic(f, table.potential());
  const Field slow = oracle::direct_convolve(f, table.potential().values());
  const double scale = std::max(slow.max_abs(), 1e-300);
  Json j;
  j["dim"] = dim;
  j["n"] = n;
  j["L"] = half_length;
  j["alpha"] = alpha;
  j["seed"] = seed;
  j["max_abs_difference"] = max_abs_diff(fast, slow);
  j["relative_difference"] = max_abs_diff(fast, slow) / scale;
  j["pass"] = max_abs_diff(fast, slow) / scale <= 1e-10;
  return j;
}

Json rhs_check(const RunConfig& config, double tolerance) {
  config.validate();
  RegularizationParams p = config.params;
  // A switched-off term is still checked, with unit coefficient.
  for (double* c : {&p.epsilon, &p.nu, &p.eta, &p.delta, &p.kappa, &p.r0, &p.r1})
    if (*c == 0.0) *c = 1.0;

  const TorusGrid grid(config.dim, config.n, p.half_length);
  const KernelTable kernel = build_kernel_table(
      grid, KernelSpec{p.alpha, p.half_length, true, true}, build_cutoff(p.half_length));
  std::mt19937_64 gen(config.seed == 0 ? 1 : config.seed);
  State state{0.0, Field(grid), VecField(grid)};
  state.rho = low_mode_field(grid, gen);
  state.rho *= 0.3;
  for (double& v : state.rho.data()) v += 1.0;
  for (int a = 0; a < grid.dim(); ++a) {
    Field u = low_mode_field(grid, gen);
    u *= 0.5;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] *= state.rho[i];
    state.momentum[a] = u;
  }

  Json j;
  j["dim"] = config.dim;
  j["n"] = config.n;
  j["tolerance"] = tolerance;
  Json terms = Json::object();
  bool all_pass = true;
  for (int t = 0; t < kTermCount; ++t) {
    const Term term = static_cast<Term>(t);
    const RhsResult spectral = rhs_term(state, p, kernel, term);
    const RhsResult fd = oracle::fd_rhs_term(state, p, kernel, term);
    double diff = max_abs_diff(spectral.drho, fd.drho);
    double scale = spectral.drho.max_abs();
    for (int a = 0; a < grid.dim(); ++a) {
      diff = std::max(diff, max_abs_diff(spectral.dmomentum[a], fd.dmomentum[a]));
      scale = std::max(scale, spectral.dmomentum[a].max_abs());
    }
    const double rel = scale > 0.0 ? diff / scale : diff;
    const bool pass = rel <= tolerance;
    all_pass = all_pass && pass;
    terms[term_name(term)] = {{"relative_discrepancy", rel}, {"scale", scale}, {"pass", pass}};
  }
  j["terms"] = terms;
  j["pass"] = all_pass;
  return j;
}

Json budget_report(const std::string& csv_path) {
  const auto records = read_diagnostics_csv(csv_path);
  const auto residual = energy_budget_residual(records);
  double worst = 0.0;
  std::size_t at = 0;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    if (std::abs(residual[i]) > worst) {
      worst = std::abs(residual[i]);
      at = i;
    }
  }
  Json j;
  j["records"] = records.size();
  j["max_abs_residual"] = worst;
  j["at_time"] = records[at].t;
  return j;
}

Json presets_report() {
  Json j = Json::array();
  for (const auto& p : preset_list()) j.push_back({{"name", p.name}, {"parameters", p.description}});
  return j;
}

}  // namespace nlns
