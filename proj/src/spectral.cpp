#include "nlns/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "nlns/error.hpp"

namespace nlns {
namespace {

// FFTW's planner is not thread-safe, executing a finished plan is. Plans are
// made once per shape with FFTW_ESTIMATE so that the chosen algorithm, and
// therefore every rounding, is the same from run to run.
struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

const PlanPair& plans_for(int dim, int n) {
  static std::map<std::pair<int, int>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto it = cache.find({dim, n});
  if (it != cache.end()) return it->second;

  int shape[3] = {n, n, n};
  std::size_t real_len = 1;
  for (int a = 0; a < dim; ++a) real_len *= static_cast<std::size_t>(n);
  const std::size_t complex_len = real_len / n * (n / 2 + 1);
  double* in = fftw_alloc_real(real_len);
  fftw_complex* out = fftw_alloc_complex(complex_len);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  p.r2c = fftw_plan_dft_r2c(dim, shape, in, out, flags);
  p.c2r = fftw_plan_dft_c2r(dim, shape, out, in, flags);
  fftw_free(in);
  fftw_free(out);
  if (!p.r2c || !p.c2r) throw NumericalError("FFT planning failed");
  return cache.emplace(std::make_pair(dim, n), p).first->second;
}

std::shared_ptr<const ModeTable> build_modes(const TorusGrid& grid) {
  auto t = std::make_shared<ModeTable>();
  const int n = grid.n();
  const int d = grid.dim();
  const int half = n / 2 + 1;
  t->half_last = half;
  t->count = grid.size() / n * half;
  t->index.resize(t->count);
  t->k.resize(t->count);
  t->k2.resize(t->count);
  t->nyquist.resize(t->count);
  t->dealias_keep.resize(t->count);
  t->parseval_weight.resize(t->count);
  const int band = n / 3;
  const double k0 = std::acos(-1.0) / grid.half_length();

  for (std::size_t m = 0; m < t->count; ++m) {
    std::array<int, 3> raw{0, 0, 0};
    std::size_t rest = m;
    raw[d - 1] = static_cast<int>(rest % half);
    rest /= half;
    for (int a = d - 2; a >= 0; --a) {
      raw[a] = static_cast<int>(rest % n);
      rest /= n;
    }
    std::array<int, 3> s{0, 0, 0};
    std::array<double, 3> k{0.0, 0.0, 0.0};
    unsigned char nyq = 0;
    bool keep = true;
    double k2 = 0.0;
    for (int a = 0; a < d; ++a) {
      s[a] = grid.signed_index(raw[a]);
      k[a] = k0 * s[a];
      k2 += k[a] * k[a];
      if (raw[a] == n / 2) nyq |= static_cast<unsigned char>(1u << a);
      if (std::abs(s[a]) > band) keep = false;
    }
    t->index[m] = s;
    t->k[m] = k;
    t->k2[m] = k2;
    t->nyquist[m] = nyq;
    t->dealias_keep[m] = keep ? 1 : 0;
    const int last = raw[d - 1];
    t->parseval_weight[m] = (last == 0 || last == n / 2) ? 1.0 : 2.0;
  }
  return t;
}

}  // namespace

std::shared_ptr<const ModeTable> mode_table(const TorusGrid& grid) {
  static std::mutex m;
  static std::map<std::tuple<int, int, double>, std::shared_ptr<const ModeTable>> cache;
  std::lock_guard<std::mutex> lock(m);
  const auto key = std::make_tuple(grid.dim(), grid.n(), grid.half_length());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto t = build_modes(grid);
  cache.emplace(key, t);
  return t;
}

Spectrum::Spectrum(const TorusGrid& grid)
    : grid_(grid), modes_(mode_table(grid)), coeffs_(modes_->count) {}

Spectrum forward(const Field& f) {
  const auto& grid = f.grid();
  Spectrum s(grid);
  const auto& p = plans_for(grid.dim(), grid.n());
  fftw_execute_dft_r2c(p.r2c, const_cast<double*>(f.data().data()),
                       reinterpret_cast<fftw_complex*>(s.data().data()));
  return s;
}

Field inverse(const Spectrum& s) {
  const auto& grid = s.grid();
  Field f(grid);
  // c2r overwrites its input.
  std::vector<Complex> scratch = s.data();
  const auto& p = plans_for(grid.dim(), grid.n());
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), f.data().data());
  f *= 1.0 / static_cast<double>(grid.size());
  return f;
}

Spectrum derive(const Spectrum& s, const std::array<int, 3>& orders) {
  const auto& modes = s.modes();
  const int d = s.grid().dim();
  unsigned char odd_mask = 0;
  int total = 0;
  for (int a = 0; a < d; ++a) {
    if (orders[a] < 0) throw ValidationError("derivative order must be non-negative");
    if (orders[a] % 2 == 1) odd_mask |= static_cast<unsigned char>(1u << a);
    total += orders[a];
  }
  Spectrum out(s.grid());
  // i^total as a complex unit.
  static const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex unit = ipow[total % 4];
  for (std::size_t m = 0; m < modes.count; ++m) {
    if (modes.nyquist[m] & odd_mask) {
      out[m] = 0.0;
      continue;
    }
    double mult = 1.0;
    for (int a = 0; a < d; ++a) {
      for (int o = 0; o < orders[a]; ++o) mult *= modes.k[m][a];
    }
    out[m] = unit * mult * s[m];
  }
  return out;
}

void dealias_inplace(Spectrum& s) {
  const auto& modes = s.modes();
  for (std::size_t m = 0; m < modes.count; ++m) {
    if (!modes.dealias_keep[m]) s[m] = 0.0;
  }
}

Field dealias(const Field& f) {
  Spectrum s = forward(f);
  dealias_inplace(s);
  return inverse(s);
}

Field spectral_derivative(const Field& f, int axis, int order) {
  if (order < 1 || order > 6) throw ValidationError("derivative order must lie in 1..6");
  if (axis < 0 || axis >= f.grid().dim())
    throw ValidationError("derivative axis " + std::to_string(axis) + " out of range");
  require_finite(f, "spectral_derivative input");
  std::array<int, 3> orders{0, 0, 0};
  orders[axis] = order;
  return inverse(derive(forward(f), orders));
}

Field derivative(const Field& f, const std::array<int, 3>& orders) {
  return inverse(derive(forward(f), orders));
}

VecField gradient(const Field& f) {
  const Spectrum s = forward(f);
  std::vector<Field> comps;
  for (int a = 0; a < f.grid().dim(); ++a) {
    std::array<int, 3> orders{0, 0, 0};
    orders[a] = 1;
    comps.push_back(inverse(derive(s, orders)));
  }
  return VecField(std::move(comps));
}

Field divergence(const VecField& v) {
  const auto& grid = v.grid();
  Spectrum acc(grid);
  for (int a = 0; a < v.dim(); ++a) {
    std::array<int, 3> orders{0, 0, 0};
    orders[a] = 1;
    const Spectrum da = derive(forward(v[a]), orders);
    for (std::size_t m = 0; m < acc.size(); ++m) acc[m] += da[m];
  }
  return inverse(acc);
}

Field laplacian(const Field& f) {
  Spectrum s = forward(f);
  const auto& modes = s.modes();
  for (std::size_t m = 0; m < modes.count; ++m) s[m] *= -modes.k2[m];
  return inverse(s);
}

double spectral_l2_norm(const Field& f) {
  const Spectrum s = forward(f);
  const auto& modes = s.modes();
  double acc = 0.0;
  for (std::size_t m = 0; m < modes.count; ++m) acc += modes.parseval_weight[m] * std::norm(s[m]);
  const auto& grid = f.grid();
  return std::sqrt(acc * grid.cell_volume() / static_cast<double>(grid.size()));
}

double l2_norm(const Field& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += v * v;
  return std::sqrt(acc * f.grid().cell_volume());
}

ConvolutionTable::ConvolutionTable(Field values)
    : values_(std::move(values)), spectrum_(forward(values_)) {
  const double w = values_.grid().cell_volume();
  for (auto& c : spectrum_.data()) c *= w;
}

ConvolutionTable displacement_table(
    const TorusGrid& grid, const std::function<double(const std::array<double, 3>&)>& fn) {
  Field v(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = fn(grid.displacement(i));
  return ConvolutionTable(std::move(v));
}

ConvolutionTable radial_table(const TorusGrid& grid, const std::function<double(double)>& fn) {
  return displacement_table(grid, [&](const std::array<double, 3>& x) {
    return fn(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  });
}

Field convolve_periodic(const Field& f, const ConvolutionTable& table) {
  require_same_grid(f.grid(), table.grid(), "convolve_periodic");
  Spectrum s = forward(f);
  const auto& t = table.spectrum();
  for (std::size_t m = 0; m < s.size(); ++m) s[m] *= t[m];
  return inverse(s);
}

double bump_profile(double s) {
  const double a = std::abs(s);
  if (a >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - a * a));
}

Field mollify(const Field& f, double width) {
  const auto& grid = f.grid();
  if (!(width > 0.0)) throw ValidationError("mollifier width must be positive");
  if (width >= grid.half_length())
    throw ValidationError("mollifier width must be smaller than L so its support fits the torus");

  const int d = grid.dim();
  const int n = grid.n();
  const double h = grid.spacing();
  const int reach = static_cast<int>(std::floor(width / h));

  struct Tap {
    std::array<int, 3> offset;
    double weight;
  };
  std::vector<Tap> taps;
  double total = 0.0;
  const int lo = -reach;
  const int hi_y = d >= 2 ? reach : 0;
  const int hi_z = d >= 3 ? reach : 0;
  for (int a = lo; a <= reach; ++a) {
    for (int b = (d >= 2 ? lo : 0); b <= hi_y; ++b) {
      for (int c = (d >= 3 ? lo : 0); c <= hi_z; ++c) {
        const double r = h * std::sqrt(double(a) * a + double(b) * b + double(c) * c);
        const double w = bump_profile(r / width);
        if (w > 0.0) {
          taps.push_back({{a, b, c}, w});
          total += w;
        }
      }
    }
  }
  for (auto& t : taps) t.weight /= total;

  const double direct_cost = static_cast<double>(taps.size()) * static_cast<double>(grid.size());
  if (direct_cost <= 6.0e7) {
    // Direct stencil: non-negativity of the output is exact.
    Field out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto idx = grid.unravel(i);
      double acc = 0.0;
      for (const auto& t : taps) {
        std::array<int, 3> src{0, 0, 0};
        for (int ax = 0; ax < d; ++ax) src[ax] = ((idx[ax] - t.offset[ax]) % n + n) % n;
        acc += t.weight * f[grid.ravel(src)];
      }
      out[i] = acc;
    }
    return out;
  }

  Field kernel(grid);
  const double inv_cell = 1.0 / grid.cell_volume();
  for (const auto& t : taps) {
    std::array<int, 3> idx{0, 0, 0};
    for (int ax = 0; ax < d; ++ax) idx[ax] = (t.offset[ax] % n + n) % n;
    kernel[grid.ravel(idx)] = t.weight * inv_cell;
  }
  Field out = convolve_periodic(f, ConvolutionTable(std::move(kernel)));
  // Rounding in the transform can leave values of order 1e-17 below zero
  // where the input vanished identically.
  bool input_nonneg = f.min() >= 0.0;
  if (input_nonneg) {
    for (double& v : out.data()) v = std::max(v, 0.0);
  }
  return out;
}

}  // namespace nlns
