#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "nlns/grid.hpp"

namespace nlns {

using Complex = std::complex<double>;

/// Per-grid table describing every retained mode of a real-to-complex
/// transform. The last axis only stores indices 0..n/2.
struct ModeTable {
  std::size_t count = 0;
  int half_last = 0;                        // n/2 + 1
  std::vector<std::array<int, 3>> index;    // signed DFT index per axis
  std::vector<std::array<double, 3>> k;     // angular wavevector
  std::vector<double> k2;                   // |k|^2
  std::vector<unsigned char> nyquist;       // bit a set when axis a sits at n/2
  std::vector<unsigned char> dealias_keep;  // 1 when inside the 2/3 band
  std::vector<double> parseval_weight;      // 1 or 2 (conjugate partner not stored)
};

/// Cached mode table for a grid; safe to call from several threads.
std::shared_ptr<const ModeTable> mode_table(const TorusGrid& grid);

/// Half-complex Fourier coefficients of a real field (unnormalized DFT).
class Spectrum {
 public:
  explicit Spectrum(const TorusGrid& grid);

  const TorusGrid& grid() const { return grid_; }
  const ModeTable& modes() const { return *modes_; }
  std::size_t size() const { return coeffs_.size(); }

  std::vector<Complex>& data() { return coeffs_; }
  const std::vector<Complex>& data() const { return coeffs_; }
  Complex& operator[](std::size_t m) { return coeffs_[m]; }
  const Complex& operator[](std::size_t m) const { return coeffs_[m]; }

 private:
  TorusGrid grid_;
  std::shared_ptr<const ModeTable> modes_;
  std::vector<Complex> coeffs_;
};

Spectrum forward(const Field& f);
/// Inverse transform including the 1/N normalization.
Field inverse(const Spectrum& s);

/// Multiplies by prod_a (i k_a)^orders[a]. Modes at the Nyquist index of an
/// axis with odd order are zeroed.
Spectrum derive(const Spectrum& s, const std::array<int, 3>& orders);

/// Zeroes every mode outside |j| <= n/3 on some axis.
void dealias_inplace(Spectrum& s);
Field dealias(const Field& f);

/// Fourier-collocation derivative of order 1..6 along one axis.
Field spectral_derivative(const Field& f, int axis, int order);

Field derivative(const Field& f, const std::array<int, 3>& orders);
VecField gradient(const Field& f);
Field divergence(const VecField& v);
Field laplacian(const Field& f);

/// L2 norm computed from the Fourier coefficients via Parseval.
double spectral_l2_norm(const Field& f);
double l2_norm(const Field& f);

/// A field indexed by displacement (index 0 is the zero displacement, the
/// rest follow the minimum-image convention) together with the transform of
/// values * h^dim, ready for periodic convolution.
class ConvolutionTable {
 public:
  explicit ConvolutionTable(Field values);

  const TorusGrid& grid() const { return values_.grid(); }
  const Field& values() const { return values_; }
  const Spectrum& spectrum() const { return spectrum_; }

 private:
  Field values_;
  Spectrum spectrum_;
};

/// Table of fn(displacement) at every minimum-image displacement.
ConvolutionTable displacement_table(
    const TorusGrid& grid, const std::function<double(const std::array<double, 3>&)>& fn);

/// Table of fn(|displacement|).
ConvolutionTable radial_table(const TorusGrid& grid, const std::function<double(double)>& fn);

/// out[i] = sum_j table[i - j] f[j] h^dim, computed with FFTs.
Field convolve_periodic(const Field& f, const ConvolutionTable& table);

/// Convolution with a periodized smooth bump of unit discrete mass and
/// support radius `width`. Throws ValidationError when width >= L.
Field mollify(const Field& f, double width);

/// exp(-1/(1-s^2)) for |s| < 1, else 0.
double bump_profile(double s);

}  // namespace nlns
