#pragma once

#include <array>
#include <vector>

#include "nlns/dynamics.hpp"
#include "nlns/grid.hpp"
#include "nlns/kernel.hpp"
#include "nlns/spectral.hpp"

// Independent reference implementations used by tests and by `rhs-check`.
// Nothing here touches FFTs.
namespace nlns::oracle {

/// out[i] = sum_j table[i - j] f[j] h^dim by direct O(N^2) summation.
Field direct_convolve(const Field& f, const Field& table_values);

/// Weights c_1..c_p of the order-2p central first-derivative stencil
/// f'(x) ~ sum_j c_j (f(x+jh) - f(x-jh)) / h.
std::vector<double> first_derivative_weights(int half_width);

/// Weights d_0..d_p of the order-2p central second-derivative stencil
/// f''(x) ~ (d_0 f(x) + sum_j d_j (f(x+jh) + f(x-jh))) / h^2.
std::vector<double> second_derivative_weights(int half_width);

/// Periodic twelfth-order finite differences.
Field fd_derivative(const Field& f, int axis);
Field fd_second_derivative(const Field& f, int axis);
VecField fd_gradient(const Field& f);
Field fd_divergence(const VecField& v);
Field fd_laplacian(const Field& f);

/// One right-hand-side term evaluated with finite differences and direct
/// convolution, without dealiasing.
RhsResult fd_rhs_term(const State& state, const RegularizationParams& params,
                      const KernelTable& kernel, Term term);

/// O(N^2) reference for iint w(x - y) rho(x) rho(y) with w given as a table.
double direct_pair_integral(const Field& rho, const Field& table_values);

}  // namespace nlns::oracle
