#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "nlns/config.hpp"

namespace nlns {

using Json = nlohmann::ordered_json;

/// Fourier positivity of the truncated repulsive table plus the measured
/// cutoff constants.
Json kernel_report(int dim, int n, double half_length, double alpha);

/// Certification of the scalar toolkit for level n, cutoff levels m and k,
/// truncation level M and growth margin delta.
Json scalar_check(int n, double m, double k, double M, double delta);

/// FFT convolution against the direct sum for a random field and the
/// truncated kernel table.
Json oracle_convolve(int dim, int n, double half_length, double alpha, std::uint64_t seed);

/// Term-by-term comparison of the spectral right-hand side with the
/// finite-difference oracle on the configuration's initial state.
Json rhs_check(const RunConfig& config, double tolerance = 1e-4);

/// Energy budget residual of a diagnostics CSV.
Json budget_report(const std::string& csv_path);

/// The preset table.
Json presets_report();

}  // namespace nlns
