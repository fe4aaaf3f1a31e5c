#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "nlns/error.hpp"
#include "nlns/renormalization.hpp"

using namespace nlns;

TEST_CASE("scalar functions at reference points") {
  CHECK(mv_F(0.0) == 0.0);
  CHECK(mv_F(1.0) == doctest::Approx(0.6931471805599453).epsilon(1e-15));
  CHECK(mv_psi(0.0) == 1.0);
  CHECK(mv_F_n(1.0, 5) == mv_F(1.0));
  const int n = 3;
  const double above = (n * 3.0 + 0.5 * (1.0 - n * n)) * std::log1p(n * n);
  CHECK(std::abs(mv_F_n(3.0, n) - above) <= 1e-12);
  CHECK(std::abs(mv_F_n(std::nextafter(3.0, 4.0), n) - mv_F_n(3.0, n)) <= 1e-12);
}

TEST_CASE("F_n lies below F and increases with n") {
  for (int n : {1, 2, 4, 8, 16}) {
    for (int i = 0; i <= 600; ++i) {
      const double z = std::pow(10.0, -4.0 + 10.0 * i / 600.0);
      CHECK(mv_F_n(z, n) <= mv_F(z) * (1.0 + 1e-15));
      if (n < 16) CHECK(mv_F_n(z, 2 * n) >= mv_F_n(z, n) * (1.0 - 1e-15));
    }
  }
}

TEST_CASE("convexity via second differences") {
  for (int n : {1, 4, 16}) {
    const double h = 1e-3;
    for (int i = 1; i < 20000; ++i) {
      const double z = i * h;
      CHECK(mv_F_n(z + h, n) - 2.0 * mv_F_n(z, n) + mv_F_n(z - h, n) >= -1e-12);
    }
  }
}

TEST_CASE("growth bounds") {
  const GrowthReport r16 = growth_bounds_check(16, 0.1);
  CHECK(r16.factor_four_holds);
  CHECK(r16.second_min > 0.0);
  CHECK(std::isfinite(r16.second_max));
  CHECK(r16.c_value > 0.0);
  CHECK(r16.c_slope > 0.0);
  // the factor-four bound at small level is reported, not asserted
  const GrowthReport r1 = growth_bounds_check(1, 0.1);
  CHECK(r1.worst_factor > 0.0);
  const int level = smallest_factor_four_level();
  CHECK(level >= 1);
  CHECK(level <= 16);
  const UniformGrowth u = uniform_growth_constants(32, 0.1);
  CHECK(std::isfinite(u.c_value));
  CHECK(std::isfinite(u.c_slope));
}

TEST_CASE("convex conjugate identity") {
  for (double z : {0.1, 1.0, 7.0}) {
    const auto q = convex_conjugate_identity([](double x) { return 0.5 * x * x; }, [](double x) { return x; }, z, 2.0);
    CHECK(q.conjugate_at_slope == doctest::Approx(0.5 * z * z));
    CHECK(q.bound == doctest::Approx(0.5 * z * z));
  }
  const auto c = convex_conjugate_identity([](double z) { return mv_F_n(z, 16); },
                                           [](double z) { return mv_F_n_prime(z, 16); }, 10.0);
  CHECK(c.conjugate_at_slope <= c.bound + 1e-10);
}

TEST_CASE("generalized Young inequality with the numeric conjugate") {
  std::mt19937_64 gen(31);
  for (int i = 0; i < 200; ++i) {
    const double a = std::pow(10.0, testing::uniform(gen, -3.0, 3.0));
    const double b = std::pow(10.0, testing::uniform(gen, -3.0, 2.0));
    CHECK(a * b <= mv_F_n(a, 16) + mv_F_n_conjugate_numeric(b, 16) + 1e-9 * std::max(1.0, a * b));
  }
  // the sup is attained at the point where the slope equals b
  const double z = 2.0;
  CHECK(mv_F_n_conjugate_numeric(mv_F_n_prime(z, 16), 16) ==
        doctest::Approx(z * mv_F_n_prime(z, 16) - mv_F_n(z, 16)).epsilon(1e-8));
}

TEST_CASE("velocity truncation") {
  const auto t = truncate_vector({3.0, 4.0, 0.0}, 2, 2.5);
  CHECK(t[0] == doctest::Approx(1.5));
  CHECK(t[1] == doctest::Approx(2.0));
  const auto same = truncate_vector({0.3, -0.4, 0.0}, 2, 2.5);
  CHECK(same[0] == 0.3);
  CHECK(same[1] == -0.4);

  std::mt19937_64 gen(37);
  for (int i = 0; i < 1000; ++i) {
    std::array<double, 3> a{}, b{};
    for (int k = 0; k < 3; ++k) {
      a[k] = testing::uniform(gen, -5.0, 5.0);
      b[k] = testing::uniform(gen, -5.0, 5.0);
    }
    const auto ta = truncate_vector(a, 3, 2.0), tb = truncate_vector(b, 3, 2.0);
    double lhs = 0.0, rhs = 0.0;
    for (int k = 0; k < 3; ++k) {
      lhs += (ta[k] - tb[k]) * (ta[k] - tb[k]);
      rhs += (a[k] - b[k]) * (a[k] - b[k]);
    }
    CHECK(std::sqrt(lhs) <= std::sqrt(rhs) + 1e-14);
  }
}

TEST_CASE("density cutoffs") {
  const DensityCutoffs cut(4.0, 8.0);
  const TorusGrid g(1, 32, 2.0);
  VecField u(g);
  for (std::size_t i = 0; i < g.size(); ++i) u[0][i] = std::sin(0.4 * i);

  const Field inside = Field::from_function(g, [](const auto& x) { return 1.0 + 0.1 * std::cos(x[0]); });
  const VecField same = apply_cutoffs(inside, u, cut).v;
  CHECK(testing::max_abs_diff(same[0], u[0]) == 0.0);

  const VecField zero = apply_cutoffs(Field(g, 0.1), u, cut).v;
  CHECK(zero[0].max_abs() == 0.0);

  const Field mixed = Field::from_function(g, [](const auto& x) { return 0.05 + 10.0 * std::exp(-x[0] * x[0]); });
  const VecField v = apply_cutoffs(mixed, u, cut).v;
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(v[0][i]) <= std::abs(u[0][i]));

  CHECK(cut.measured_infinity_slope() <= 2.0 / 8.0);
  // a quintic smoothstep over [1/(2m), 1/m] peaks at slope (15/8) * 2m, above 2m
  CHECK(cut.measured_zero_slope() == doctest::Approx(3.75 * 4.0).epsilon(1e-6));
}

TEST_CASE("weak Gronwall") {
  const std::size_t n = 101;
  const double step = 0.01;
  CHECK(weak_gronwall(std::vector<double>(n, 2.0), 0.0, std::vector<double>(n, 0.0), step).pass);
  CHECK(weak_gronwall(std::vector<double>(n, 2.0), 0.0, std::vector<double>(n, 0.0), step).worst_margin ==
        doctest::Approx(0.0));

  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = std::exp(0.7 * step * i);
  const GronwallResult eq = weak_gronwall(f, 0.7, std::vector<double>(n, 0.0), step);
  CHECK(eq.pass);
  CHECK(std::abs(eq.worst_margin) <= 1e-9);

  std::vector<double> grow(n);
  for (std::size_t i = 0; i < n; ++i) grow[i] = std::exp(2.0 * step * i);
  CHECK_FALSE(weak_gronwall(grow, 1.0, std::vector<double>(n, 0.0), step).pass);
  CHECK_THROWS_AS(weak_gronwall(f, 0.7, std::vector<double>(n, -1.0), step), ValidationError);
}
