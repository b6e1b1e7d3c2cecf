#include <doctest.h>

#include <cmath>

#include "gqn/scaling.hpp"

using namespace gqn;

TEST_CASE("solve_delta matches the pure-power closed form") {
  CHECK(solve_delta(VarianceFunction::power(0.5), 10.0) ==
        doctest::Approx(0.01).epsilon(1e-10));
  CHECK(solve_delta(VarianceFunction::power(0.75), 16.0) ==
        doctest::Approx(std::pow(16.0, -4.0)).epsilon(1e-10));
  for (double lambda : {0.25, 0.5, 0.75})
    for (double x : geometric_grid(1e-3, 1e3, 20)) {
      const double d = solve_delta(VarianceFunction::power(lambda), x);
      CHECK(d == doctest::Approx(std::pow(x, -1.0 / (1.0 - lambda))).epsilon(1e-10));
    }
}

TEST_CASE("solve_delta residual < 1e-12 for every shipped family") {
  const auto check_on = [](const VarianceFunction& vf, double x_lo, double x_hi) {
    for (double x : geometric_grid(x_lo, x_hi, 100)) {
      const double d = solve_delta(vf, x);
      CHECK(std::fabs(x * d / sigma_eval(vf, d) - 1.0) < 1e-12);
    }
  };
  check_on(VarianceFunction::power(0.3), 1e-4, 1e4);
  check_on(VarianceFunction::power_sum({0.6, 1.4}), 1e-4, 1e4);
  // d/sigma(d) -> 1 as d -> 0 for the integrated-OU family, so the
  // equation is only solvable for x < 1 (heavy traffic)
  check_on(VarianceFunction::integrated_ou(), 1e-4, 0.9);
}

TEST_CASE("check_delta_rv") {
  CHECK(check_delta_rv(VarianceFunction::power(0.5), Regime::light) ==
        doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(check_delta_rv(VarianceFunction::power(0.75), Regime::light) ==
        doctest::Approx(-4.0).epsilon(1e-6));
  // small-delta branch is governed by lambda = 0.3: index 1/(0.3-1)
  CHECK(check_delta_rv(VarianceFunction::power_sum({0.6, 1.4}), Regime::light) ==
        doctest::Approx(-10.0 / 7.0).epsilon(1e-3));
  // heavy traffic probes x -> 0, delta -> infinity: alpha = 0.7 governs
  CHECK(check_delta_rv(VarianceFunction::power_sum({0.6, 1.4}), Regime::heavy) ==
        doctest::Approx(1.0 / (0.7 - 1.0)).epsilon(1e-3));
}

TEST_CASE("scale_factors") {
  const auto vf = VarianceFunction::power(0.5);
  const auto spec = NetworkSpec::single_node({1.0, 1.0}, Regime::light);
  const auto sf = scale_factors(spec, vf, 10.0);
  CHECK(sf.time_scale[0] == doctest::Approx(0.01).epsilon(1e-10));
  CHECK(sf.space_scale[0] == doctest::Approx(0.1).epsilon(1e-10));

  // r * delta = sigma(delta) for every family
  for (const auto& f : {VarianceFunction::power_sum({0.6, 1.4}),
                        VarianceFunction::integrated_ou()}) {
    const auto s = scale_factors(NetworkSpec::single_node({2.0, -1.0}, Regime::heavy),
                                 f, 10.0);
    CHECK(s.time_scale[0] * 2.0 * std::pow(10.0, -1.0) ==
          doctest::Approx(s.space_scale[0]).epsilon(1e-12));
  }

  // faster rate -> smaller time scale
  NetworkSpec three;
  three.n = 3;
  three.P = zero_matrix(3);
  three.P[0][1] = 0.4;
  three.P[0][2] = 0.6;
  three.rates = {{1.0, 1.2}, {1.0, 1.1}, {1.0, 1.0}};
  three.regime = Regime::light;
  const auto s3 = scale_factors(three, vf, 100.0);
  CHECK(s3.time_scale[0] < s3.time_scale[1]);
  CHECK(s3.time_scale[1] < s3.time_scale[2]);
}

TEST_CASE("pstar_prelimit") {
  const auto vf = VarianceFunction::power(0.5);

  NetworkSpec tandem;
  tandem.n = 2;
  tandem.P = zero_matrix(2);
  tandem.P[0][1] = 0.5;
  tandem.rates = {{1.0, 1.0}, {1.0, 1.0}};
  tandem.regime = Regime::light;
  for (double u : {10.0, 1000.0})
    CHECK(pstar_prelimit(tandem, vf, u)[0][1] == doctest::Approx(0.5).epsilon(1e-12));

  // kappa*lambda = 1 at lambda = 0.5: limit entry p * ratio
  tandem.rates = {{1.0, 1.0}, {0.25, 1.0}};
  for (double u : {10.0, 1000.0})
    CHECK(pstar_prelimit(tandem, vf, u)[0][1] ==
          doctest::Approx(0.125).epsilon(1e-10));

  // separating rates: off-diagonals vanish as u grows
  NetworkSpec split;
  split.n = 3;
  split.P = zero_matrix(3);
  split.P[0][1] = 0.4;
  split.P[0][2] = 0.6;
  split.rates = {{1.0, 2.0}, {1.0, 1.1}, {1.0, 1.0}};
  split.regime = Regime::light;
  double prev = 1e300;
  for (double u : {10.0, 100.0, 1000.0, 10000.0}) {
    const auto m = pstar_prelimit(split, vf, u);
    const double mx = std::max(m[0][1], m[0][2]);
    CHECK(mx < prev);
    prev = mx;
  }
  CHECK(prev < 1e-2);
}
