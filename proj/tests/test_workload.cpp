#include <doctest.h>

#include <cmath>

#include "gqn/workload.hpp"

using namespace gqn;

namespace {

SamplePath linear_path(double t0, double dt, std::size_t n, double slope) {
  SamplePath p;
  p.t0 = t0;
  p.dt = dt;
  p.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.values[i] = slope * p.time_at(i);
  return p;
}

}  // namespace

TEST_CASE("reflect_truncated basics") {
  // J = 0: running minimum is attained at s = t, so X = 0
  const auto zero = linear_path(-2.0, 0.5, 13, 0.0);
  const auto xz = reflect_truncated(zero, 1.0, 1.0);
  for (double v : xz.values) CHECK(v == 0.0);
  CHECK(xz.t0 == 0.0);

  // J(t) = 2t, drift 1, gain 1, truncation at 0: M = t increasing, X(t) = t
  const auto ramp = linear_path(0.0, 0.25, 9, 2.0);
  const auto xr = reflect_truncated(ramp, 1.0, 1.0, 0.0);
  for (std::size_t i = 0; i < xr.size(); ++i)
    CHECK(xr.values[i] == doctest::Approx(xr.time_at(i)));

  // grid that misses 0
  auto off = linear_path(-1.1, 0.25, 10, 1.0);
  CHECK_THROWS_AS(reflect_truncated(off, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("plan_truncation") {
  UniformBoundFit fit;
  fit.gamma0 = 0.5;
  fit.gamma_inf = 0.5;
  fit.frakC = 0.5;
  fit.fraka = 1.0;

  const auto p4 = plan_truncation(fit, 1.0, 1e-4);
  const auto p6 = plan_truncation(fit, 1.0, 1e-6);
  CHECK(p4.tail_bound < 1e-4);
  CHECK(p6.T_past > p4.T_past);  // tail integral decreasing in the horizon

  // heavier dependence needs a longer horizon
  UniformBoundFit heavy = fit;
  heavy.gamma_inf = 0.65;
  CHECK(plan_truncation(heavy, 1.0, 1e-4).T_past > p4.T_past);

  // blow-up: gamma_inf near 1 with a tiny target exceeds the horizon cap
  UniformBoundFit extreme = fit;
  extreme.gamma_inf = 0.995;
  extreme.frakC = 10.0;
  CHECK_THROWS_WITH_AS(plan_truncation(extreme, 5.0, 1e-10),
                       doctest::Contains("larger drift"), std::runtime_error);
}

TEST_CASE("compute_Q") {
  const auto x1 = linear_path(0.0, 0.5, 5, 1.0);
  const auto x2 = linear_path(0.0, 0.5, 5, 3.0);

  CHECK(compute_Q({x1}, zero_matrix(1))[0].values == x1.values);

  Matrix tandem = zero_matrix(2);
  tandem[0][1] = 1.0;
  const auto q = compute_Q({x1, x2}, tandem);
  CHECK(q[0].values == x1.values);
  for (std::size_t k = 0; k < q[1].size(); ++k)
    CHECK(q[1].values[k] == doctest::Approx(x2.values[k] - x1.values[k]));

  // grid mismatch
  auto other = linear_path(0.5, 0.5, 5, 1.0);
  CHECK_THROWS_AS(compute_Q({x1, other}, tandem), std::invalid_argument);
}

TEST_CASE("compute_Q_scaled: single node reflected-Brownian marginal") {
  const auto vf = VarianceFunction::power(0.5);
  const auto spec = NetworkSpec::single_node({1.0, 1.0}, Regime::light);
  const int R = 3000;
  double mean = 0;
  for (int r = 0; r < R; ++r) {
    const auto ws = compute_Q_scaled(spec, vf, 100.0, 0.1, 0.002, 12.0,
                                     SeedSpec{2024, std::uint64_t(r), 0});
    mean += ws.q[0].value_at(0.0);
    CHECK(ws.q[0].values == ws.xbar[0].values);  // single node: Q = X
  }
  mean /= R;
  // stationary mean 1/2; allowance covers MC noise and sup-discretization bias
  CHECK(std::fabs(mean - 0.5) < 0.05);
}

TEST_CASE("compute_Q_scaled: network invariants") {
  const auto vf = VarianceFunction::power(0.5);
  NetworkSpec spec;
  spec.n = 3;
  spec.P = zero_matrix(3);
  spec.P[0][1] = 0.4;
  spec.P[0][2] = 0.6;
  // coefficients chosen so p_1j r_1(u) > r_j(u) holds at the simulated u
  spec.rates = {{2.0, 1.2}, {0.5, 1.1}, {0.5, 1.0}};
  spec.regime = Regime::light;
  for (int r = 0; r < 5; ++r) {
    const auto ws = compute_Q_scaled(spec, vf, 50.0, 0.5, 0.01, 10.0,
                                     SeedSpec{7, std::uint64_t(r), 0});
    for (std::size_t i = 0; i < 3; ++i)
      for (double v : ws.xbar[i].values) CHECK(v >= 0.0);
    // splitting keeps Q nonnegative here
    for (std::size_t i = 0; i < 3; ++i)
      for (double v : ws.q[i].values) CHECK(v >= -1e-12);
  }
}

TEST_CASE("compute_Q_scaled is deterministic in the seed") {
  const auto vf = VarianceFunction::power_sum({0.6, 1.4});
  const auto spec = NetworkSpec::single_node({1.0, 1.0}, Regime::light);
  const auto a = compute_Q_scaled(spec, vf, 10.0, 0.5, 0.01, 5.0, SeedSpec{1, 2, 3});
  const auto b = compute_Q_scaled(spec, vf, 10.0, 0.5, 0.01, 5.0, SeedSpec{1, 2, 3});
  CHECK(a.q[0].values == b.q[0].values);
  const auto c = compute_Q_scaled(spec, vf, 10.0, 0.5, 0.01, 5.0, SeedSpec{1, 3, 3});
  CHECK(a.q[0].values != c.q[0].values);
}

TEST_CASE("doubling the truncation horizon barely moves the workload") {
  // coupled check: one free path, two reflection horizons
  const auto vf = VarianceFunction::power(0.5);
  double gap = 0;
  for (int r = 0; r < 200; ++r) {
    const auto j = sample_path(vf, -32.0, 0.5, 0.01, SeedSpec{77, std::uint64_t(r), 0});
    const auto a = reflect_truncated(j, 1.0, 1.0, -16.0);
    const auto b = reflect_truncated(j, 1.0, 1.0, -32.0);
    gap += std::fabs(a.value_at(0.0) - b.value_at(0.0));
  }
  CHECK(gap / 200 < 5e-3);
}
