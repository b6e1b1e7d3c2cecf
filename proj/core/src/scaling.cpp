#include "gqn/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gqn {

namespace {

// x * d / sigma(d) - 1, increasing in d when d/sigma(d) is.
double residual(const VarianceFunction& vf, double x, double d) {
  return x * d / sigma_eval(vf, d) - 1.0;
}

}  // namespace

double solve_delta(const VarianceFunction& vf, double x) {
  if (x <= 0) throw std::invalid_argument("solve_delta: x must be > 0");
  if (!check_time_over_sigma_monotone(vf))
    throw std::runtime_error("solve_delta: d/sigma(d) is not increasing");

  // Initial guess from the power law governing the relevant end of sigma.
  const double idx = x >= 1 ? vf.lambda0 : vf.alpha_inf;
  double guess = std::pow(x, -1.0 / (1.0 - idx));
  if (!std::isfinite(guess) || guess <= 0) guess = 1.0;

  double lo = guess, hi = guess;
  double flo = residual(vf, x, lo), fhi = flo;
  for (int k = 0; k < 2000 && flo > 0; ++k) {
    lo /= 2;
    if (lo < 1e-300) break;
    flo = residual(vf, x, lo);
  }
  for (int k = 0; k < 2000 && fhi < 0; ++k) {
    hi *= 2;
    if (hi > 1e300) break;
    fhi = residual(vf, x, hi);
  }
  if (flo > 0 || fhi < 0)
    throw std::runtime_error("solve_delta: no root in [1e-300, 1e300]");

  // Bisection in log-space; the residual is monotone in d.
  double llo = std::log(lo), lhi = std::log(hi);
  double d = std::exp(0.5 * (llo + lhi));
  for (int k = 0; k < 200; ++k) {
    const double f = residual(vf, x, d);
    if (std::fabs(f) < 1e-13) return d;
    (f < 0 ? llo : lhi) = std::log(d);
    d = std::exp(0.5 * (llo + lhi));
  }
  if (std::fabs(residual(vf, x, d)) >= 1e-12) {
    std::ostringstream os;
    os << "solve_delta: residual did not reach 1e-12 for x=" << x;
    throw std::runtime_error(os.str());
  }
  return d;
}

double check_delta_rv(const VarianceFunction& vf, Regime regime) {
  // Light traffic sends x -> infinity, heavy x -> 0.
  const bool to_inf = regime == Regime::light;
  const double anchor = to_inf ? 1e6 : 1e-6;
  constexpr int decades = 4, per_decade = 8;

  std::vector<double> slopes;
  for (int d = 0; d < decades; ++d) {
    // decade closest to the end last
    const double hi = to_inf ? anchor * std::pow(10.0, d + 1)
                             : anchor * std::pow(10.0, -d);
    const double lo = hi / 10.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k <= per_decade; ++k) {
      const double x =
          lo * std::pow(hi / lo, double(k) / per_decade);
      const double lx = std::log(x), ly = std::log(solve_delta(vf, x));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const int n = per_decade + 1;
    slopes.push_back((n * sxy - sx * sy) / (n * sxx - sx * sx));
  }
  const auto [mn, mx] = std::minmax_element(slopes.begin(), slopes.end());
  if (*mx - *mn > 1e-2) {
    std::ostringstream os;
    os << "delta index did not settle: per-decade slopes spread "
       << (*mx - *mn);
    throw RvIndexError(os.str(), slopes);
  }
  return slopes.back();
}

ScaleFactors scale_factors(const NetworkSpec& spec, const VarianceFunction& vf,
                           double u) {
  ScaleFactors sf;
  sf.time_scale.resize(spec.n);
  sf.space_scale.resize(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double x = spec.rates[i].at(u);
    const double d = solve_delta(vf, x);
    sf.time_scale[i] = d;
    sf.space_scale[i] = sigma_eval(vf, d);
    if (std::fabs(x * d / sf.space_scale[i] - 1.0) > 1e-11)
      throw std::runtime_error("scale_factors: r*delta = sigma(delta) failed");
  }
  return sf;
}

Matrix pstar_prelimit(const NetworkSpec& spec, const VarianceFunction& vf,
                      double u) {
  const ScaleFactors sf = scale_factors(spec, vf, u);
  Matrix m = zero_matrix(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i)
    for (std::size_t j = 0; j < spec.n; ++j)
      if (spec.P[i][j] > 0)
        m[i][j] = spec.P[i][j] * sf.space_scale[i] / sf.space_scale[j];
  return m;
}

}  // namespace gqn
