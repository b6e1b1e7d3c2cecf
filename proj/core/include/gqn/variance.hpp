#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gqn {

enum class Regime { light, heavy };

enum class VarianceKind { power, power_sum, integrated_ou };

/// Standard deviation function sigma(.) of the driving Gaussian input,
/// restricted to a closed set of parametric families so that covariances
/// admit exact closed forms.
///
/// Regular-variation metadata:
///   lambda0   -- index of sigma at 0
///   alpha_inf -- index of sigma at infinity
///   beta_bound, C_bound, t0 -- constants of the power bound sigma(t) <= C t^beta
///   (for t > t0 in the light regime; the heavy-regime bound near 0 is governed
///   by lambda0 for all shipped families).
struct VarianceFunction {
  VarianceKind kind = VarianceKind::power;
  std::vector<double> exponents;  // 2*lambda_k for power / power_sum
  std::vector<double> weights;    // positive, same length as exponents

  double lambda0 = 0.5;
  double alpha_inf = 0.5;
  double beta_bound = 0.5;
  double C_bound = 1.0;
  double t0 = 1.0;

  static VarianceFunction power(double lambda);
  static VarianceFunction power_sum(std::vector<double> exps,
                                    std::vector<double> wts = {});
  static VarianceFunction integrated_ou();

  /// sigma^2(t), t >= 0.
  double sigma2(double t) const;
  std::string describe() const;
};

/// sigma(t); throws std::invalid_argument for t < 0.
double sigma_eval(const VarianceFunction& vf, double t);

/// F_x(t) = sigma(t*x)/sigma(x); throws for x <= 0.
double f_ratio(const VarianceFunction& vf, double x, double t);

enum class RvEnd { zero, infinity };

/// Raised when the log-log slope does not settle across decades.
struct RvIndexError : std::runtime_error {
  std::vector<double> slopes;
  RvIndexError(const std::string& msg, std::vector<double> s)
      : std::runtime_error(msg), slopes(std::move(s)) {}
};

/// Numeric regular-variation index of sigma at the given end: log-log slope
/// over 4 geometric decades, per-decade spread tolerance 1e-3.
double estimate_rv_index(const VarianceFunction& vf, RvEnd end,
                         double spread_tol = 1e-3);

/// Checks that t -> t/sigma(t) is strictly increasing on a log grid spanning
/// [lo, hi]; required by the delta solver.
bool check_time_over_sigma_monotone(const VarianceFunction& vf,
                                    double lo = 1e-8, double hi = 1e8);

/// Constants of the uniform power bound
///   F_x(t) <= frakC * (t^gamma_inf + t^gamma0)
/// valid for all grid t > 0 and x <= fraka (light) or x >= fraka (heavy).
struct UniformBoundFit {
  double gamma0 = 0;
  double gamma_inf = 0;
  double frakC = 0;
  double fraka = 0;
};

struct UniformBoundOptions {
  double epsilon = -1;  // <0 => min(idx, 1-idx)/4
  std::optional<double> gamma0_override;
  std::optional<double> gamma_inf_override;
  std::optional<double> frakC_override;
};

struct UniformBoundResult {
  bool ok = false;
  UniformBoundFit fit;
  // worst point when the bound fails
  double worst_x = 0, worst_t = 0, worst_excess = 0;
  std::string message;
};

/// Fits (gamma0, gamma_inf, frakC, fraka) with exponents built from the
/// regular-variation indices (lambda +- eps combined with beta), frakC the grid
/// maximum of F_x(t)/(t^gamma_inf + t^gamma0), then re-verifies on a 4x-denser
/// grid.  Overridden exponents keep frakC pinned at max_x F_x(1)/2, which is
/// how a wrong gamma produces a violation report.
UniformBoundResult fit_uniform_bound(const VarianceFunction& vf, Regime regime,
                                     const std::vector<double>& x_grid,
                                     const std::vector<double>& t_grid,
                                     const UniformBoundOptions& opt = {});

/// Checks the fitted bound (and F_x(t) <= 2*frakC*t^gamma_inf for t > 1) on
/// the given grids.
UniformBoundResult verify_uniform_bound(const VarianceFunction& vf,
                                        const UniformBoundFit& fit,
                                        Regime regime,
                                        const std::vector<double>& x_grid,
                                        const std::vector<double>& t_grid);

std::vector<double> geometric_grid(double lo, double hi, int n);

}  // namespace gqn
