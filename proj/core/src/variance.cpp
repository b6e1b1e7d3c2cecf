#include "gqn/variance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gqn {

VarianceFunction VarianceFunction::power(double lambda) {
  if (lambda <= 0 || lambda >= 1)
    throw std::invalid_argument("power exponent lambda must be in (0,1)");
  VarianceFunction vf;
  vf.kind = VarianceKind::power;
  vf.exponents = {2 * lambda};
  vf.weights = {1.0};
  vf.lambda0 = lambda;
  vf.alpha_inf = lambda;
  vf.beta_bound = lambda;
  vf.C_bound = 1.0;
  vf.t0 = 1.0;
  return vf;
}

VarianceFunction VarianceFunction::power_sum(std::vector<double> exps,
                                             std::vector<double> wts) {
  if (exps.empty()) throw std::invalid_argument("power_sum needs exponents");
  if (wts.empty()) wts.assign(exps.size(), 1.0);
  if (wts.size() != exps.size())
    throw std::invalid_argument("power_sum weights/exponents size mismatch");
  for (double e : exps)
    if (e <= 0 || e >= 2)
      throw std::invalid_argument("power_sum exponents 2*lambda_k must be in (0,2)");
  for (double w : wts)
    if (w <= 0) throw std::invalid_argument("power_sum weights must be positive");
  VarianceFunction vf;
  vf.kind = VarianceKind::power_sum;
  vf.exponents = std::move(exps);
  vf.weights = std::move(wts);
  const auto [mn, mx] =
      std::minmax_element(vf.exponents.begin(), vf.exponents.end());
  vf.lambda0 = *mn / 2;    // smallest exponent governs t -> 0
  vf.alpha_inf = *mx / 2;  // largest governs t -> infinity
  vf.beta_bound = vf.alpha_inf;
  vf.C_bound = std::sqrt(std::accumulate(vf.weights.begin(), vf.weights.end(), 0.0));
  vf.t0 = 1.0;
  return vf;
}

VarianceFunction VarianceFunction::integrated_ou() {
  VarianceFunction vf;
  vf.kind = VarianceKind::integrated_ou;
  vf.lambda0 = 1.0;  // sigma ~ t at 0: violates L1
  vf.alpha_inf = 0.5;
  vf.beta_bound = 0.5;
  vf.C_bound = std::sqrt(2.0);
  vf.t0 = 1.0;
  return vf;
}

double VarianceFunction::sigma2(double t) const {
  if (t < 0) throw std::invalid_argument("sigma2: t must be >= 0");
  switch (kind) {
    case VarianceKind::power:
    case VarianceKind::power_sum: {
      double s = 0;
      for (size_t k = 0; k < exponents.size(); ++k)
        s += weights[k] * std::pow(t, exponents[k]);
      return s;
    }
    case VarianceKind::integrated_ou: {
      // 2(t - 1 + e^{-t}); series below 1e-3 avoids cancellation
      if (t < 1e-3) {
        const double t2 = t * t;
        return t2 * (1.0 - t / 3.0 + t2 / 12.0 - t2 * t / 60.0);
      }
      return 2.0 * (t + std::expm1(-t));
    }
  }
  throw std::logic_error("unreachable");
}

std::string VarianceFunction::describe() const {
  std::ostringstream os;
  switch (kind) {
    case VarianceKind::power:
      os << "power(lambda=" << lambda0 << ")";
      break;
    case VarianceKind::power_sum:
      os << "power_sum(";
      for (size_t k = 0; k < exponents.size(); ++k)
        os << (k ? "," : "") << exponents[k];
      os << ")";
      break;
    case VarianceKind::integrated_ou:
      os << "integrated_ou";
      break;
  }
  return os.str();
}

double sigma_eval(const VarianceFunction& vf, double t) {
  if (t < 0) throw std::invalid_argument("sigma_eval: t must be >= 0");
  return std::sqrt(vf.sigma2(t));
}

double f_ratio(const VarianceFunction& vf, double x, double t) {
  if (x <= 0) throw std::invalid_argument("f_ratio: x must be > 0");
  if (t < 0) throw std::invalid_argument("f_ratio: t must be >= 0");
  return sigma_eval(vf, t * x) / sigma_eval(vf, x);
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    g[i] = std::exp(llo + (lhi - llo) * i / double(n - 1));
  return g;
}

double estimate_rv_index(const VarianceFunction& vf, RvEnd end,
                         double spread_tol) {
  // slope of log sigma vs log t on 4 decades approaching the end
  const double anchor = (end == RvEnd::zero) ? 1e-6 : 1e6;
  constexpr int kDecades = 4;
  constexpr int kPerDecade = 8;
  std::vector<double> slopes;
  for (int d = 0; d < kDecades; ++d) {
    const double scale = (end == RvEnd::zero) ? std::pow(10.0, -d)
                                              : std::pow(10.0, d);
    const double lo = anchor * scale, hi = 10.0 * anchor * scale;
    const auto grid = geometric_grid(lo, hi, kPerDecade);
    // least-squares slope within the decade
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double t : grid) {
      const double lx = std::log(t), ly = std::log(sigma_eval(vf, t));
      sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    const int n = kPerDecade;
    slopes.push_back((n * sxy - sx * sy) / (n * sxx - sx * sx));
  }
  const auto [mn, mx] = std::minmax_element(slopes.begin(), slopes.end());
  if (*mx - *mn > spread_tol)
    throw RvIndexError("rv index slope spread " + std::to_string(*mx - *mn) +
                           " exceeds tolerance; sequence attached",
                       slopes);
  // slope of the decade closest to the end
  return slopes.back();
}

bool check_time_over_sigma_monotone(const VarianceFunction& vf, double lo,
                                    double hi) {
  const auto grid = geometric_grid(lo, hi, 256);
  double prev = grid[0] / sigma_eval(vf, grid[0]);
  for (size_t i = 1; i < grid.size(); ++i) {
    const double cur = grid[i] / sigma_eval(vf, grid[i]);
    if (cur <= prev) return false;
    prev = cur;
  }
  return true;
}

namespace {

UniformBoundResult check_bound(const VarianceFunction& vf,
                               const UniformBoundFit& fit, Regime regime,
                               const std::vector<double>& x_grid,
                               const std::vector<double>& t_grid) {
  UniformBoundResult res;
  res.fit = fit;
  res.ok = true;
  for (double x : x_grid) {
    if (regime == Regime::light && x > fit.fraka) continue;
    if (regime == Regime::heavy && x < fit.fraka) continue;
    for (double t : t_grid) {
      const double f = f_ratio(vf, x, t);
      const double bound =
          fit.frakC * (std::pow(t, fit.gamma_inf) + std::pow(t, fit.gamma0));
      double excess = f - bound;
      if (t > 1.0)
        excess = std::max(excess,
                          f - 2.0 * fit.frakC * std::pow(t, fit.gamma_inf));
      if (excess > 1e-12 * std::max(1.0, bound) && excess > res.worst_excess) {
        res.ok = false;
        res.worst_x = x;
        res.worst_t = t;
        res.worst_excess = excess;
      }
    }
  }
  if (!res.ok) {
    std::ostringstream os;
    os << "uniform bound violated at x=" << res.worst_x << " t=" << res.worst_t
       << " by " << res.worst_excess;
    res.message = os.str();
  }
  return res;
}

std::vector<double> densify(const std::vector<double>& grid, int factor) {
  if (grid.size() < 2) return grid;
  std::vector<double> out;
  out.reserve(grid.size() * factor);
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    const double la = std::log(grid[i]), lb = std::log(grid[i + 1]);
    for (int k = 0; k < factor; ++k)
      out.push_back(std::exp(la + (lb - la) * k / double(factor)));
  }
  out.push_back(grid.back());
  return out;
}

}  // namespace

UniformBoundResult verify_uniform_bound(const VarianceFunction& vf,
                                        const UniformBoundFit& fit,
                                        Regime regime,
                                        const std::vector<double>& x_grid,
                                        const std::vector<double>& t_grid) {
  return check_bound(vf, fit, regime, x_grid, t_grid);
}

UniformBoundResult fit_uniform_bound(const VarianceFunction& vf, Regime regime,
                                     const std::vector<double>& x_grid,
                                     const std::vector<double>& t_grid,
                                     const UniformBoundOptions& opt) {
  if (x_grid.empty() || t_grid.empty())
    throw std::invalid_argument("fit_uniform_bound: grids must be nonempty");
  for (double x : x_grid)
    if (x <= 0) throw std::invalid_argument("fit_uniform_bound: x grid must be positive");
  for (double t : t_grid)
    if (t <= 0) throw std::invalid_argument("fit_uniform_bound: t grid must be positive");

  const double idx = (regime == Regime::light) ? vf.lambda0 : vf.alpha_inf;
  // H2 allows the bound near 0 to come from the behavior of sigma at 0
  const double beta =
      (regime == Regime::light) ? vf.beta_bound : std::min(vf.lambda0, 1.0);

  UniformBoundFit fit;
  fit.fraka = (regime == Regime::light)
                  ? *std::max_element(x_grid.begin(), x_grid.end())
                  : *std::min_element(x_grid.begin(), x_grid.end());

  const bool overridden = opt.gamma0_override || opt.gamma_inf_override;
  if (vf.kind == VarianceKind::power && !overridden) {
    // exactly self-similar: F_x(t) = t^lambda for every x
    fit.gamma0 = fit.gamma_inf = idx;
  } else {
    double eps = opt.epsilon;
    if (eps < 0) eps = std::min(idx, 1.0 - idx) / 4.0;
    double g1, g2;
    if (regime == Regime::light) {
      g1 = idx - eps;
      g2 = std::max(beta, idx + eps);
    } else {
      g1 = idx + eps;
      g2 = std::min(beta, idx - eps);
    }
    fit.gamma_inf = std::max(g1, g2);
    fit.gamma0 = std::min(g1, g2);
  }
  if (opt.gamma0_override) fit.gamma0 = *opt.gamma0_override;
  if (opt.gamma_inf_override) fit.gamma_inf = *opt.gamma_inf_override;

  if (opt.frakC_override) {
    fit.frakC = *opt.frakC_override;
  } else if (overridden) {
    // keep the constant pinned at the t=1 normalization so that an
    // ill-chosen exponent shows up as a violation instead of being absorbed
    double c = 0;
    for (double x : x_grid) c = std::max(c, f_ratio(vf, x, 1.0) / 2.0);
    fit.frakC = c;
  } else {
    double c = 0;
    for (double x : x_grid) {
      if (regime == Regime::light && x > fit.fraka) continue;
      if (regime == Regime::heavy && x < fit.fraka) continue;
      for (double t : t_grid) {
        const double denom =
            std::pow(t, fit.gamma_inf) + std::pow(t, fit.gamma0);
        c = std::max(c, f_ratio(vf, x, t) / denom);
      }
    }
    // headroom so the grid maximum survives grid refinement
    fit.frakC = c * 1.01;
  }

  // re-check with 4x grid density
  auto res = check_bound(vf, fit, regime, densify(x_grid, 4), densify(t_grid, 4));
  res.fit = fit;
  return res;
}

}  // namespace gqn
