#include "gqn/limit_laws.hpp"

#include <cmath>
#include <stdexcept>

namespace gqn {

namespace {

// time-change factor a = r^{-kappa} (light) or r^{xi} (heavy); r in (0,1]
// gives a >= 1 in both regimes
double time_factor(double r, double kappa_or_xi, Regime regime) {
  return regime == Regime::light ? std::pow(r, -kappa_or_xi)
                                 : std::pow(r, kappa_or_xi);
}

}  // namespace

LimitLawSpec make_limit_law(const NetworkSpec& spec,
                            const VarianceFunction& vf) {
  LimitLawSpec lls;
  lls.regime = spec.regime;
  lls.index = spec.regime == Regime::light ? vf.lambda0 : vf.alpha_inf;
  if (lls.index <= 0 || lls.index >= 1)
    throw std::invalid_argument("make_limit_law: index must be in (0,1)");
  lls.kappa_or_xi = spec.regime == Regime::light
                        ? 1.0 / (1.0 - lls.index)
                        : 1.0 / (lls.index - 1.0);
  lls.rlimits = compute_r_limits(spec);
  lls.partition = partition_classes(lls.rlimits);
  lls.C = compute_C(spec.P);
  lls.Pstar = build_pstar(spec.P, lls.rlimits, lls.index, spec.regime);
  return lls;
}

Matrix build_pstar(const Matrix& P, const RLimits& rl, double index,
                   Regime regime) {
  const std::size_t n = P.size();
  // exponent kappa*lambda = lambda/(1-lambda) (light) or xi*alpha (heavy)
  const double e = regime == Regime::light ? index / (1.0 - index)
                                           : index / (index - 1.0);
  Matrix m = zero_matrix(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (P[i][j] <= 0) continue;
      const double r = rl.at(i, j);
      // r = 0 kills the entry: the pre-limit weight sigma(delta_i)/sigma(delta_j)
      // vanishes in both regimes when the rates separate
      m[i][j] = r > 0 ? P[i][j] * std::pow(r, e) : 0.0;
    }
  return m;
}

Matrix build_sigma_matrix(const LimitLawSpec& lls, double t, double s) {
  const std::size_t n = lls.rlimits.n;
  const double H = lls.index;
  Matrix m = zero_matrix(n);
  auto upper = [&](std::size_t i, std::size_t j, double ti, double sj) {
    const double r = lls.rlimits.at(i, j);
    if (r <= 0) return 0.0;
    const double a = time_factor(r, lls.kappa_or_xi, lls.regime);
    return (std::pow(std::fabs(ti), 2 * H) + std::pow(std::fabs(a * sj), 2 * H) -
            std::pow(std::fabs(ti - a * sj), 2 * H)) /
           (2.0 * std::pow(a, H));
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m[i][j] = i <= j ? upper(i, j, t, s) : upper(j, i, s, t);
  return m;
}

std::vector<SamplePath> sample_B(const LimitLawSpec& lls, double t_start,
                                 double t_end, double dt, const SeedSpec& seed,
                                 const SamplerOptions& opt) {
  if (t_start > 0 || t_end <= 0)
    throw std::invalid_argument("sample_B: grid must contain 0");
  if (std::fabs(t_start / dt - std::llround(t_start / dt)) > 1e-9)
    throw std::invalid_argument("sample_B: t_start must be a multiple of dt");
  const auto fbm = VarianceFunction::power(lls.index);
  const std::size_t n = lls.rlimits.n;
  std::vector<SamplePath> out(n);

  for (std::size_t c = 0; c < lls.partition.classes.size(); ++c) {
    const auto& cls = lls.partition.classes[c];
    const std::size_t lead = lls.partition.l[c];
    std::vector<double> factors(cls.size());
    for (std::size_t k = 0; k < cls.size(); ++k)
      factors[k] =
          time_factor(lls.rlimits.at(lead, cls[k]), lls.kappa_or_xi, lls.regime);
    const MultiscalePath mp = sample_multiscale(
        fbm, factors, -t_start, t_end, dt, seed.with_tag(seed.stream_tag + c),
        opt, opt.grid_budget, opt.ratio_cap);
    const std::ptrdiff_t k0 =
        std::ptrdiff_t(std::llround(t_start / dt));  // first step (<= 0)
    const std::size_t n_steps = std::size_t(std::llround((t_end - t_start) / dt));
    for (std::size_t k = 0; k < cls.size(); ++k) {
      SamplePath& p = out[cls[k]];
      p.t0 = t_start;
      p.dt = dt;
      p.values.resize(n_steps + 1);
      // divide by the snapped factor^H so the within-class covariance algebra
      // is exact on the grid actually sampled
      const double scale = 1.0 / std::pow(mp.snapped_scales[k], lls.index);
      for (std::size_t j = 0; j <= n_steps; ++j)
        p.values[j] = mp.read(k, k0 + std::ptrdiff_t(j)) * scale;
    }
  }
  return out;
}

WorkloadSample sample_limit_workload(const LimitLawSpec& lls, double T,
                                     double dt, const TruncationPlan& trunc,
                                     const SeedSpec& seed,
                                     const SamplerOptions& opt) {
  if (T <= 0 || dt <= 0)
    throw std::invalid_argument("sample_limit_workload: T, dt must be > 0");
  if (trunc.T_past <= 0)
    throw std::invalid_argument("sample_limit_workload: truncation must be > 0");
  const double t_start = -std::ceil(trunc.T_past / dt) * dt;
  const auto B = sample_B(lls, t_start, T, dt, seed, opt);

  WorkloadSample ws;
  ws.time_scale.assign(lls.rlimits.n, 1.0);
  ws.space_scale.assign(lls.rlimits.n, 1.0);
  ws.xbar.resize(lls.rlimits.n);
  for (std::size_t i = 0; i < lls.rlimits.n; ++i)
    ws.xbar[i] = reflect_truncated(B[i], 1.0, lls.C[i]);
  ws.q = compute_Q(ws.xbar, lls.Pstar);
  return ws;
}

}  // namespace gqn
