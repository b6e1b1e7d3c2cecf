#include "gqn/workload.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gqn/scaling.hpp"

namespace gqn {

SamplePath reflect_truncated(const SamplePath& free, double drift, double gain,
                             double trunc_start) {
  if (drift <= 0) throw std::invalid_argument("reflect_truncated: drift must be > 0");
  if (gain <= 0) throw std::invalid_argument("reflect_truncated: gain must be > 0");
  const std::size_t zero = free.index_of(0.0);  // throws if 0 not on grid
  const std::size_t start = free.index_of(trunc_start);
  if (start > zero)
    throw std::invalid_argument("reflect_truncated: truncation starts after 0");

  SamplePath out;
  out.t0 = 0.0;
  out.dt = free.dt;
  out.values.resize(free.size() - zero);
  double runmin = std::numeric_limits<double>::infinity();
  for (std::size_t idx = start; idx < free.size(); ++idx) {
    const double m = gain * free.values[idx] - drift * free.time_at(idx);
    runmin = std::min(runmin, m);
    if (idx >= zero) out.values[idx - zero] = m - runmin;
  }
  return out;
}

SamplePath reflect_truncated(const SamplePath& free, double drift, double gain) {
  return reflect_truncated(free, drift, gain, free.t0);
}

namespace {

// regularized upper incomplete gamma Q(s, x), standard series / continued
// fraction split at x = s + 1
double gamma_q(double s, double x) {
  if (x < 0 || s <= 0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0) return 1.0;
  const double lg = std::lgamma(s);
  if (x < s + 1.0) {
    // series for P(s,x), Q = 1 - P
    double term = 1.0 / s, sum = term, a = s;
    for (int k = 0; k < 500; ++k) {
      a += 1.0;
      term *= x / a;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return 1.0 - sum * std::exp(-x + s * std::log(x) - lg);
  }
  // Lentz continued fraction for Q(s,x)
  const double tiny = 1e-300;
  double b = x + 1.0 - s, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int k = 1; k < 500; ++k) {
    const double an = -double(k) * (double(k) - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + s * std::log(x) - lg);
}

// upper incomplete gamma
double gamma_upper(double s, double x) { return gamma_q(s, x) * std::tgamma(s); }

}  // namespace

TruncationPlan plan_truncation(const UniformBoundFit& ubf, double gain,
                               double target_prob, double piterbarg_C) {
  if (gain <= 0) throw std::invalid_argument("plan_truncation: gain must be > 0");
  if (target_prob <= 0 || target_prob >= 1)
    throw std::invalid_argument("plan_truncation: target_prob must be in (0,1)");
  const double g = ubf.gamma_inf;
  const double c = ubf.frakC;
  if (g <= 0 || g >= 1)
    throw std::invalid_argument("plan_truncation: gamma_inf must be in (0,1)");
  if (c <= 0) throw std::invalid_argument("plan_truncation: frakC must be > 0");

  const double K = 4.0 * piterbarg_C * c * gain / std::sqrt(2.0 * M_PI);
  const double q = 2.0 - 2.0 * g;
  const double A = 32.0 * c * c * gain * gain;
  // integral of psi over [T-1, inf): substituting y = x+1 gives
  //   K * int_T^inf y^{g-1} exp(-y^q / A) dy
  //     = (K/q) * A^{g/q} * GammaUpper(g/q, T^q / A)
  auto tail = [&](double T) {
    return K / q * std::pow(A, g / q) * gamma_upper(g / q, std::pow(T, q) / A);
  };

  long lo = 1, hi = 1;
  while (hi <= 1000000 && tail(double(hi)) >= target_prob) hi *= 2;
  if (hi > 1000000 && tail(1e6) >= target_prob) {
    std::ostringstream os;
    os << "tail bound stays above " << target_prob
       << " out to horizon 1e6; use a larger drift or smaller gain";
    throw std::runtime_error(os.str());
  }
  hi = std::min(hi, 1000000L);
  while (lo < hi) {
    const long mid = lo + (hi - lo) / 2;
    if (tail(double(mid)) < target_prob)
      hi = mid;
    else
      lo = mid + 1;
  }
  TruncationPlan plan;
  plan.T_past = double(lo);
  plan.tail_bound = tail(double(lo));
  return plan;
}

std::vector<SamplePath> compute_Q(const std::vector<SamplePath>& xbar,
                                  const Matrix& P) {
  const std::size_t n = xbar.size();
  if (P.size() != n) throw std::invalid_argument("compute_Q: size mismatch");
  for (const auto& x : xbar)
    if (x.t0 != xbar[0].t0 || x.dt != xbar[0].dt || x.size() != xbar[0].size())
      throw std::invalid_argument("compute_Q: paths do not share a grid");
  std::vector<SamplePath> q = xbar;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (P[j][i] > 0)
        for (std::size_t k = 0; k < q[i].size(); ++k)
          q[i].values[k] -= P[j][i] * xbar[j].values[k];
  return q;
}

WorkloadSample compute_Q_scaled(const NetworkSpec& spec,
                                const VarianceFunction& vf, double u, double T,
                                double dt, double T_past, const SeedSpec& seed,
                                const SamplerOptions& opt) {
  if (T <= 0 || dt <= 0 || T_past <= 0)
    throw std::invalid_argument("compute_Q_scaled: T, dt, T_past must be > 0");
  const auto C = compute_C(spec.P);
  const ScaleFactors sf = scale_factors(spec, vf, u);
  const MultiscalePath mp =
      sample_multiscale(vf, sf.time_scale, T_past, T, dt, seed, opt,
                        opt.grid_budget, opt.ratio_cap);

  const std::size_t zero = mp.zero_index;
  const std::size_t n_fwd = mp.fine.size() - zero;  // fine points with t >= 0
  const std::size_t n_past_steps = std::size_t(std::ceil(T_past / dt - 1e-9));
  const std::size_t nk = std::size_t(std::floor(T / dt + 1e-9));

  WorkloadSample ws;
  ws.time_scale = mp.snapped_scales;
  ws.space_scale.resize(spec.n);

  // truncated reflection per node on the full refinement grid; the snapped
  // scale perturbs the node rate through r = sigma(delta)/delta
  std::vector<std::vector<double>> xf(spec.n);
  for (std::size_t j = 0; j < spec.n; ++j) {
    const double d = mp.snapped_scales[j];
    const double space = sigma_eval(vf, d);
    ws.space_scale[j] = space;
    const double drift = space / d;
    const std::size_t start = zero - n_past_steps * mp.strides[j];
    xf[j].resize(n_fwd);
    double runmin = std::numeric_limits<double>::infinity();
    for (std::size_t idx = start; idx < mp.fine.size(); ++idx) {
      const double m = C[j] * mp.fine.values[idx] - drift * mp.fine.time_at(idx);
      runmin = std::min(runmin, m);
      if (idx >= zero) xf[j][idx - zero] = m - runmin;
    }
  }

  ws.xbar.resize(spec.n);
  ws.q.resize(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    SamplePath& xb = ws.xbar[i];
    SamplePath& q = ws.q[i];
    xb.t0 = q.t0 = 0.0;
    xb.dt = q.dt = dt;
    xb.values.resize(nk + 1);
    q.values.resize(nk + 1);
    const std::size_t stride = mp.strides[i];
    const double inv_space = 1.0 / ws.space_scale[i];
    for (std::size_t k = 0; k <= nk; ++k) {
      const std::size_t idx = k * stride;
      xb.values[k] = xf[i][idx] * inv_space;
      // multiply by (I - P^T) in physical units, then scale
      double q1 = xf[i][idx];
      for (std::size_t j = 0; j < spec.n; ++j)
        if (spec.P[j][i] > 0) q1 -= spec.P[j][i] * xf[j][idx];
      q1 *= inv_space;
      // conjugated form: scaled paths combined with the pre-limit weights
      double q2 = xb.values[k];
      for (std::size_t j = 0; j < spec.n; ++j)
        if (spec.P[j][i] > 0)
          q2 -= spec.P[j][i] * ws.space_scale[j] * inv_space *
                (xf[j][idx] / ws.space_scale[j]);
      if (std::abs(q1 - q2) > 1e-10 * std::max(1.0, std::abs(q1)))
        throw std::runtime_error("compute_Q_scaled: assembly orders disagree");
      q.values[k] = q1;
    }
  }
  return ws;
}

}  // namespace gqn
