#include "gqn/sampler.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace gqn {

std::size_t SamplePath::index_of(double t) const {
  const double raw = (t - t0) / dt;
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) > 1.0 / 16.0)
    throw std::invalid_argument("time does not land on the sample grid");
  if (rounded < -0.25 || rounded > double(values.size()) - 0.75)
    throw std::out_of_range("time outside the sampled range");
  return std::size_t(rounded);
}

std::vector<double> increment_covariance(const VarianceFunction& vf, double dt,
                                         std::size_t n_lags) {
  if (dt <= 0) throw std::invalid_argument("increment_covariance: dt must be > 0");
  if (n_lags < 1) throw std::invalid_argument("increment_covariance: n_lags must be >= 1");
  std::vector<double> gamma(n_lags);
  for (std::size_t k = 0; k < n_lags; ++k) {
    const double kp = double(k + 1) * dt;
    const double km = double(k >= 1 ? k - 1 : 1) * dt;  // |k-1|
    const double kk = double(k) * dt;
    gamma[k] = 0.5 * (vf.sigma2(kp) + vf.sigma2(km) - 2.0 * vf.sigma2(kk));
  }
  return gamma;
}

namespace {

struct FftPlan {
  fftw_plan plan = nullptr;
  ~FftPlan() {
    if (plan) fftw_destroy_plan(plan);
  }
};

std::mutex g_fftw_mutex;
std::map<std::size_t, std::shared_ptr<FftPlan>> g_plan_cache;

std::shared_ptr<FftPlan> plan_for(std::size_t m) {
  std::lock_guard<std::mutex> lk(g_fftw_mutex);
  auto it = g_plan_cache.find(m);
  if (it != g_plan_cache.end()) return it->second;
  auto p = std::make_shared<FftPlan>();
  std::vector<std::complex<double>> buf(m);
  p->plan = fftw_plan_dft_1d(
      int(m), reinterpret_cast<fftw_complex*>(buf.data()),
      reinterpret_cast<fftw_complex*>(buf.data()), FFTW_BACKWARD,
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  g_plan_cache.emplace(m, p);
  return p;
}

void fft_inplace(std::vector<std::complex<double>>& v) {
  auto p = plan_for(v.size());
  fftw_execute_dft(p->plan, reinterpret_cast<fftw_complex*>(v.data()),
                   reinterpret_cast<fftw_complex*>(v.data()));
}

// sqrt of circulant eigenvalues for a given (vf, dt, m), shared by replicates
struct Embedding {
  std::size_t m = 0;
  std::vector<double> sqrt_eig;
};

std::mutex g_embed_mutex;
std::map<std::string, std::shared_ptr<const Embedding>> g_embed_cache;

std::string embed_key(const VarianceFunction& vf, double dt, std::size_t m) {
  std::ostringstream os;
  os << vf.describe();
  for (size_t k = 0; k < vf.exponents.size(); ++k)
    os << ":" << vf.exponents[k] << "*" << vf.weights[k];
  os << "|dt=" << std::hexfloat << dt << "|m=" << m;
  return os.str();
}

// Builds the circulant embedding of the increment covariance; returns nullptr
// with min_eig reported when the spectrum has a negative eigenvalue.
std::shared_ptr<const Embedding> try_embedding(const VarianceFunction& vf,
                                               double dt, std::size_t m,
                                               double rel_tol,
                                               double& min_eig_out) {
  const std::string key = embed_key(vf, dt, m);
  {
    std::lock_guard<std::mutex> lk(g_embed_mutex);
    auto it = g_embed_cache.find(key);
    if (it != g_embed_cache.end()) return it->second;
  }
  const std::size_t half = m / 2;
  const auto gamma = increment_covariance(vf, dt, half + 1);
  std::vector<std::complex<double>> c(m);
  for (std::size_t k = 0; k <= half; ++k) c[k] = gamma[k];
  for (std::size_t k = 1; k < half; ++k) c[m - k] = gamma[k];
  fft_inplace(c);
  double min_eig = c[0].real(), max_eig = c[0].real();
  for (const auto& z : c) {
    min_eig = std::min(min_eig, z.real());
    max_eig = std::max(max_eig, z.real());
  }
  min_eig_out = min_eig;
  if (min_eig < -rel_tol * std::max(max_eig, 1e-300)) return nullptr;
  auto emb = std::make_shared<Embedding>();
  emb->m = m;
  emb->sqrt_eig.resize(m);
  for (std::size_t k = 0; k < m; ++k)
    emb->sqrt_eig[k] = std::sqrt(std::max(0.0, c[k].real()));
  std::lock_guard<std::mutex> lk(g_embed_mutex);
  g_embed_cache.emplace(key, emb);
  return emb;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

bool increments_iid(const VarianceFunction& vf, double dt, std::size_t n) {
  const auto gamma = increment_covariance(vf, dt, std::min<std::size_t>(n, 257));
  for (std::size_t k = 1; k < gamma.size(); ++k)
    if (std::abs(gamma[k]) > 1e-14 * gamma[0]) return false;
  return true;
}

void sample_increments_circulant(const Embedding& emb, std::size_t n,
                                 std::mt19937_64& eng,
                                 std::vector<double>& out) {
  const std::size_t m = emb.m;
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::complex<double>> a(m);
  const double inv_m = 1.0 / double(m);
  a[0] = emb.sqrt_eig[0] * std::sqrt(inv_m) * gauss(eng);
  a[m / 2] = emb.sqrt_eig[m / 2] * std::sqrt(inv_m) * gauss(eng);
  const double half_scale = std::sqrt(inv_m / 2.0);
  for (std::size_t k = 1; k < m / 2; ++k) {
    const double u = gauss(eng), v = gauss(eng);
    const double s = emb.sqrt_eig[k] * half_scale;
    a[k] = std::complex<double>(s * u, s * v);
    a[m - k] = std::conj(a[k]);
  }
  fft_inplace(a);
  out.resize(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = a[j].real();
}

void sample_increments_dense(const VarianceFunction& vf, double dt,
                             std::size_t n, std::mt19937_64& eng,
                             std::vector<double>& out) {
  const auto gamma = increment_covariance(vf, dt, n);
  Eigen::MatrixXd cov(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cov(i, j) = gamma[std::size_t(std::abs(std::ptrdiff_t(i) - std::ptrdiff_t(j)))];
  Eigen::LLT<Eigen::MatrixXd> llt(
      cov + 1e-12 * gamma[0] * Eigen::MatrixXd::Identity(n, n));
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("dense fallback: covariance not positive definite");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (std::size_t i = 0; i < n; ++i) z(i) = gauss(eng);
  Eigen::VectorXd x = llt.matrixL() * z;
  out.assign(x.data(), x.data() + n);
}

}  // namespace

SamplePath sample_path(const VarianceFunction& vf, double t_start,
                       double t_end, double dt, const SeedSpec& seed,
                       const SamplerOptions& opt) {
  if (dt <= 0) throw std::invalid_argument("sample_path: dt must be > 0");
  if (t_end <= t_start) throw std::invalid_argument("sample_path: empty interval");
  const double start_steps = t_start / dt;
  if (std::abs(start_steps - std::round(start_steps)) > 1e-9)
    throw std::invalid_argument("sample_path: t_start must be a multiple of dt");
  const std::size_t n = std::size_t(std::round((t_end - t_start) / dt));
  if (n < 1) throw std::invalid_argument("sample_path: grid too short");

  auto eng = make_engine(seed);
  std::vector<double> inc;
  if (opt.allow_iid_shortcut && increments_iid(vf, dt, n)) {
    const double sd = std::sqrt(vf.sigma2(dt));
    std::normal_distribution<double> gauss(0.0, sd);
    inc.resize(n);
    for (auto& x : inc) x = gauss(eng);
  } else {
    std::shared_ptr<const Embedding> emb;
    double min_eig = 0;
    for (std::size_t m = next_pow2(2 * n); m <= opt.embedding_cap; m <<= 1) {
      emb = try_embedding(vf, dt, m, opt.eigen_tolerance, min_eig);
      if (emb) break;
    }
    if (emb) {
      sample_increments_circulant(*emb, n, eng, inc);
    } else if (n <= opt.dense_fallback_threshold) {
      sample_increments_dense(vf, dt, n, eng, inc);
    } else {
      std::ostringstream os;
      os << "circulant embedding failed up to cap (smallest eigenvalue "
         << min_eig << ") and grid size " << n
         << " exceeds dense fallback threshold "
         << opt.dense_fallback_threshold;
      throw std::runtime_error(os.str());
    }
  }

  SamplePath path;
  path.t0 = t_start;
  path.dt = dt;
  path.values.resize(n + 1);
  path.values[0] = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    path.values[j + 1] = path.values[j] + inc[j];
  // re-anchor so that J(0) = 0 exactly
  const std::size_t zero_idx = path.index_of(0.0);
  const double j0 = path.values[zero_idx];
  for (auto& v : path.values) v -= j0;
  path.values[zero_idx] = 0.0;
  return path;
}

namespace {

// best rational approximation p/q with q <= maxden
void best_rational(double r, int maxden, long& p_out, long& q_out) {
  double best_err = std::numeric_limits<double>::infinity();
  for (int q = 1; q <= maxden; ++q) {
    const long p = std::lround(r * q);
    if (p < 1) continue;
    const double err = std::abs(r - double(p) / double(q));
    if (err < best_err * (1.0 - 1e-12)) {
      best_err = err;
      p_out = p;
      q_out = q;
    }
  }
}

long lcm_capped(long a, long b, long cap) {
  const long g = std::gcd(a, b);
  const long l = a / g * b;
  return (l > cap || l < 0) ? cap + 1 : l;
}

}  // namespace

MultiscalePlan plan_multiscale(const std::vector<double>& scales,
                               double base_dt, double horizon_scaled,
                               std::size_t grid_budget, double ratio_cap) {
  if (scales.empty()) throw std::invalid_argument("plan_multiscale: no scales");
  for (double s : scales)
    if (s <= 0) throw std::invalid_argument("plan_multiscale: scales must be positive");
  const double s_min = *std::min_element(scales.begin(), scales.end());
  const double s_max = *std::max_element(scales.begin(), scales.end());
  if (s_max / s_min > ratio_cap) {
    std::ostringstream os;
    os << "scale ratio " << s_max / s_min << " exceeds cap " << ratio_cap
       << "; use a smaller u or a coarser base_dt";
    throw std::invalid_argument(os.str());
  }

  const long lcm_cap = 1 << 20;
  for (int maxden : {64, 32, 16, 8, 6, 4, 3, 2, 1}) {
    std::vector<long> ps(scales.size()), qs(scales.size());
    long L = 1;
    bool ok = true;
    for (std::size_t i = 0; i < scales.size(); ++i) {
      best_rational(scales[i] / s_min, maxden, ps[i], qs[i]);
      L = lcm_capped(L, qs[i], lcm_cap);
      if (L > lcm_cap) { ok = false; break; }
    }
    if (!ok) continue;
    std::size_t max_stride = 0;
    for (std::size_t i = 0; i < scales.size(); ++i)
      max_stride = std::max(max_stride, std::size_t(ps[i] * (L / qs[i])));
    const std::size_t n_base = std::size_t(std::ceil(horizon_scaled / base_dt));
    if (n_base * max_stride > grid_budget && maxden > 1) continue;
    if (n_base * max_stride > grid_budget) {
      std::ostringstream os;
      os << "refined grid needs " << n_base * max_stride
         << " points (budget " << grid_budget
         << "); use a smaller u, shorter horizon or coarser base_dt";
      throw std::invalid_argument(os.str());
    }
    MultiscalePlan plan;
    plan.max_denominator = maxden;
    plan.fine_dt = base_dt * s_min / double(L);
    plan.snapped_scales.resize(scales.size());
    plan.strides.resize(scales.size());
    for (std::size_t i = 0; i < scales.size(); ++i) {
      plan.strides[i] = std::size_t(ps[i] * (L / qs[i]));
      plan.snapped_scales[i] = s_min * double(ps[i]) / double(qs[i]);
    }
    return plan;
  }
  throw std::logic_error("plan_multiscale: unreachable");
}

MultiscalePath sample_multiscale(const VarianceFunction& vf,
                                 const std::vector<double>& scales,
                                 double T_past, double T_future,
                                 double base_dt, const SeedSpec& seed,
                                 const SamplerOptions& opt,
                                 std::size_t grid_budget, double ratio_cap) {
  auto plan = plan_multiscale(scales, base_dt, T_past + T_future, grid_budget,
                              ratio_cap);
  const std::size_t max_stride =
      *std::max_element(plan.strides.begin(), plan.strides.end());
  const std::size_t n_past =
      std::size_t(std::ceil(T_past / base_dt - 1e-9)) * max_stride;
  const std::size_t n_future =
      std::max<std::size_t>(1, std::size_t(std::ceil(T_future / base_dt - 1e-9))) *
      max_stride;
  MultiscalePath mp;
  mp.fine = sample_path(vf, -double(n_past) * plan.fine_dt,
                        double(n_future) * plan.fine_dt, plan.fine_dt, seed, opt);
  mp.snapped_scales = plan.snapped_scales;
  mp.strides = plan.strides;
  mp.zero_index = n_past;
  return mp;
}

}  // namespace gqn
