#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gqn/rng.hpp"
#include "gqn/variance.hpp"

namespace gqn {

/// Discretized realization of a process on a uniform time grid.
struct SamplePath {
  double t0 = 0;   // grid start (may be negative)
  double dt = 1;   // grid step, > 0
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double time_at(std::size_t i) const { return t0 + dt * double(i); }
  double t_end() const { return time_at(values.size() - 1); }

  /// Index of a time that must land exactly on the grid (tolerance dt/16).
  std::size_t index_of(double t) const;
  double value_at(double t) const { return values[index_of(t)]; }
};

struct SamplerOptions {
  std::size_t embedding_cap = std::size_t(1) << 24;
  std::size_t dense_fallback_threshold = 4096;
  double eigen_tolerance = 1e-9;     // relative to max eigenvalue
  bool allow_iid_shortcut = true;    // exact shortcut when increments are iid
  std::size_t grid_budget = std::size_t(1) << 21;  // multiscale refinement cap
  double ratio_cap = 1e4;                          // max(scale)/min(scale) cap
};

/// Autocovariance gamma(k) of the stationary increment sequence
/// J((k+1)dt) - J(k dt):
///   gamma(k) = (sigma^2((k+1)dt) + sigma^2(|k-1|dt) - 2 sigma^2(k dt)) / 2.
std::vector<double> increment_covariance(const VarianceFunction& vf, double dt,
                                         std::size_t n_lags);

/// Exact sample of J on [t_start, t_end] with step dt via circulant embedding
/// of the increment covariance (dense factorization fallback below the
/// threshold).  The grid must contain 0; the returned path has J(0) = 0.
SamplePath sample_path(const VarianceFunction& vf, double t_start,
                       double t_end, double dt, const SeedSpec& seed,
                       const SamplerOptions& opt = {});

/// One path of J on the least-common-refinement grid that contains every
/// per-scale reading time exactly.
struct MultiscalePath {
  SamplePath fine;                     // physical-time path of J
  std::vector<double> snapped_scales;  // scale actually used per input scale
  std::vector<std::size_t> strides;    // fine-grid stride of one base_dt step
                                       // at each scale
  std::size_t zero_index = 0;

  /// J(snapped_scales[k] * t) at scaled time t = step * base_dt
  /// (step may be negative).
  double read(std::size_t scale_idx, std::ptrdiff_t step) const {
    return fine.values[std::size_t(std::ptrdiff_t(zero_index) +
                                   step * std::ptrdiff_t(strides[scale_idx]))];
  }
};

struct MultiscalePlan {
  std::vector<double> snapped_scales;
  std::vector<std::size_t> strides;  // per scale, in units of fine_dt
  double fine_dt = 0;                // physical step
  int max_denominator = 0;
};

/// Rounds scale ratios to rationals (denominator <= 64, reduced further when
/// the refinement would exceed grid_budget points over [0, horizon_scaled]).
MultiscalePlan plan_multiscale(const std::vector<double>& scales,
                               double base_dt, double horizon_scaled,
                               std::size_t grid_budget = std::size_t(1) << 21,
                               double ratio_cap = 1e4);

/// Samples J on [ -T_past*max(scale), T_future*max(scale) ] (physical time)
/// on the refinement grid of plan_multiscale, anchored so J(0) = 0.
MultiscalePath sample_multiscale(const VarianceFunction& vf,
                                 const std::vector<double>& scales,
                                 double T_past, double T_future,
                                 double base_dt, const SeedSpec& seed,
                                 const SamplerOptions& opt = {},
                                 std::size_t grid_budget = std::size_t(1) << 21,
                                 double ratio_cap = 1e4);

}  // namespace gqn
