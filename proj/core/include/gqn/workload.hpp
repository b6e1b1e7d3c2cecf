#pragma once

#include <vector>

#include "gqn/network.hpp"
#include "gqn/sampler.hpp"
#include "gqn/variance.hpp"

namespace gqn {

/// Sizing of the stationary-supremum truncation horizon.
struct TruncationPlan {
  double T_past = 0;       // truncation horizon (scaled time)
  double tail_bound = 0;   // analytic bound on the neglected tail probability
  double doubling_gap = -1;  // filled in by the empirical doubling check
};

/// X(t) = M(t) - min_{s in [trunc_start, t]} M(s) with M(t) = gain*J(t) -
/// drift*t, computed in one running-minimum pass; returned for grid times
/// t >= 0 only.  trunc_start defaults to the start of the input grid and must
/// land on it.
SamplePath reflect_truncated(const SamplePath& free, double drift, double gain,
                             double trunc_start);
SamplePath reflect_truncated(const SamplePath& free, double drift, double gain);

/// Smallest integer horizon whose analytic tail bound (Piterbarg-type, with
/// constant piterbarg_C) drops below target_prob.  The analytic plan is a
/// sizing heuristic; callers should record doubling_gap from an empirical
/// rerun with twice the horizon.
TruncationPlan plan_truncation(const UniformBoundFit& ubf, double gain,
                               double target_prob, double piterbarg_C = 10.0);

/// Q(t) = (I - P^T) X(t) pointwise; all paths must share one grid.
std::vector<SamplePath> compute_Q(const std::vector<SamplePath>& xbar,
                                  const Matrix& P);

/// Doubly-scaled workload on the scaled grid t in [0, T], step dt.
struct WorkloadSample {
  std::vector<SamplePath> xbar;  // X^delta per node
  std::vector<SamplePath> q;     // Q^delta per node
  std::vector<double> time_scale;   // snapped delta per node
  std::vector<double> space_scale;  // sigma(snapped delta)
};

/// End-to-end pipeline: scale factors at u, one multiscale input path,
/// per-node truncated reflection on the refinement grid, then Q^delta
/// assembled two ways (scale-then-multiply with the diagonal-conjugated
/// matrix vs multiply-then-scale) and asserted equal.  T_past is the
/// truncation horizon in each node's own scaled time.
WorkloadSample compute_Q_scaled(const NetworkSpec& spec,
                                const VarianceFunction& vf, double u, double T,
                                double dt, double T_past, const SeedSpec& seed,
                                const SamplerOptions& opt = {});

}  // namespace gqn
