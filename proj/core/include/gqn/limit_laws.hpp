#pragma once

#include <vector>

#include "gqn/network.hpp"
#include "gqn/sampler.hpp"
#include "gqn/workload.hpp"

namespace gqn {

/// Everything needed to sample the limiting workload: the self-similarity
/// index of the limit (lambda in light traffic, alpha in heavy), the
/// time-change exponent kappa = 1/(1-lambda) resp. xi = 1/(alpha-1), the
/// asymptotic rate ratios with their class partition, the input gains C, and
/// the limiting routing weights P*.
struct LimitLawSpec {
  Regime regime = Regime::light;
  double index = 0.5;         // Hurst index of the limiting fBm drivers
  double kappa_or_xi = 2.0;   // kappa > 1 (light) or xi < 0 (heavy)
  RLimits rlimits;
  ClassPartition partition;
  std::vector<double> C;
  Matrix Pstar;
};

/// Assembles a LimitLawSpec from a validated network and variance function;
/// the index is the regular-variation index of sigma at the end matching the
/// regime (lambda0 for light, alpha_inf for heavy).
LimitLawSpec make_limit_law(const NetworkSpec& spec, const VarianceFunction& vf);

/// Limiting routing weights p*_ij = p_ij * r_ij^{kappa*lambda} (light) or
/// p_ij * r_ij^{xi*alpha} (heavy); entries with r_ij = 0 vanish.
Matrix build_pstar(const Matrix& P, const RLimits& rl, double index,
                   Regime regime);

/// Covariance matrix function of the limiting drivers:
///   Sigma_ij(t,s) = (|t|^{2H} + |a s|^{2H} - |t - a s|^{2H}) / (2 a^H)
/// for i <= j with a = r_ij^{-kappa} (light) or r_ij^{xi} (heavy), zero when
/// r_ij = 0; i > j uses the symmetry Sigma_ij(t,s) = Sigma_ji(s,t).
Matrix build_sigma_matrix(const LimitLawSpec& lls, double t, double s);

/// One independent fBm per equivalence class; node i's path is the class
/// driver time-changed by a_i = r_{k(i),i}^{-kappa} (light, xi heavy) and
/// divided by a_i^H, evaluated on the uniform grid [t_start, t_end] with step
/// dt (grid must contain 0).  Time-change arguments are snapped to the
/// refinement grid of sample_multiscale.
std::vector<SamplePath> sample_B(const LimitLawSpec& lls, double t_start,
                                 double t_end, double dt, const SeedSpec& seed,
                                 const SamplerOptions& opt = {});

/// Limiting workload on [0, T]: X_i(t) = sup_{s in [-T_past, t]}
/// (C_i (B_i(t) - B_i(s)) - (t - s)) via truncated reflection with drift 1
/// and gain C_i, then Q = (I - P*^T) X.
WorkloadSample sample_limit_workload(const LimitLawSpec& lls, double T,
                                     double dt, const TruncationPlan& trunc,
                                     const SeedSpec& seed,
                                     const SamplerOptions& opt = {});

}  // namespace gqn
