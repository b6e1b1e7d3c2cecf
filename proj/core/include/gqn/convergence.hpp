#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gqn/limit_laws.hpp"
#include "gqn/network.hpp"
#include "gqn/stats.hpp"
#include "gqn/workload.hpp"

namespace gqn {

/// Exact Cov(J^delta_{u,i}(t), J^delta_{u,j}(s)) from the three-term
/// stationary-increment identity; no sampling.
double exact_prelimit_covariance(const VarianceFunction& vf,
                                 const NetworkSpec& spec, double u,
                                 std::size_t i, std::size_t j, double t,
                                 double s);

/// Monte-Carlo samples at fixed evaluation times:
/// values[node][time_idx][replicate].
struct SampleSet {
  std::vector<double> times;
  std::vector<std::vector<std::vector<double>>> values;

  std::size_t nodes() const { return values.size(); }
  std::size_t replicates() const {
    return values.empty() || values[0].empty() ? 0 : values[0][0].size();
  }
};

struct MarginalDistance {
  std::size_t node = 0;
  double time = 0;
  Estimate ks;
  Estimate w1;
};

struct PairCorrGap {
  std::size_t i = 0, j = 0;
  double corr_pre = 0, corr_limit = 0;
  Estimate gap;  // |spearman_pre - spearman_limit|, worst evaluation time
};

struct FddDistance {
  std::vector<MarginalDistance> marginals;
  std::vector<PairCorrGap> pairs;
};

/// Per-marginal KS and 1-Wasserstein distances plus per-pair rank-correlation
/// gaps, each with bootstrap SEs.  Requires >= 1000 replicates on both sides
/// and matching evaluation times.
FddDistance fdd_distance(const SampleSet& pre, const SampleSet& limit,
                         std::uint64_t seed);

struct PairCorr {
  std::size_t i = 0, j = 0;
  Estimate corr;  // Spearman
};

struct DecouplingSummary {
  double max_cross_corr = 0;   // |corr|, worst cross-class pair
  double max_cross_se = 0;
  std::vector<PairCorr> cross;
  std::vector<PairCorr> within;
};

/// Rank correlations at the first evaluation time, split along the class
/// partition.
DecouplingSummary decoupling_metric(const SampleSet& samples,
                                    const ClassPartition& partition,
                                    std::uint64_t seed);

struct ModulusRow {
  double zeta = 0;
  double q99 = 0;  // empirical 99th percentile of the sup-oscillation
};

/// Empirical 99th percentile of sup_{|t-s|<=zeta} |path(t)-path(s)| across
/// replicates, for each zeta.
std::vector<ModulusRow> modulus_diagnostic(const std::vector<SamplePath>& paths,
                                           const std::vector<double>& zeta_grid);

struct DeterministicGaps {
  double u = 0;
  double cov_gap = 0;    // max |exact prelimit cov - Sigma| over probe pairs
  double pstar_gap = 0;  // max entry |pstar_prelimit(u) - P*|
};

struct ScanConfig {
  std::vector<double> u_grid;
  std::vector<double> times{0.0};
  int replicates = 1000;
  double T = 1.0;
  double dt = 0.01;
  double T_past = 10.0;  // truncation horizon, scaled time
  std::vector<double> zeta_grid;
  std::uint64_t master_seed = 1;
  SamplerOptions sampler;
};

struct ConvergenceReport {
  std::vector<double> u_grid;
  std::vector<DeterministicGaps> deterministic;
  std::vector<FddDistance> mc;  // aligned with u_grid; empty if replicates==0
  DecouplingSummary limit_decoupling;
  std::vector<ModulusRow> modulus_pre;    // at the largest u
  std::vector<ModulusRow> modulus_limit;
  std::vector<std::string> stage_errors;  // partial-failure flags
};

/// Orchestrates compute_Q_scaled per u and sample_limit_workload once, then
/// all deterministic and Monte-Carlo diagnostics.  threads caps replicate
/// parallelism.
ConvergenceReport run_convergence_scan(const NetworkSpec& spec,
                                       const VarianceFunction& vf,
                                       const ScanConfig& cfg, int threads = 1);

struct ReportMeta {
  std::string config_hash;
  std::string version;
};

std::string report_to_json(const ConvergenceReport& rep, const ReportMeta& meta);

/// One row per (u, node, time) with KS/W1 and SEs; 12 significant digits.
std::string report_to_csv(const ConvergenceReport& rep, const ReportMeta& meta);

/// Simple log-x line chart of the per-node KS distance vs u.
std::string report_to_svg(const ConvergenceReport& rep);

}  // namespace gqn
