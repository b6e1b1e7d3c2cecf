#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gqn/sampler.hpp"

namespace gqn {

/// Point estimate with a bootstrap standard error.
struct Estimate {
  double value = 0;
  double se = 0;
};

/// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// 1-Wasserstein distance, computed exactly as the area between the two
/// empirical CDFs.
double wasserstein1(std::vector<double> a, std::vector<double> b);

/// Mid-ranks (ties averaged), 1-based.
std::vector<double> ranks(const std::vector<double>& v);

double pearson(const std::vector<double>& a, const std::vector<double>& b);

/// Pearson correlation of ranks.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

/// p in [0,1]; linear interpolation between order statistics.
double percentile(std::vector<double> v, double p);

using TwoSampleStat =
    std::function<double(const std::vector<double>&, const std::vector<double>&)>;

/// Statistic of two independent samples with SE from 200 independent
/// bootstrap resamples of each.
Estimate bootstrap_two_sample(const TwoSampleStat& stat,
                              const std::vector<double>& a,
                              const std::vector<double>& b, std::uint64_t seed,
                              int resamples = 200);

/// Statistic of paired samples (resampled jointly).
Estimate bootstrap_paired(const TwoSampleStat& stat,
                          const std::vector<double>& a,
                          const std::vector<double>& b, std::uint64_t seed,
                          int resamples = 200);

/// sup_{|t-s| <= zeta} |p(t) - p(s)| over the path's grid, via sliding
/// max/min windows in linear time.  Throws when zeta < dt.
double sup_oscillation(const SamplePath& p, double zeta);

}  // namespace gqn
