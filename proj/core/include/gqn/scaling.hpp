#pragma once

#include <vector>

#include "gqn/network.hpp"
#include "gqn/variance.hpp"

namespace gqn {

/// Per-node space-time scaling derived from the equation x * delta / sigma(delta) = 1
/// evaluated at x = r_i(u).
struct ScaleFactors {
  std::vector<double> time_scale;   // delta(r_i(u))
  std::vector<double> space_scale;  // sigma(delta(r_i(u)))
};

/// Solve x * d / sigma(d) = 1 for d by bisection on a geometrically expanded
/// log-scale bracket. Residual |x d / sigma(d) - 1| < 1e-12.
double solve_delta(const VarianceFunction& vf, double x);

/// Log-log slope of x -> delta(x) over four decades toward the relevant end
/// (x -> infinity for light traffic, x -> 0 for heavy). Expected index is
/// 1/(lambda - 1) resp. 1/(alpha - 1). Throws RvIndexError when per-decade
/// slopes disagree by more than 1e-2.
double check_delta_rv(const VarianceFunction& vf, Regime regime);

/// (delta(r_i(u)), sigma(delta(r_i(u)))) for every node.
ScaleFactors scale_factors(const NetworkSpec& spec, const VarianceFunction& vf,
                           double u);

/// Pre-limit routing weights P_{ij} * (r_i delta_i) / (r_j delta_j)
///                         = P_{ij} * sigma(delta_i) / sigma(delta_j).
Matrix pstar_prelimit(const NetworkSpec& spec, const VarianceFunction& vf,
                      double u);

}  // namespace gqn
