#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gqn/variance.hpp"

namespace gqn {

/// Power-law output rate r(u) = coeff * u^exponent.
struct RateSpec {
  double coeff = 1.0;
  double exponent = 1.0;

  double at(double u) const;
};

using Matrix = std::vector<std::vector<double>>;  // row-major, n x n

Matrix zero_matrix(std::size_t n);

/// Feedforward network: strictly upper-triangular routing matrix P with at
/// most one positive entry per column, power-law rates, one traffic regime.
struct NetworkSpec {
  std::size_t n = 1;
  Matrix P;  // n x n
  std::vector<RateSpec> rates;
  Regime regime = Regime::light;

  static NetworkSpec single_node(RateSpec rate, Regime regime);
};

struct TopologyViolation {
  std::string what;
  std::size_t i = 0, j = 0;
};

/// Structural checks on P: strict upper-triangularity, entries in [0,1],
/// at most one positive entry per column (no merging), row sums <= 1.
std::vector<TopologyViolation> validate_topology(const Matrix& P);

/// Effective input gains C_i = (I - P^T)^{-1}_{i,1} by forward substitution
/// on the unit-lower-triangular system.
std::vector<double> compute_C(const Matrix& P);

/// Asymptotic rate ratios frak r_{ij} = lim r_j(u)/r_i(u) for i <= j,
/// stored densely with r_{ii} = 1.
struct RLimits {
  std::size_t n = 0;
  Matrix r;

  double at(std::size_t i, std::size_t j) const {
    return i <= j ? r[i][j] : r[j][i];
  }
};

/// Throws std::runtime_error directing the caller to relabel when some
/// limit falls outside [0,1].
RLimits compute_r_limits(const NetworkSpec& spec);

/// Equivalence classes of nodes with frak r_{ij} > 0.
struct ClassPartition {
  std::vector<std::vector<std::size_t>> classes;  // I_1..I_m (node indices)
  std::vector<std::size_t> f;  // node -> class index
  std::vector<std::size_t> l;  // class -> minimal node
  std::vector<std::size_t> k;  // node -> l(f(node))
};

ClassPartition partition_classes(const RLimits& rl);

struct RelabelResult {
  std::vector<std::size_t> permutation;  // new index -> original index
  NetworkSpec spec;
  bool identity = true;
};

/// Stable sort of nodes by asymptotic rate order (descending exponent, then
/// descending coefficient) so that all frak r_{ij} with i < j land in [0,1].
/// Throws when the permuted matrix is not strictly upper-triangular (an N1
/// violation).
RelabelResult relabel(const NetworkSpec& spec);

struct AssumptionCheck {
  std::string name;
  bool pass = true;
  std::string message;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  bool pass = true;

  void add(std::string name, bool ok, std::string msg = "");
};

/// Full validation: topology, N1 (symbolic + numeric at each u in u_probe),
/// N2, N3, regime/rate-sign consistency, L1/L2 or H1/H2 via the estimated
/// regular-variation indices, and the degenerate-limit guard for light
/// traffic with sigma growing linearly at 0.
AssumptionReport check_assumptions(const NetworkSpec& spec,
                                   const VarianceFunction& vf,
                                   const std::vector<double>& u_probe);

}  // namespace gqn
