#include "gqn/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gqn {

double RateSpec::at(double u) const {
  if (u <= 0) throw std::invalid_argument("rate: u must be > 0");
  return coeff * std::pow(u, exponent);
}

Matrix zero_matrix(std::size_t n) {
  return Matrix(n, std::vector<double>(n, 0.0));
}

NetworkSpec NetworkSpec::single_node(RateSpec rate, Regime regime) {
  NetworkSpec s;
  s.n = 1;
  s.P = zero_matrix(1);
  s.rates = {rate};
  s.regime = regime;
  return s;
}

std::vector<TopologyViolation> validate_topology(const Matrix& P) {
  std::vector<TopologyViolation> out;
  const std::size_t n = P.size();
  for (const auto& row : P)
    if (row.size() != n) {
      out.push_back({"routing matrix is not square", 0, 0});
      return out;
    }
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double p = P[i][j];
      if (p < 0 || p > 1)
        out.push_back({"entry outside [0,1]", i, j});
      if (j <= i && p > 0)
        out.push_back({"not strictly upper-triangular", i, j});
      row_sum += p;
    }
    if (row_sum > 1 + 1e-12)
      out.push_back({"row sum exceeds 1", i, 0});
  }
  for (std::size_t j = 1; j < n; ++j) {
    std::size_t positives = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (P[i][j] > 0) ++positives;
    if (positives > 1)
      out.push_back({"column has more than one positive entry (merging)", 0, j});
  }
  return out;
}

std::vector<double> compute_C(const Matrix& P) {
  auto violations = validate_topology(P);
  if (!violations.empty())
    throw std::invalid_argument("compute_C: invalid topology: " +
                                violations.front().what);
  const std::size_t n = P.size();
  // (I - P^T) is unit lower-triangular; solve (I - P^T) C = e1
  std::vector<double> c(n, 0.0);
  c[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    double acc = 0;
    for (std::size_t j = 0; j < i; ++j) acc += P[j][i] * c[j];
    c[i] = acc;
  }
  return c;
}

RLimits compute_r_limits(const NetworkSpec& spec) {
  RLimits rl;
  rl.n = spec.n;
  rl.r = zero_matrix(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    rl.r[i][i] = 1.0;
    for (std::size_t j = i + 1; j < spec.n; ++j) {
      const auto& ri = spec.rates[i];
      const auto& rj = spec.rates[j];
      // light traffic probes u -> infinity, heavy traffic u -> 0, so the
      // exponent comparison flips between the regimes
      const double diff = (spec.regime == Regime::light)
                              ? rj.exponent - ri.exponent
                              : ri.exponent - rj.exponent;
      double lim;
      if (diff < 0)
        lim = 0.0;  // r_j vanishes relative to r_i toward the regime's end
      else if (diff > 0)
        lim = std::numeric_limits<double>::infinity();
      else
        lim = rj.coeff / ri.coeff;
      if (!(lim >= 0 && lim <= 1)) {
        std::ostringstream os;
        os << "limit r_" << j + 1 << "(u)/r_" << i + 1 << "(u) = " << lim
           << " outside [0,1]; relabel the nodes";
        throw std::runtime_error(os.str());
      }
      rl.r[i][j] = lim;
    }
  }
  return rl;
}

ClassPartition partition_classes(const RLimits& rl) {
  const std::size_t n = rl.n;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rl.r[i][j] > 0) parent[find(i)] = find(j);

  ClassPartition cp;
  cp.f.assign(n, 0);
  std::vector<long> class_of_root(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    if (class_of_root[root] < 0) {
      class_of_root[root] = long(cp.classes.size());
      cp.classes.emplace_back();
    }
    cp.f[i] = std::size_t(class_of_root[root]);
    cp.classes[cp.f[i]].push_back(i);
  }
  cp.l.resize(cp.classes.size());
  for (std::size_t c = 0; c < cp.classes.size(); ++c)
    cp.l[c] = *std::min_element(cp.classes[c].begin(), cp.classes[c].end());
  cp.k.resize(n);
  for (std::size_t i = 0; i < n; ++i) cp.k[i] = cp.l[cp.f[i]];
  return cp;
}

RelabelResult relabel(const NetworkSpec& spec) {
  std::vector<std::size_t> order(spec.n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ra = spec.rates[a];
    const auto& rb = spec.rates[b];
    // descending rate toward the regime's end: u -> infinity for light
    // traffic, u -> 0 for heavy traffic
    if (ra.exponent != rb.exponent)
      return spec.regime == Regime::light ? ra.exponent > rb.exponent
                                          : ra.exponent < rb.exponent;
    return ra.coeff > rb.coeff;
  });

  RelabelResult res;
  res.permutation = order;
  res.identity = std::is_sorted(order.begin(), order.end());
  res.spec = spec;
  for (std::size_t i = 0; i < spec.n; ++i) {
    res.spec.rates[i] = spec.rates[order[i]];
    for (std::size_t j = 0; j < spec.n; ++j)
      res.spec.P[i][j] = spec.P[order[i]][order[j]];
  }
  for (std::size_t i = 0; i < spec.n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (res.spec.P[i][j] > 0)
        throw std::runtime_error(
            "relabel: permuted routing matrix is not strictly "
            "upper-triangular; N1 must be violated");
  return res;
}

void AssumptionReport::add(std::string name, bool ok, std::string msg) {
  checks.push_back({std::move(name), ok, std::move(msg)});
  pass = pass && ok;
}

AssumptionReport check_assumptions(const NetworkSpec& spec,
                                   const VarianceFunction& vf,
                                   const std::vector<double>& u_probe) {
  AssumptionReport rep;

  const auto violations = validate_topology(spec.P);
  for (const auto& v : violations) {
    std::ostringstream os;
    os << v.what << " at (" << v.i + 1 << "," << v.j + 1 << ")";
    rep.add("topology", false, os.str());
  }
  if (violations.empty()) rep.add("topology", true);
  if (spec.rates.size() != spec.n) {
    rep.add("rates", false, "rate count does not match node count");
    return rep;
  }

  // regime / rate-sign consistency
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double e = spec.rates[i].exponent;
    const bool ok = (spec.regime == Regime::light) ? e > 0 : e < 0;
    if (!ok) {
      std::ostringstream os;
      os << "node " << i + 1 << " exponent " << e << " inconsistent with "
         << (spec.regime == Regime::light ? "light" : "heavy") << " regime";
      rep.add("regime", false, os.str());
    }
  }

  // N1: p_ij r_i(u) > r_j(u); symbolic for power laws plus numeric probes
  bool n1 = true;
  std::ostringstream n1msg;
  for (std::size_t i = 0; i < spec.n; ++i)
    for (std::size_t j = 0; j < spec.n; ++j) {
      if (spec.P[i][j] <= 0) continue;
      const auto& ri = spec.rates[i];
      const auto& rj = spec.rates[j];
      // asymptotically toward the regime's end the larger exponent wins in
      // light traffic, the smaller one in heavy traffic
      const bool i_dominates = (spec.regime == Regime::light)
                                   ? ri.exponent > rj.exponent
                                   : ri.exponent < rj.exponent;
      bool ok = i_dominates || (ri.exponent == rj.exponent &&
                                spec.P[i][j] * ri.coeff > rj.coeff);
      for (double u : u_probe)
        ok = ok && spec.P[i][j] * ri.at(u) > rj.at(u);
      if (!ok) {
        n1 = false;
        n1msg << "p_" << i + 1 << j + 1 << " r_" << i + 1 << "(u) <= r_"
              << j + 1 << "(u); ";
      }
    }
  rep.add("N1", n1, n1msg.str());

  // N2: input centered, so it reduces to r_i(u) > 0
  bool n2 = true;
  for (const auto& r : spec.rates) n2 = n2 && r.coeff > 0;
  rep.add("N2", n2, n2 ? "" : "some rate coefficient is not positive");

  // N3: pairwise limits exist and land in [0,1]
  try {
    compute_r_limits(spec);
    rep.add("N3", true);
  } catch (const std::exception& e) {
    rep.add("N3", false, e.what());
  }

  // sigma regularity for the declared regime
  const RvEnd end = (spec.regime == Regime::light) ? RvEnd::zero : RvEnd::infinity;
  double idx = std::numeric_limits<double>::quiet_NaN();
  try {
    idx = estimate_rv_index(vf, end);
  } catch (const RvIndexError& e) {
    rep.add(spec.regime == Regime::light ? "L1" : "H1", false, e.what());
  }
  if (std::isfinite(idx)) {
    std::ostringstream os;
    os << "estimated index " << idx;
    if (spec.regime == Regime::light) {
      const bool l1 = idx > 1e-6 && idx < 1.0 - 1e-3;
      rep.add("L1", l1, os.str());
      if (idx >= 1.0 - 1e-3)
        rep.add("degenerate-limit", false,
                "sigma grows linearly at 0: the light-traffic limit is "
                "degenerate for this input");
      const double beta = vf.beta_bound;
      rep.add("L2", beta > 0 && beta < 1,
              beta < 1 ? "" : "no power bound with beta < 1 at infinity");
    } else {
      rep.add("H1", idx > 1e-6 && idx < 1.0 - 1e-3, os.str());
      const double beta = std::min(vf.lambda0, 1.0);
      rep.add("H2", beta > 0 && beta <= 1);
    }
  }
  return rep;
}

}  // namespace gqn
