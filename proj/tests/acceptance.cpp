// Acceptance gate: twelve end-to-end criteria, one PASS/FAIL line each.
// Tolerances are pinned in the code next to each criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "gqn/config.hpp"
#include "gqn/convergence.hpp"
#include "gqn/limit_laws.hpp"
#include "gqn/network.hpp"
#include "gqn/sampler.hpp"
#include "gqn/scaling.hpp"
#include "gqn/stats.hpp"
#include "gqn/variance.hpp"
#include "gqn/workload.hpp"

using namespace gqn;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::vector<int> g_only;  // optional criterion filter from argv

void run_criterion(int n, const std::string& label, double budget_s,
                   const std::function<std::string()>& body) {
  if (!g_only.empty() &&
      std::find(g_only.begin(), g_only.end(), n) == g_only.end())
    return;
  const auto start = std::chrono::steady_clock::now();
  std::string err;
  try {
    err = body();  // empty string means pass
  } catch (const std::exception& e) {
    err = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (err.empty())
    std::printf("PASS criterion %d: %s (%.1f s, budget %.0f s)\n", n,
                label.c_str(), secs, budget_s);
  else {
    std::printf("FAIL criterion %d: %s (%.1f s, budget %.0f s) -- %s\n", n,
                label.c_str(), secs, budget_s, err.c_str());
    ++g_failures;
  }
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---- shared networks ------------------------------------------------------

// three-node split: node 1 feeds nodes 2 and 3 in proportion p : 1-p
NetworkSpec split3(double p, RateSpec r1, RateSpec r2, RateSpec r3) {
  NetworkSpec s;
  s.n = 3;
  s.P = zero_matrix(3);
  s.P[0][1] = p;
  s.P[0][2] = 1.0 - p;
  s.rates = {r1, r2, r3};
  s.regime = Regime::light;
  return s;
}

// all pairwise rate-ratio limits vanish: full decoupling in the limit
NetworkSpec decoupling_network() {
  return split3(0.4, {2.5, 1.3}, {1.0, 1.15}, {1.0, 1.0});
}

// downstream rates asymptotically proportional (ratio c): nodes 2 and 3
// stay dependent in the limit
NetworkSpec dependent_network(double c) {
  return split3(0.4, {2.5, 1.15}, {1.0, 1.0}, {c, 1.0});
}

double spearman_se0(std::size_t n) { return 1.0 / std::sqrt(double(n - 1)); }

// ---- criterion bodies ------------------------------------------------------

std::string c1_delta_closed_form() {
  for (double lambda : {0.25, 0.5, 0.75}) {
    const auto vf = VarianceFunction::power(lambda);
    for (double x : geometric_grid(1e-3, 1e3, 100)) {
      const double d = solve_delta(vf, x);
      const double ref = std::pow(x, -1.0 / (1.0 - lambda));
      if (std::fabs(d / ref - 1.0) > 1e-10)
        return "lambda=" + fmt(lambda) + " x=" + fmt(x) + " rel err " +
               fmt(std::fabs(d / ref - 1.0));
    }
  }
  return "";
}

std::string c2_exact_covariance() {
  // constant rate ratios: r_2/r_1 = 0.3 at every u
  NetworkSpec spec;
  spec.n = 2;
  spec.P = zero_matrix(2);
  spec.P[0][1] = 0.5;
  spec.rates = {{2.0, 1.0}, {0.6, 1.0}};
  spec.regime = Regime::light;
  const auto vf = VarianceFunction::power(0.5);
  const auto lls = make_limit_law(spec, vf);
  const std::vector<double> grid = {0.25, 1.0, 2.5};
  for (double u : {10.0, 100.0, 1000.0})
    for (double t : grid)
      for (double s : grid) {
        const auto sigma = build_sigma_matrix(lls, t, s);
        for (std::size_t i = 0; i < 2; ++i)
          for (std::size_t j = 0; j < 2; ++j) {
            const double pre = exact_prelimit_covariance(vf, spec, u, i, j, t, s);
            if (std::fabs(pre - sigma[i][j]) > 1e-10)
              return "u=" + fmt(u) + " (i,j)=(" + fmt(double(i + 1)) + "," +
                     fmt(double(j + 1)) + ") t=" + fmt(t) + " s=" + fmt(s) +
                     " gap " + fmt(std::fabs(pre - sigma[i][j]));
          }
      }
  return "";
}

std::string c3_pstar_convergence() {
  const auto vf = VarianceFunction::power_sum({0.6, 1.4});
  const auto spec = split3(0.4, {1.0, 2.5}, {1.0, 1.0}, {0.5, 1.0});
  const auto lls = make_limit_law(spec, vf);
  double prev = std::numeric_limits<double>::infinity();
  double last = 0;
  for (double u : {10.0, 100.0, 1000.0, 10000.0}) {
    const auto pre = pstar_prelimit(spec, vf, u);
    double gap = 0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        gap = std::max(gap, std::fabs(pre[i][j] - lls.Pstar[i][j]));
    if (gap >= prev)
      return "gap not decreasing at u=" + fmt(u) + ": " + fmt(gap) +
             " >= " + fmt(prev);
    prev = gap;
    last = gap;
  }
  if (last >= 1e-2) return "gap at u=1e4 is " + fmt(last) + " >= 1e-2";
  return "";
}

std::string c4_sampler_exactness() {
  const int R = 10000;
  const std::size_t n = 4097;  // 2^12 steps on [0,1]
  const double dt = 1.0 / 4096.0;
  SamplerOptions opt;
  opt.allow_iid_shortcut = false;  // exercise the circulant embedding
  const std::vector<double> probes = {0.25, 0.5, 1.0};
  for (double lambda : {0.3, 0.5, 0.7}) {
    const auto vf = VarianceFunction::power(lambda);
    std::vector<std::size_t> idx;
    for (double t : probes) idx.push_back(std::size_t(std::lround(t / dt)));
    std::vector<std::vector<double>> prod(9);
    for (auto& v : prod) v.reserve(R);
    for (int r = 0; r < R; ++r) {
      const auto p = sample_path(vf, 0.0, 1.0, dt, SeedSpec{401, std::uint64_t(r), 4}, opt);
      if (p.values.size() != n) return "unexpected grid size";
      std::size_t k = 0;
      for (std::size_t a : idx)
        for (std::size_t b : idx) prod[k++].push_back(p.values[a] * p.values[b]);
    }
    const auto cov = [&](double s, double t) {
      return 0.5 * (std::pow(s, 2 * lambda) + std::pow(t, 2 * lambda) -
                    std::pow(std::fabs(t - s), 2 * lambda));
    };
    std::size_t k = 0;
    for (double s : probes)
      for (double t : probes) {
        double m = 0;
        for (double v : prod[k]) m += v;
        m /= R;
        // SE of a Gaussian product moment: Var(XY) = Var X Var Y + Cov^2
        const double se = std::sqrt(
            (cov(s, s) * cov(t, t) + cov(s, t) * cov(s, t)) / double(R));
        if (std::fabs(m - cov(s, t)) > 4.0 * se)
          return "lambda=" + fmt(lambda) + " (s,t)=(" + fmt(s) + "," + fmt(t) +
                 "): emp " + fmt(m) + " vs " + fmt(cov(s, t)) + " (4 SE = " +
                 fmt(4 * se) + ")";
        ++k;
      }
  }
  return "";
}

// shared between criteria 5 and 10
struct ReflectedBrownianRun {
  double p_hat = 0;       // empirical P(X(0) > 1)
  double T_past = 0;      // truncation horizon from the analytic plan
  double doubling_gap = 0;
  int modulus_violations = 0;
  bool done = false;
};
ReflectedBrownianRun g_rb;

void run_reflected_brownian() {
  if (g_rb.done) return;
  const auto vf = VarianceFunction::power(0.5);
  const auto ub = fit_uniform_bound(vf, Regime::light,
                                    geometric_grid(1e-6, 1e-2, 25),
                                    geometric_grid(1e-3, 1e3, 61));
  if (!ub.ok) throw std::runtime_error("uniform bound fit failed");
  const auto plan = plan_truncation(ub.fit, 1.0, 1e-4);
  g_rb.T_past = plan.T_past;

  const int R = 10000;
  const double dt = 0.0005, T = 0.02, zeta = 0.004;
  int hits = 0, violations = 0;
  for (int r = 0; r < R; ++r) {
    const auto j = sample_path(vf, -plan.T_past, T, dt,
                               SeedSpec{501, std::uint64_t(r), 5});
    const auto x = reflect_truncated(j, 1.0, 1.0);
    if (x.value_at(0.0) > 1.0) ++hits;
    // criterion 10: |X(t)-X(s)| <= 2 sup |M(t)-M(s)| over the same windows,
    // with M(t) = J(t) - t the free net-input process
    SamplePath m;
    m.t0 = 0.0;
    m.dt = dt;
    m.values.resize(x.values.size());
    const std::size_t zero = j.index_of(0.0);
    for (std::size_t k = 0; k < m.values.size(); ++k)
      m.values[k] = j.values[zero + k] - dt * double(k);
    if (sup_oscillation(x, zeta) > 2.0 * sup_oscillation(m, zeta) + 1e-12)
      ++violations;
  }
  g_rb.p_hat = double(hits) / R;
  g_rb.modulus_violations = violations;

  // coupled doubling check: same free path, horizons T_past and 2 T_past
  double gap = 0;
  const int Rd = 400;
  for (int r = 0; r < Rd; ++r) {
    const auto j = sample_path(vf, -2.0 * plan.T_past, 0.0, dt,
                               SeedSpec{502, std::uint64_t(r), 5});
    const auto a = reflect_truncated(j, 1.0, 1.0, -plan.T_past);
    const auto b = reflect_truncated(j, 1.0, 1.0, -2.0 * plan.T_past);
    gap += std::fabs(a.value_at(0.0) - b.value_at(0.0));
  }
  g_rb.doubling_gap = gap / Rd;
  g_rb.done = true;
}

std::string c5_reflected_brownian() {
  run_reflected_brownian();
  const int R = 10000;
  const double target = std::exp(-2.0);
  const double se = std::sqrt(target * (1.0 - target) / R);
  if (std::fabs(g_rb.p_hat - target) > 3.0 * se)
    return "P(X(0)>1) = " + fmt(g_rb.p_hat) + " vs " + fmt(target) +
           " (3 SE = " + fmt(3 * se) + ", T_past = " + fmt(g_rb.T_past) + ")";
  if (g_rb.doubling_gap >= 1e-3)
    return "doubling gap " + fmt(g_rb.doubling_gap) + " >= 1e-3";
  return "";
}

// per-replicate workload values at time 0 for all nodes
std::vector<std::vector<double>> prelimit_at_zero(const NetworkSpec& spec,
                                                  const VarianceFunction& vf,
                                                  double u, int R, double T,
                                                  double dt, double T_past,
                                                  std::uint64_t seed,
                                                  const SamplerOptions& opt) {
  std::vector<std::vector<double>> vals(spec.n, std::vector<double>(R));
  for (int r = 0; r < R; ++r) {
    const auto ws = compute_Q_scaled(spec, vf, u, T, dt, T_past,
                                     SeedSpec{seed, std::uint64_t(r), 6}, opt);
    for (std::size_t i = 0; i < spec.n; ++i)
      vals[i][r] = ws.q[i].value_at(0.0);
  }
  return vals;
}

std::vector<std::vector<double>> limit_at_zero(const LimitLawSpec& lls, int R,
                                               double T, double dt,
                                               double T_past,
                                               std::uint64_t seed,
                                               const SamplerOptions& opt) {
  TruncationPlan trunc;
  trunc.T_past = T_past;
  const std::size_t n = lls.C.size();
  std::vector<std::vector<double>> vals(n, std::vector<double>(R));
  for (int r = 0; r < R; ++r) {
    const auto ws = sample_limit_workload(lls, T, dt, trunc,
                                          SeedSpec{seed, std::uint64_t(r), 7},
                                          opt);
    for (std::size_t i = 0; i < n; ++i) vals[i][r] = ws.q[i].value_at(0.0);
  }
  return vals;
}

std::string c6_example1_decoupling() {
  const int R = 10000;
  const auto vf = VarianceFunction::power(0.5);
  const auto spec = decoupling_network();
  const auto lls = make_limit_law(spec, vf);
  const double T = 0.1, dt = 0.02, T_past = 10.0;
  SamplerOptions opt;
  opt.grid_budget = std::size_t(1) << 18;  // u=1e3 scale spread needs ~2e5 pts

  // limit: all three cross-node rank correlations within 4 SE of zero
  const auto lim = limit_at_zero(lls, R, T, dt, T_past, 601, opt);
  const double tol = 4.0 * spearman_se0(R);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) {
      const double rho = spearman(lim[i], lim[j]);
      if (std::fabs(rho) > tol)
        return "limit corr(" + fmt(double(i + 1)) + "," + fmt(double(j + 1)) +
               ") = " + fmt(rho) + " exceeds " + fmt(tol);
    }

  // pre-limit: cross-node correlations non-increasing along u (within SE)
  std::vector<std::vector<double>> rho_u;  // per u: the three pair corrs
  std::vector<std::vector<double>> se_u;
  for (double u : {10.0, 100.0, 1000.0}) {
    const auto pre = prelimit_at_zero(spec, vf, u, R, T, dt, T_past, 602, opt);
    std::vector<double> rhos, ses;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) {
        const auto est = bootstrap_paired(
            [](const std::vector<double>& a, const std::vector<double>& b) {
              return spearman(a, b);
            },
            pre[i], pre[j], 600 + i * 3 + j);
        rhos.push_back(est.value);
        ses.push_back(est.se);
      }
    rho_u.push_back(rhos);
    se_u.push_back(ses);
  }
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t s = 1; s < rho_u.size(); ++s) {
      const double slack = 2.0 * (se_u[s - 1][k] + se_u[s][k]);
      if (rho_u[s][k] > rho_u[s - 1][k] + slack)
        return "pair " + fmt(double(k)) + " corr increased along u: " +
               fmt(rho_u[s - 1][k]) + " -> " + fmt(rho_u[s][k]) + " (slack " +
               fmt(slack) + ")";
    }
  return "";
}

// Seeded regression baseline for criterion 7: pre-limit corr(Q_2(0), Q_3(0))
// at u = 1e3 with the seeds and discretization pinned below. Recorded from
// the first full run of this binary; a drift beyond 3 bootstrap SEs flags a
// behavioral change in the pipeline.
constexpr double kC7PrelimitBaseline = 0.606087;

std::string c7_example2_dependence() {
  const int R = 10000;
  const auto vf = VarianceFunction::power(0.5);
  const auto spec = dependent_network(0.5);
  const auto lls = make_limit_law(spec, vf);
  const double T = 0.05, dt = 0.01, T_past = 12.0;
  SamplerOptions opt;
  opt.grid_budget = std::size_t(1) << 18;

  const auto lim = limit_at_zero(lls, R, T, dt, T_past, 701, opt);
  const auto est = bootstrap_paired(
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return spearman(a, b);
      },
      lim[1], lim[2], 77);
  if (est.value <= 4.0 * est.se)
    return "limit corr(2,3) = " + fmt(est.value) + " not above 4 SE = " +
           fmt(4 * est.se);

  const auto pre = prelimit_at_zero(spec, vf, 1000.0, R, T, dt, T_past, 702, opt);
  const auto pe = bootstrap_paired(
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return spearman(a, b);
      },
      pre[1], pre[2], 78);
  if (std::fabs(pe.value - kC7PrelimitBaseline) > 3.0 * pe.se)
    return "pre-limit corr(2,3) at u=1e3 = " + fmt(pe.value) +
           " drifted from baseline " + fmt(kC7PrelimitBaseline) +
           " (3 SE = " + fmt(3 * pe.se) + ")";
  return "";
}

std::string c8_fdd_convergence() {
  const int R = 10000;
  const auto vf = VarianceFunction::power_sum({0.6, 1.4});
  const auto spec = NetworkSpec::single_node({1.0, 1.0}, Regime::light);
  const auto lls = make_limit_law(spec, vf);
  const double T = 0.01, dt = 0.005, T_past = 20.0;
  SamplerOptions opt;

  const auto lim = limit_at_zero(lls, R, T, dt, T_past, 801, opt)[0];
  std::vector<double> ks_u;
  // common random numbers across u: same replicate seeds, so the KS
  // differences reflect the systematic pre-limit gap
  for (double u : {10.0, 100.0, 1000.0}) {
    const auto pre = prelimit_at_zero(spec, vf, u, R, T, dt, T_past, 802, opt)[0];
    ks_u.push_back(ks_statistic(pre, lim));
  }
  const double slack = 0.005;  // CRN residual noise allowance
  for (std::size_t k = 1; k < ks_u.size(); ++k)
    if (ks_u[k] > ks_u[k - 1] + slack)
      return "KS not decreasing: " + fmt(ks_u[k - 1]) + " -> " + fmt(ks_u[k]);
  if (!(ks_u.back() < ks_u.front()))
    return "KS at u=1e3 (" + fmt(ks_u.back()) + ") not below KS at u=10 (" +
           fmt(ks_u.front()) + ")";
  if (ks_u.back() >= 0.05)
    return "KS at u=1e3 is " + fmt(ks_u.back()) + " >= 0.05";
  return "";
}

std::string c9_uniform_bound_suite() {
  struct Case {
    VarianceFunction vf;
    Regime regime;
    const char* name;
  };
  const std::vector<Case> cases = {
      {VarianceFunction::power(0.3), Regime::light, "power 0.3 light"},
      {VarianceFunction::power(0.3), Regime::heavy, "power 0.3 heavy"},
      {VarianceFunction::power(0.5), Regime::light, "power 0.5 light"},
      {VarianceFunction::power(0.5), Regime::heavy, "power 0.5 heavy"},
      {VarianceFunction::power(0.7), Regime::light, "power 0.7 light"},
      {VarianceFunction::power(0.7), Regime::heavy, "power 0.7 heavy"},
      {VarianceFunction::power_sum({0.6, 1.4}), Regime::light, "power_sum light"},
      {VarianceFunction::power_sum({0.6, 1.4}), Regime::heavy, "power_sum heavy"},
      {VarianceFunction::integrated_ou(), Regime::heavy, "integrated_ou heavy"},
  };
  for (const auto& c : cases) {
    const bool light = c.regime == Regime::light;
    const auto gx = light ? geometric_grid(1e-6, 1e-2, 25)
                          : geometric_grid(1e2, 1e6, 25);
    const auto gt = geometric_grid(1e-3, 1e3, 61);
    const auto res = fit_uniform_bound(c.vf, c.regime, gx, gt);
    if (!res.ok) return std::string(c.name) + ": fit failed: " + res.message;
    const auto fx = light ? geometric_grid(1e-6, 1e-2, 100)
                          : geometric_grid(1e2, 1e6, 100);
    const auto fine = verify_uniform_bound(c.vf, res.fit, c.regime, fx,
                                           geometric_grid(1e-3, 1e3, 244));
    if (!fine.ok)
      return std::string(c.name) + ": 4x-grid verification failed: " +
             fine.message;
  }
  return "";
}

std::string c10_modulus_inequality() {
  run_reflected_brownian();
  if (g_rb.modulus_violations != 0)
    return fmt(double(g_rb.modulus_violations)) +
           " of 10000 replicates violate the pathwise bound";
  return "";
}

std::string c11_degenerate_guard() {
  const auto vf = VarianceFunction::integrated_ou();

  const auto light = check_assumptions(
      NetworkSpec::single_node({1.0, 1.0}, Regime::light), vf, {10.0});
  if (light.pass) return "integrated_ou + light was not rejected";
  bool flagged = false;
  for (const auto& c : light.checks)
    if (!c.pass && (c.name == "degenerate-limit" || c.name == "L1"))
      flagged = true;
  if (!flagged) return "light rejection did not mention the degenerate limit";

  const auto heavy = check_assumptions(
      NetworkSpec::single_node({1.0, -1.0}, Regime::heavy), vf, {0.01});
  if (!heavy.pass) {
    std::string why;
    for (const auto& c : heavy.checks)
      if (!c.pass) why += c.name + ": " + c.message + "; ";
    return "integrated_ou + heavy was rejected: " + why;
  }
  const double idx = estimate_rv_index(vf, RvEnd::infinity);
  if (std::fabs(idx - 0.5) > 1e-3)
    return "heavy-regime index " + fmt(idx) + " not ~0.5";
  return "";
}

std::string c12_converge_determinism() {
  const fs::path scratch = GQN_TEST_TMPDIR;
  fs::create_directories(scratch);
  const fs::path cfg_path = scratch / "converge.json";
  {
    std::ofstream out(cfg_path, std::ios::binary);
    out << R"({
  "variance_function": {"kind": "power", "lambda": 0.5},
  "network": {
    "n": 3,
    "P": [[1, 2, 0.4], [1, 3, 0.6]],
    "rates": [[2.5, 1.3], [1.0, 1.15], [1.0, 1.0]],
    "regime": "light"
  },
  "simulation": {
    "T": 0.1, "dt": 0.02, "replicates": 1200,
    "u_grid": [10.0, 100.0], "master_seed": 12,
    "truncation": 6.0, "zeta_grid": [0.02, 0.06]
  }
})";
  }
  const auto run = [&](const fs::path& out_dir, int threads) {
    fs::create_directories(out_dir);
    const std::string cmd = std::string(GQN_CLI_PATH) + " converge --config " +
                            cfg_path.string() + " --out " + out_dir.string() +
                            " --threads " + std::to_string(threads) + " > " +
                            (out_dir / "log.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  const fs::path d1 = scratch / "run1", d2 = scratch / "run2",
                 d3 = scratch / "run3";
  if (run(d1, 1) != 0) return "first converge run failed";
  if (run(d2, 1) != 0) return "second converge run failed";
  if (run(d3, 2) != 0) return "threaded converge run failed";
  for (const char* f : {"convergence.json", "convergence.csv"}) {
    const auto a = slurp(d1 / f), b = slurp(d2 / f), c = slurp(d3 / f);
    if (a.empty()) return std::string(f) + " is empty";
    if (a != b) return std::string(f) + " differs between identical runs";
    if (a != c) return std::string(f) + " differs when the thread count changes";
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) g_only.push_back(std::atoi(argv[i]));
  run_criterion(1, "scaling equation matches the power-law closed form", 1,
                c1_delta_closed_form);
  run_criterion(2, "exact pre-limit covariance equals the limit matrix", 1,
                c2_exact_covariance);
  run_criterion(3, "pre-limit routing weights converge to P*", 1,
                c3_pstar_convergence);
  run_criterion(4, "circulant sampler reproduces the fBm covariance", 120,
                c4_sampler_exactness);
  run_criterion(5, "reflected Brownian tail probability", 120,
                c5_reflected_brownian);
  run_criterion(6, "full decoupling network: limit independence", 600,
                c6_example1_decoupling);
  run_criterion(7, "dependent downstream pair: correlation persists", 600,
                c7_example2_dependence);
  run_criterion(8, "marginal law converges to the limit (KS)", 600,
                c8_fdd_convergence);
  run_criterion(9, "uniform variance-ratio bound fits and re-verifies", 10,
                c9_uniform_bound_suite);
  run_criterion(10, "pathwise reflection modulus bound", 120,
                c10_modulus_inequality);
  run_criterion(11, "degenerate light-traffic limit is rejected", 10,
                c11_degenerate_guard);
  run_criterion(12, "convergence scan outputs are byte-identical", 300,
                c12_converge_determinism);
  if (g_failures) {
    std::printf("%d of 12 criteria failed\n", g_failures);
    return 1;
  }
  std::printf("all 12 criteria passed\n");
  return 0;
}
