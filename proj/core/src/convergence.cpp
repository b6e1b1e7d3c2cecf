#include "gqn/convergence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "gqn/config.hpp"
#include "gqn/rng.hpp"
#include "gqn/scaling.hpp"

namespace gqn {

double exact_prelimit_covariance(const VarianceFunction& vf,
                                 const NetworkSpec& spec, double u,
                                 std::size_t i, std::size_t j, double t,
                                 double s) {
  if (i >= spec.n || j >= spec.n)
    throw std::invalid_argument("exact_prelimit_covariance: node out of range");
  const double di = solve_delta(vf, spec.rates[i].at(u));
  const double dj = solve_delta(vf, spec.rates[j].at(u));
  return (vf.sigma2(di * std::fabs(t)) + vf.sigma2(dj * std::fabs(s)) -
          vf.sigma2(std::fabs(di * t - dj * s))) /
         (2.0 * sigma_eval(vf, di) * sigma_eval(vf, dj));
}

namespace {

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= n) return;
      try {
        fn(k);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mutex);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int nt = std::min<int>(threads, int(n));
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(seed ^ a) ^ b);
}

}  // namespace

FddDistance fdd_distance(const SampleSet& pre, const SampleSet& limit,
                         std::uint64_t seed) {
  if (pre.nodes() != limit.nodes() || pre.times != limit.times)
    throw std::invalid_argument("fdd_distance: sample sets do not align");
  if (pre.replicates() < 1000 || limit.replicates() < 1000)
    throw std::invalid_argument("fdd_distance: need >= 1000 replicates");

  FddDistance out;
  for (std::size_t node = 0; node < pre.nodes(); ++node)
    for (std::size_t ti = 0; ti < pre.times.size(); ++ti) {
      MarginalDistance m;
      m.node = node;
      m.time = pre.times[ti];
      const auto& a = pre.values[node][ti];
      const auto& b = limit.values[node][ti];
      m.ks = bootstrap_two_sample(
          [](const std::vector<double>& x, const std::vector<double>& y) {
            return ks_statistic(x, y);
          },
          a, b, sub_seed(seed, node, 2 * ti));
      m.w1 = bootstrap_two_sample(
          [](const std::vector<double>& x, const std::vector<double>& y) {
            return wasserstein1(x, y);
          },
          a, b, sub_seed(seed, node, 2 * ti + 1));
      out.marginals.push_back(std::move(m));
    }

  const auto corr = [](const std::vector<double>& x,
                       const std::vector<double>& y) { return spearman(x, y); };
  for (std::size_t i = 0; i < pre.nodes(); ++i)
    for (std::size_t j = i + 1; j < pre.nodes(); ++j) {
      PairCorrGap pg;
      pg.i = i;
      pg.j = j;
      std::size_t worst = 0;
      double worst_gap = -1;
      for (std::size_t ti = 0; ti < pre.times.size(); ++ti) {
        const double g = std::fabs(spearman(pre.values[i][ti], pre.values[j][ti]) -
                                   spearman(limit.values[i][ti], limit.values[j][ti]));
        if (g > worst_gap) {
          worst_gap = g;
          worst = ti;
        }
      }
      const Estimate ep = bootstrap_paired(corr, pre.values[i][worst],
                                           pre.values[j][worst],
                                           sub_seed(seed, 101 + i, j));
      const Estimate el = bootstrap_paired(corr, limit.values[i][worst],
                                           limit.values[j][worst],
                                           sub_seed(seed, 202 + i, j));
      pg.corr_pre = ep.value;
      pg.corr_limit = el.value;
      pg.gap.value = std::fabs(ep.value - el.value);
      pg.gap.se = std::hypot(ep.se, el.se);
      out.pairs.push_back(pg);
    }
  return out;
}

DecouplingSummary decoupling_metric(const SampleSet& samples,
                                    const ClassPartition& partition,
                                    std::uint64_t seed) {
  if (samples.replicates() < 1000)
    throw std::invalid_argument("decoupling_metric: need >= 1000 replicates");
  DecouplingSummary out;
  const auto corr = [](const std::vector<double>& x,
                       const std::vector<double>& y) { return spearman(x, y); };
  for (std::size_t i = 0; i < samples.nodes(); ++i)
    for (std::size_t j = i + 1; j < samples.nodes(); ++j) {
      PairCorr pc;
      pc.i = i;
      pc.j = j;
      pc.corr = bootstrap_paired(corr, samples.values[i][0],
                                 samples.values[j][0], sub_seed(seed, i, j));
      if (partition.f[i] == partition.f[j]) {
        out.within.push_back(pc);
      } else {
        out.cross.push_back(pc);
        if (std::fabs(pc.corr.value) >= out.max_cross_corr) {
          out.max_cross_corr = std::fabs(pc.corr.value);
          out.max_cross_se = pc.corr.se;
        }
      }
    }
  return out;
}

std::vector<ModulusRow> modulus_diagnostic(const std::vector<SamplePath>& paths,
                                           const std::vector<double>& zeta_grid) {
  if (paths.empty()) throw std::invalid_argument("modulus_diagnostic: no paths");
  std::vector<ModulusRow> table;
  for (double zeta : zeta_grid) {
    std::vector<double> osc(paths.size());
    for (std::size_t r = 0; r < paths.size(); ++r)
      osc[r] = sup_oscillation(paths[r], zeta);
    table.push_back({zeta, percentile(osc, 0.99)});
  }
  return table;
}

ConvergenceReport run_convergence_scan(const NetworkSpec& spec,
                                       const VarianceFunction& vf,
                                       const ScanConfig& cfg, int threads) {
  if (cfg.u_grid.empty())
    throw std::invalid_argument("run_convergence_scan: empty u grid");
  const auto report = check_assumptions(spec, vf, cfg.u_grid);
  if (!report.pass) {
    std::ostringstream os;
    os << "assumptions failed:";
    for (const auto& c : report.checks)
      if (!c.pass) os << " [" << c.name << "] " << c.message;
    throw std::invalid_argument(os.str());
  }

  ConvergenceReport rep;
  rep.u_grid = cfg.u_grid;
  const LimitLawSpec lls = make_limit_law(spec, vf);

  // probe (t,s) pairs for the exact covariance gap
  std::vector<double> probe;
  for (double t : cfg.times)
    if (t > 0) probe.push_back(t);
  if (probe.empty()) probe = {cfg.T / 2, cfg.T};

  for (double u : cfg.u_grid) {
    DeterministicGaps g;
    g.u = u;
    try {
      const Matrix pp = pstar_prelimit(spec, vf, u);
      for (std::size_t i = 0; i < spec.n; ++i)
        for (std::size_t j = 0; j < spec.n; ++j)
          g.pstar_gap = std::max(g.pstar_gap, std::fabs(pp[i][j] - lls.Pstar[i][j]));
      for (std::size_t i = 0; i < spec.n; ++i)
        for (std::size_t j = 0; j < spec.n; ++j)
          for (double t : probe)
            for (double s : probe) {
              const Matrix sig = build_sigma_matrix(lls, t, s);
              g.cov_gap = std::max(
                  g.cov_gap, std::fabs(exact_prelimit_covariance(vf, spec, u, i,
                                                                 j, t, s) -
                                       sig[i][j]));
            }
    } catch (const std::exception& e) {
      rep.stage_errors.push_back(std::string("deterministic u=") +
                                 format_sig(u) + ": " + e.what());
    }
    rep.deterministic.push_back(g);
  }
  if (cfg.replicates < 1) return rep;  // deterministic-only mode

  const std::size_t R = std::size_t(cfg.replicates);
  auto empty_set = [&] {
    SampleSet s;
    s.times = cfg.times;
    s.values.assign(spec.n, std::vector<std::vector<double>>(
                                cfg.times.size(), std::vector<double>(R, 0.0)));
    return s;
  };

  // limit samples (shared across all u comparisons)
  SampleSet limit_set = empty_set();
  std::vector<SamplePath> limit_paths(std::min<std::size_t>(R, 2000));
  TruncationPlan trunc;
  trunc.T_past = cfg.T_past;
  try {
    parallel_for(R, threads, [&](std::size_t r) {
      const SeedSpec seed{cfg.master_seed, r, 0x4c494d4954ULL};
      const WorkloadSample ws =
          sample_limit_workload(lls, cfg.T, cfg.dt, trunc, seed, cfg.sampler);
      for (std::size_t i = 0; i < spec.n; ++i)
        for (std::size_t ti = 0; ti < cfg.times.size(); ++ti)
          limit_set.values[i][ti][r] = ws.q[i].value_at(cfg.times[ti]);
      if (r < limit_paths.size()) limit_paths[r] = ws.xbar[0];
    });
    rep.limit_decoupling =
        decoupling_metric(limit_set, lls.partition,
                          sub_seed(cfg.master_seed, 0xdecULL, 0));
    if (!cfg.zeta_grid.empty())
      rep.modulus_limit = modulus_diagnostic(limit_paths, cfg.zeta_grid);
  } catch (const std::exception& e) {
    rep.stage_errors.push_back(std::string("limit sampling: ") + e.what());
    return rep;
  }

  for (std::size_t ui = 0; ui < cfg.u_grid.size(); ++ui) {
    const double u = cfg.u_grid[ui];
    try {
      SampleSet pre = empty_set();
      std::vector<SamplePath> pre_paths;
      const bool keep_paths =
          ui + 1 == cfg.u_grid.size() && !cfg.zeta_grid.empty();
      if (keep_paths) pre_paths.resize(std::min<std::size_t>(R, 2000));
      parallel_for(R, threads, [&](std::size_t r) {
        const SeedSpec seed{cfg.master_seed, r, 0x505245ULL + ui};
        const WorkloadSample ws = compute_Q_scaled(spec, vf, u, cfg.T, cfg.dt,
                                                   cfg.T_past, seed, cfg.sampler);
        for (std::size_t i = 0; i < spec.n; ++i)
          for (std::size_t ti = 0; ti < cfg.times.size(); ++ti)
            pre.values[i][ti][r] = ws.q[i].value_at(cfg.times[ti]);
        if (keep_paths && r < pre_paths.size()) pre_paths[r] = ws.xbar[0];
      });
      rep.mc.push_back(
          fdd_distance(pre, limit_set, sub_seed(cfg.master_seed, 0xfddULL, ui)));
      if (keep_paths)
        rep.modulus_pre = modulus_diagnostic(pre_paths, cfg.zeta_grid);
    } catch (const std::exception& e) {
      rep.mc.emplace_back();
      rep.stage_errors.push_back(std::string("mc u=") + format_sig(u) + ": " +
                                 e.what());
    }
  }
  return rep;
}

namespace {

using nlohmann::json;

json estimate_json(const Estimate& e) {
  return json{{"value", e.value}, {"se", e.se}};
}

}  // namespace

std::string report_to_json(const ConvergenceReport& rep, const ReportMeta& meta) {
  json j;
  j["meta"] = {{"config_hash", meta.config_hash}, {"version", meta.version}};
  j["u_grid"] = rep.u_grid;
  j["deterministic"] = json::array();
  for (const auto& g : rep.deterministic)
    j["deterministic"].push_back(
        {{"u", g.u}, {"cov_gap", g.cov_gap}, {"pstar_gap", g.pstar_gap}});
  j["mc"] = json::array();
  for (const auto& f : rep.mc) {
    json jf;
    jf["marginals"] = json::array();
    for (const auto& m : f.marginals)
      jf["marginals"].push_back({{"node", m.node},
                                 {"time", m.time},
                                 {"ks", estimate_json(m.ks)},
                                 {"w1", estimate_json(m.w1)}});
    jf["pairs"] = json::array();
    for (const auto& p : f.pairs)
      jf["pairs"].push_back({{"i", p.i},
                             {"j", p.j},
                             {"corr_pre", p.corr_pre},
                             {"corr_limit", p.corr_limit},
                             {"gap", estimate_json(p.gap)}});
    j["mc"].push_back(std::move(jf));
  }
  json jd;
  jd["max_cross_corr"] = rep.limit_decoupling.max_cross_corr;
  jd["max_cross_se"] = rep.limit_decoupling.max_cross_se;
  jd["cross"] = json::array();
  for (const auto& p : rep.limit_decoupling.cross)
    jd["cross"].push_back({{"i", p.i}, {"j", p.j}, {"corr", estimate_json(p.corr)}});
  jd["within"] = json::array();
  for (const auto& p : rep.limit_decoupling.within)
    jd["within"].push_back({{"i", p.i}, {"j", p.j}, {"corr", estimate_json(p.corr)}});
  j["limit_decoupling"] = std::move(jd);
  auto modulus_json = [](const std::vector<ModulusRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back({{"zeta", r.zeta}, {"q99", r.q99}});
    return arr;
  };
  j["modulus_pre"] = modulus_json(rep.modulus_pre);
  j["modulus_limit"] = modulus_json(rep.modulus_limit);
  j["stage_errors"] = rep.stage_errors;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const ConvergenceReport& rep, const ReportMeta& meta) {
  std::ostringstream os;
  os << "# version=" << meta.version << " config_hash=" << meta.config_hash
     << "\n";
  os << "u,node,time,ks,ks_se,w1,w1_se\n";
  for (std::size_t ui = 0; ui < rep.mc.size(); ++ui)
    for (const auto& m : rep.mc[ui].marginals)
      os << format_sig(rep.u_grid[ui]) << "," << m.node + 1 << ","
         << format_sig(m.time) << "," << format_sig(m.ks.value) << ","
         << format_sig(m.ks.se) << "," << format_sig(m.w1.value) << ","
         << format_sig(m.w1.se) << "\n";
  return os.str();
}

std::string report_to_svg(const ConvergenceReport& rep) {
  const int W = 640, H = 400, ml = 60, mb = 40, mt = 20, mr = 20;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!rep.mc.empty() && !rep.u_grid.empty()) {
    const double lx0 = std::log10(rep.u_grid.front());
    const double lx1 = std::log10(rep.u_grid.back());
    double ymax = 1e-12;
    for (const auto& f : rep.mc)
      for (const auto& m : f.marginals) ymax = std::max(ymax, m.ks.value);
    std::size_t nodes = 0;
    for (const auto& m : rep.mc.front().marginals)
      nodes = std::max(nodes, m.node + 1);
    const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                            "#9467bd", "#8c564b"};
    for (std::size_t node = 0; node < nodes; ++node) {
      os << "<polyline fill=\"none\" stroke=\"" << colors[node % 6]
         << "\" stroke-width=\"2\" points=\"";
      for (std::size_t ui = 0; ui < rep.mc.size(); ++ui) {
        double ks = 0;
        for (const auto& m : rep.mc[ui].marginals)
          if (m.node == node) ks = std::max(ks, m.ks.value);
        const double fx = lx1 > lx0
                              ? (std::log10(rep.u_grid[ui]) - lx0) / (lx1 - lx0)
                              : 0.5;
        const double x = ml + fx * (W - ml - mr);
        const double y = H - mb - ks / ymax * (H - mt - mb);
        os << x << "," << y << " ";
      }
      os << "\"/>\n";
    }
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 8
       << "\" text-anchor=\"middle\">u (log scale)</text>\n";
    os << "<text x=\"15\" y=\"" << H / 2
       << "\" transform=\"rotate(-90 15 " << H / 2
       << ")\" text-anchor=\"middle\">KS distance</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace gqn
