// Experiment runner: validate / simulate / limit / converge over a JSON
// experiment file.  Exit codes: 0 success, 1 validation failure, 2 runtime
// failure.
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gqn/config.hpp"
#include "gqn/convergence.hpp"
#include "gqn/limit_laws.hpp"
#include "gqn/scaling.hpp"
#include "gqn/workload.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  int threads = int(std::thread::hardware_concurrency());
  long long seed = -1;
  double u = 0;
};

gqn::ExperimentConfig load(const CliOptions& cli) {
  auto cfg = gqn::load_config(cli.config_path);
  if (cli.seed >= 0) cfg.sim.master_seed = std::uint64_t(cli.seed);
  if (!cli.out_dir.empty()) cfg.out.directory = cli.out_dir;
  return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string csv_header(const gqn::ExperimentConfig& cfg) {
  return "# version=" + std::string(gqn::kToolVersion) +
         " config_hash=" + cfg.config_hash +
         "\nu,replicate,node,t,xbar_scaled,q_scaled\n";
}

void append_sample_rows(std::string& csv, const std::string& u_label,
                        std::size_t replicate, const gqn::WorkloadSample& ws,
                        const std::vector<double>& times, bool full_paths) {
  for (std::size_t i = 0; i < ws.xbar.size(); ++i) {
    const auto emit = [&](double t) {
      csv += u_label + "," + std::to_string(replicate + 1) + "," +
             std::to_string(i + 1) + "," + gqn::format_sig(t) + "," +
             gqn::format_sig(ws.xbar[i].value_at(t)) + "," +
             gqn::format_sig(ws.q[i].value_at(t)) + "\n";
    };
    if (full_paths)
      for (std::size_t k = 0; k < ws.xbar[i].size(); ++k)
        emit(ws.xbar[i].time_at(k));
    else
      for (double t : times) emit(t);
  }
}

int run_validate(const CliOptions& cli) {
  const auto cfg = load(cli);
  const auto rep = gqn::check_assumptions(cfg.network, cfg.vf, cfg.sim.u_grid);
  for (const auto& c : rep.checks)
    std::cout << (c.pass ? "PASS" : "FAIL") << " " << c.name
              << (c.message.empty() ? "" : ": " + c.message) << "\n";
  return rep.pass ? 0 : 1;
}

// truncation horizon: explicit config value, else the analytic plan
double resolve_truncation(const gqn::ExperimentConfig& cfg) {
  if (cfg.sim.T_past > 0) return cfg.sim.T_past;
  const auto x_grid = gqn::geometric_grid(
      cfg.network.regime == gqn::Regime::light ? 1e-6 : 1e2,
      cfg.network.regime == gqn::Regime::light ? 1e-2 : 1e6, 25);
  const auto t_grid = gqn::geometric_grid(1e-3, 1e3, 61);
  const auto ub = gqn::fit_uniform_bound(cfg.vf, cfg.network.regime, x_grid, t_grid);
  if (!ub.ok) throw std::runtime_error("uniform bound fit failed: " + ub.message);
  const auto C = gqn::compute_C(cfg.network.P);
  const double gain = *std::max_element(C.begin(), C.end());
  return gqn::plan_truncation(ub.fit, gain, cfg.target_prob).T_past;
}

int run_simulate(const CliOptions& cli) {
  const auto cfg = load(cli);
  const auto rep = gqn::check_assumptions(cfg.network, cfg.vf, cfg.sim.u_grid);
  if (!rep.pass) {
    for (const auto& c : rep.checks)
      if (!c.pass) std::cerr << "FAIL " << c.name << ": " << c.message << "\n";
    return 1;
  }
  if (cfg.sim.replicates < 1) {
    std::cerr << "replicates must be >= 1\n";
    return 1;
  }
  const double T_past = resolve_truncation(cfg);
  const std::size_t R = std::size_t(cfg.sim.replicates);
  std::vector<gqn::WorkloadSample> samples(R);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::mutex err_mutex;
  std::string err;
  for (int t = 0; t < std::max(1, cli.threads); ++t)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t r = next.fetch_add(1);
        if (r >= R) return;
        try {
          samples[r] = gqn::compute_Q_scaled(
              cfg.network, cfg.vf, cli.u, cfg.sim.T, cfg.sim.dt, T_past,
              gqn::SeedSpec{cfg.sim.master_seed, r, 0x53494dULL},
              cfg.sim.sampler);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lk(err_mutex);
          if (err.empty()) err = e.what();
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (!err.empty()) throw std::runtime_error(err);

  std::string csv = csv_header(cfg);
  for (std::size_t r = 0; r < R; ++r)
    append_sample_rows(csv, gqn::format_sig(cli.u), r, samples[r],
                       cfg.sim.times, cfg.out.emit_paths);
  const fs::path dir(cfg.out.directory);
  write_file(dir / ("workload_u" + gqn::format_sig(cli.u) + ".csv"), csv);

  json summary;
  summary["meta"] = {{"config_hash", cfg.config_hash},
                     {"version", gqn::kToolVersion}};
  summary["u"] = cli.u;
  summary["truncation"] = T_past;
  summary["marginals"] = json::array();
  for (std::size_t i = 0; i < cfg.network.n; ++i)
    for (double t : cfg.sim.times) {
      std::vector<double> q(R);
      for (std::size_t r = 0; r < R; ++r) q[r] = samples[r].q[i].value_at(t);
      double mean = 0;
      for (double v : q) mean += v;
      mean /= double(R);
      summary["marginals"].push_back(
          {{"node", i + 1},
           {"time", t},
           {"mean", mean},
           {"q50", gqn::percentile(q, 0.5)},
           {"q90", gqn::percentile(q, 0.9)},
           {"q99", gqn::percentile(q, 0.99)}});
    }
  write_file(dir / ("summary_u" + gqn::format_sig(cli.u) + ".json"),
             summary.dump(2) + "\n");
  std::cout << "wrote " << (dir / ("workload_u" + gqn::format_sig(cli.u) + ".csv"))
            << "\n";
  return 0;
}

int run_limit(const CliOptions& cli) {
  const auto cfg = load(cli);
  const auto rep = gqn::check_assumptions(cfg.network, cfg.vf, cfg.sim.u_grid);
  if (!rep.pass) {
    for (const auto& c : rep.checks)
      if (!c.pass) std::cerr << "FAIL " << c.name << ": " << c.message << "\n";
    return 1;
  }
  if (cfg.sim.replicates < 1) {
    std::cerr << "replicates must be >= 1\n";
    return 1;
  }
  const auto lls = gqn::make_limit_law(cfg.network, cfg.vf);
  gqn::TruncationPlan trunc;
  trunc.T_past = resolve_truncation(cfg);

  const std::size_t R = std::size_t(cfg.sim.replicates);
  std::string csv = csv_header(cfg);
  for (std::size_t r = 0; r < R; ++r) {
    const auto ws = gqn::sample_limit_workload(
        lls, cfg.sim.T, cfg.sim.dt, trunc,
        gqn::SeedSpec{cfg.sim.master_seed, r, 0x4c494d4954ULL},
        cfg.sim.sampler);
    append_sample_rows(csv, "limit", r, ws, cfg.sim.times, cfg.out.emit_paths);
  }
  const fs::path dir(cfg.out.directory);
  write_file(dir / "limit.csv", csv);

  json out;
  out["meta"] = {{"config_hash", cfg.config_hash},
                 {"version", gqn::kToolVersion}};
  out["index"] = lls.index;
  out["kappa_or_xi"] = lls.kappa_or_xi;
  out["Pstar"] = lls.Pstar;
  out["Sigma"] = json::array();
  for (double t : cfg.sim.times)
    for (double s : cfg.sim.times)
      out["Sigma"].push_back(
          {{"t", t}, {"s", s}, {"matrix", gqn::build_sigma_matrix(lls, t, s)}});
  write_file(dir / "limit.json", out.dump(2) + "\n");
  std::cout << "wrote " << (dir / "limit.csv") << "\n";
  return 0;
}

int run_converge(const CliOptions& cli) {
  const auto cfg = load(cli);
  auto scan = cfg.sim;
  if (scan.T_past <= 0) scan.T_past = resolve_truncation(cfg);
  const auto report =
      gqn::run_convergence_scan(cfg.network, cfg.vf, scan, cli.threads);
  const gqn::ReportMeta meta{cfg.config_hash, gqn::kToolVersion};
  const fs::path dir(cfg.out.directory);
  write_file(dir / "convergence.json", gqn::report_to_json(report, meta));
  write_file(dir / "convergence.csv", gqn::report_to_csv(report, meta));
  if (cfg.out.emit_plots)
    write_file(dir / "convergence.svg", gqn::report_to_svg(report));
  std::cout << "wrote " << (dir / "convergence.json") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian feedforward network workload toolkit"};
  app.require_subcommand(1);
  CliOptions cli;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", cli.config_path, "experiment file (JSON)")
        ->required();
    cmd->add_option("--out", cli.out_dir, "output directory override");
    cmd->add_option("--threads", cli.threads, "worker thread cap");
    cmd->add_option("--seed", cli.seed, "master seed override");
  };
  auto* validate = app.add_subcommand("validate", "check model assumptions");
  add_common(validate);
  auto* simulate = app.add_subcommand("simulate", "sample scaled workloads at u");
  add_common(simulate);
  simulate->add_option("--u", cli.u, "scaling parameter")->required();
  auto* limit = app.add_subcommand("limit", "sample the limit law");
  add_common(limit);
  auto* converge = app.add_subcommand("converge", "run the convergence scan");
  add_common(converge);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return run_validate(cli);
    if (simulate->parsed()) return run_simulate(cli);
    if (limit->parsed()) return run_limit(cli);
    if (converge->parsed()) return run_converge(cli);
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
