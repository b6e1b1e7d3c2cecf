#include "gqn/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gqn {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw std::invalid_argument("config: unknown key \"" + it.key() + "\" in " +
                               where);
}

VarianceFunction parse_vf(const json& j) {
  reject_unknown(j, {"kind", "lambda", "exponents", "weights"},
                 "variance_function");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "power") return VarianceFunction::power(j.at("lambda").get<double>());
  if (kind == "power_sum")
    return VarianceFunction::power_sum(
        j.at("exponents").get<std::vector<double>>(),
        j.value("weights", std::vector<double>{}));
  if (kind == "integrated_ou") return VarianceFunction::integrated_ou();
  throw std::invalid_argument("config: unknown variance kind \"" + kind + "\"");
}

NetworkSpec parse_network(const json& j) {
  reject_unknown(j, {"n", "P", "rates", "regime"}, "network");
  NetworkSpec spec;
  spec.n = j.at("n").get<std::size_t>();
  if (spec.n < 1) throw std::invalid_argument("config: n must be >= 1");
  spec.P = zero_matrix(spec.n);
  for (const auto& triplet : j.value("P", json::array())) {
    if (!triplet.is_array() || triplet.size() != 3)
      throw std::invalid_argument("config: P entries must be [i, j, p] triplets");
    const std::size_t i = triplet[0].get<std::size_t>();
    const std::size_t jj = triplet[1].get<std::size_t>();
    if (i < 1 || i > spec.n || jj < 1 || jj > spec.n)
      throw std::invalid_argument("config: P index out of range (1-based)");
    spec.P[i - 1][jj - 1] = triplet[2].get<double>();
  }
  for (const auto& pair : j.at("rates")) {
    if (!pair.is_array() || pair.size() != 2)
      throw std::invalid_argument("config: rates must be [coeff, exponent] pairs");
    spec.rates.push_back({pair[0].get<double>(), pair[1].get<double>()});
  }
  if (spec.rates.size() != spec.n)
    throw std::invalid_argument("config: need one rate per node");
  const std::string regime = j.at("regime").get<std::string>();
  if (regime == "light")
    spec.regime = Regime::light;
  else if (regime == "heavy")
    spec.regime = Regime::heavy;
  else
    throw std::invalid_argument("config: regime must be light or heavy");
  return spec;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  reject_unknown(j, {"variance_function", "network", "simulation", "outputs"},
                 "top level");

  ExperimentConfig cfg;
  cfg.vf = parse_vf(j.at("variance_function"));
  cfg.network = parse_network(j.at("network"));

  const json& sim = j.at("simulation");
  reject_unknown(sim,
                 {"T", "dt", "replicates", "u_grid", "target_prob",
                  "master_seed", "ratio_cap", "truncation", "times",
                  "zeta_grid"},
                 "simulation");
  cfg.sim.T = sim.at("T").get<double>();
  cfg.sim.dt = sim.at("dt").get<double>();
  cfg.sim.replicates = sim.at("replicates").get<int>();
  cfg.sim.u_grid = sim.at("u_grid").get<std::vector<double>>();
  cfg.target_prob = sim.value("target_prob", 1e-4);
  cfg.sim.master_seed = sim.value("master_seed", std::uint64_t(1));
  cfg.sim.T_past = sim.value("truncation", -1.0);
  cfg.sim.times = sim.value("times", std::vector<double>{0.0});
  cfg.sim.zeta_grid = sim.value("zeta_grid", std::vector<double>{});
  if (sim.contains("ratio_cap")) {
    const double cap = sim.at("ratio_cap").get<double>();
    if (cap <= 1) throw std::invalid_argument("config: ratio_cap must be > 1");
    cfg.sim.sampler.ratio_cap = cap;
  }
  if (cfg.sim.T <= 0 || cfg.sim.dt <= 0)
    throw std::invalid_argument("config: T and dt must be > 0");
  if (cfg.sim.replicates < 0)
    throw std::invalid_argument("config: replicates must be >= 0");
  if (cfg.sim.u_grid.empty())
    throw std::invalid_argument("config: u_grid must be nonempty");

  if (j.contains("outputs")) {
    const json& out = j.at("outputs");
    reject_unknown(out, {"directory", "emit_paths", "emit_plots"}, "outputs");
    cfg.out.directory = out.value("directory", std::string("."));
    cfg.out.emit_paths = out.value("emit_paths", false);
    cfg.out.emit_plots = out.value("emit_plots", false);
  }
  cfg.config_hash = hash_hex(j.dump());
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string format_sig(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(const std::string& s) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(s)));
  return buf;
}

}  // namespace gqn
