#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gqn/convergence.hpp"
#include "gqn/network.hpp"
#include "gqn/variance.hpp"

namespace gqn {

inline constexpr const char* kToolVersion = "0.1.0";

struct OutputConfig {
  std::string directory = ".";
  bool emit_paths = false;
  bool emit_plots = false;
};

/// Parsed experiment file.  sim.T_past < 0 means "size the truncation from
/// plan_truncation at sim-configured target_prob".
struct ExperimentConfig {
  VarianceFunction vf;
  NetworkSpec network;
  ScanConfig sim;
  double target_prob = 1e-4;
  OutputConfig out;
  std::string config_hash;  // hex FNV-1a of the canonical config text
};

/// Parses a JSON experiment file; unknown keys are rejected, parse errors
/// reported with byte offset.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// 12 significant digits, locale-independent.
std::string format_sig(double v);

std::uint64_t fnv1a(const std::string& s);
std::string hash_hex(const std::string& s);

}  // namespace gqn
