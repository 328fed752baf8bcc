#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ostra/checks.hpp"
#include "ostra/equilibrium.hpp"
#include "ostra/market.hpp"

namespace ostra {

/// Cartesian sweep axes in canonical order (B, S, lambda_bs, lambda_bb,
/// lambda_ss, r, a, gamma); rows are emitted in row-major order over the
/// axes as listed, so output order is deterministic.
struct SweepGrid {
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  std::size_t point_count() const;
};

struct SimulateOptions {
  std::string scenario = "on-path";
  std::optional<std::string> deviator;  // player name, e.g. "S1"
  int replications = 1;
  double horizon = 50.0;
  std::uint64_t seed = 12345;
  std::optional<bool> write_traces;  // default: replications <= 10
  std::optional<TradeTerms> terms;   // default: benchmark terms for the protocol
};

/// A fully serializable experiment: market + cost + protocol + per-command
/// blocks. Re-running the same file with the same build reproduces every
/// output byte for byte.
struct ExperimentConfig {
  MarketParams params;
  CostSpec cost;
  Protocol protocol = Protocol::buyer_first;
  VerifyOptions verify;
  std::optional<SweepGrid> sweep;
  SimulateOptions simulate;
};

/// Strict parse: unknown keys anywhere are rejected with std::invalid_argument.
ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Command entry points used by the CLI; exit-code semantics: 0 all checks
// pass, 1 check failures. Configuration and input errors throw and are
// mapped to exit code 2 by the caller.
int cmd_solve(const ExperimentConfig& config, const std::filesystem::path& out_dir,
              std::ostream& log);
int cmd_verify(const ExperimentConfig& config, const std::filesystem::path& out_dir,
               std::ostream& log);
int cmd_sweep(const ExperimentConfig& config, const std::filesystem::path& out_dir,
              std::ostream& log);
int cmd_simulate(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                 std::ostream& log);

}  // namespace ostra
