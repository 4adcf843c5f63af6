#pragma once

// Parameter sweeps and the results table.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hatchet/config.hpp"
#include "hatchet/simulator.hpp"

namespace hatchet {

struct SweepSpec {
  std::vector<int> nodes;
  std::vector<MobilityMode> mobility{MobilityMode::Static};
  std::vector<bool> attack{false};
  std::vector<bool> detect{false};
  std::vector<std::uint64_t> seeds;  // empty: the base config's seed
};

/// e.g. "n20-static-atk1-det0-s3"
std::string scenario_id(const ScenarioConfig& config);

/// One config per cell in nodes -> mobility -> attack -> detect -> seed order.
/// Attack "on" keeps the base attacker, or places one at hop 1 if the base has none.
std::vector<ScenarioConfig> expand_sweep(const ScenarioConfig& base, const SweepSpec& spec);

struct ResultRow {
  std::string scenario_id;
  std::uint64_t seed = 0;
  int node_count = 0;
  MobilityMode mobility = MobilityMode::Static;
  bool attacker_enabled = false;
  bool detection_enabled = false;
  std::optional<double> pdr;        // empty when nothing was sent
  std::optional<double> avg_delay;  // empty when nothing was delivered
  std::uint64_t overhead_count = 0;
  double mean_power_mw = 0;
};

ResultRow summarize(const RunResult& run);

std::string csv_header();
std::string csv_line(const ResultRow& row);

struct SweepOutcome {
  std::vector<RunResult> runs;  // expand_sweep order
  std::vector<ResultRow> rows;
  std::vector<std::string> errors;  // "<scenario_id>: <message>"

  bool ok() const { return errors.empty(); }
};

/// Runs every cell on up to `jobs` threads (0: hardware concurrency). Results
/// are kept in cell order regardless of completion order.
SweepOutcome run_sweep(const std::vector<ScenarioConfig>& cells, unsigned jobs = 0);

}  // namespace hatchet
