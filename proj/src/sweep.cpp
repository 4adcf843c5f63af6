#include "hatchet/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <thread>

namespace hatchet {

std::string scenario_id(const ScenarioConfig& c) {
  return "n" + std::to_string(c.node_count) + "-" + to_string(c.mobility) + "-atk" +
         (c.attacker.enabled() ? "1" : "0") + "-det" + (c.detection_enabled ? "1" : "0") + "-s" +
         std::to_string(c.seed);
}

std::vector<ScenarioConfig> expand_sweep(const ScenarioConfig& base, const SweepSpec& spec) {
  const std::vector<int> nodes = spec.nodes.empty() ? std::vector<int>{base.node_count} : spec.nodes;
  const std::vector<std::uint64_t> seeds = spec.seeds.empty() ? std::vector<std::uint64_t>{base.seed} : spec.seeds;
  std::vector<ScenarioConfig> out;
  for (int n : nodes) {
    for (MobilityMode m : spec.mobility) {
      for (bool attack : spec.attack) {
        for (bool detect : spec.detect) {
          for (std::uint64_t seed : seeds) {
            ScenarioConfig c = base;
            c.node_count = n;
            c.mobility = m;
            c.detection_enabled = detect;
            c.seed = seed;
            if (!attack) {
              c.attacker.attacker_ids.clear();
              c.attacker.hop_selector.reset();
            } else if (!c.attacker.enabled()) {
              c.attacker.hop_selector = 1;
            }
            c.name = scenario_id(c);
            out.push_back(std::move(c));
          }
        }
      }
    }
  }
  return out;
}

ResultRow summarize(const RunResult& run) {
  const auto& c = run.config;
  ResultRow row;
  row.scenario_id = scenario_id(c);
  row.seed = c.seed;
  row.node_count = c.node_count;
  row.mobility = c.mobility;
  row.attacker_enabled = c.attacker.enabled();
  row.detection_enabled = c.detection_enabled;
  try {
    row.pdr = downward_pdr(run.ledger);
  } catch (const MetricsError&) {
  }
  try {
    row.avg_delay = avg_delay(run.ledger);
  } catch (const MetricsError&) {
  }
  row.overhead_count = overhead_count(run.ledger);
  row.mean_power_mw = mean_power_mw(run.ledger, c.energy.voltage);
  return row;
}

std::string csv_header() {
  return "scenario_id,seed,node_count,mobility,attacker_enabled,detection_enabled,pdr,avg_delay_s,"
         "overhead_count,mean_power_mw\n";
}

namespace {
std::string number(std::optional<double> v) {
  if (!v) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", *v);
  return buf;
}
}  // namespace

std::string csv_line(const ResultRow& r) {
  return r.scenario_id + "," + std::to_string(r.seed) + "," + std::to_string(r.node_count) + "," +
         to_string(r.mobility) + "," + (r.attacker_enabled ? "1" : "0") + "," + (r.detection_enabled ? "1" : "0") +
         "," + number(r.pdr) + "," + number(r.avg_delay) + "," + std::to_string(r.overhead_count) + "," +
         number(r.mean_power_mw) + "\n";
}

SweepOutcome run_sweep(const std::vector<ScenarioConfig>& cells, unsigned jobs) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1)));

  std::vector<std::optional<RunResult>> runs(cells.size());
  std::vector<std::string> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        runs[i] = run_scenario(cells[i]);
      } catch (const std::exception& e) {
        errors[i] = scenario_id(cells[i]) + ": " + e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SweepOutcome out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!errors[i].empty()) {
      out.errors.push_back(errors[i]);
      continue;
    }
    out.rows.push_back(summarize(*runs[i]));
    out.runs.push_back(std::move(*runs[i]));
  }
  return out;
}

}  // namespace hatchet
