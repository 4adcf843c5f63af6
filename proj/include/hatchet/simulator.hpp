#pragma once

// Discrete-event engine running one scenario.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hatchet/config.hpp"
#include "hatchet/metrics.hpp"
#include "hatchet/radio.hpp"

namespace hatchet {

enum class EventKind { RadioDeliver, DeliveryFailed, TimerFire, MobilityUpdate, AppSend };

const char* to_string(EventKind kind);

/// Per-hop latency: 5 ms plus 1 ms per 32 octets of frame.
SimTime hop_latency(std::size_t octets);

/// Initial positions, index = node id (0 is the gateway). Throws ConfigError
/// when the topology cannot be laid out.
std::vector<Position> place_nodes(const ScenarioConfig& config);

/// The hop-k node (unit-disk hop distance from the gateway) lying on the most
/// shortest paths to nodes at least k+2 hops out; ties go to more shortest
/// paths overall, then to the lowest id.
std::optional<NodeId> select_hop_attacker(const std::vector<Position>& positions, const LinkModel& link, int k);

struct RunResult {
  ScenarioConfig config;
  MetricsLedger ledger;
  std::string trace;
  std::string detection_log;
  std::vector<Position> initial_positions;
  std::optional<SimTime> first_blacklist;
  std::set<NodeId> blacklisted;                   // union over all nodes
  std::vector<std::optional<NodeId>> final_parent;  // index = node id
  std::vector<int> hops_at_first_round;           // -1: no route at the root
  std::uint64_t events = 0;
};

/// Runs to config.sim_end_s. Throws ConfigError on an invalid configuration.
RunResult run_scenario(const ScenarioConfig& config);

}  // namespace hatchet
