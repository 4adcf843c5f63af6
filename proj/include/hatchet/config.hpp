#pragma once

// Scenario configuration: flat `key = value` text with `#` comments.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "hatchet/attack.hpp"
#include "hatchet/game.hpp"
#include "hatchet/metrics.hpp"
#include "hatchet/radio.hpp"

namespace hatchet {

enum class Topology { Random, Line, Grid };

const char* to_string(Topology t);
const char* to_string(MobilityMode m);

struct ScenarioConfig {
  std::string name = "scenario";
  int node_count = 10;  // sensors, excluding the gateway
  int gateway_count = 1;
  double grid = 200.0;  // square side, metres
  Topology topology = Topology::Random;
  double spacing = 40.0;  // line and grid topologies
  int grid_columns = 0;   // 0: ceil(sqrt(nodes + 1))

  MobilityMode mobility = MobilityMode::Static;
  double speed_min = 1.0;
  double speed_max = 2.0;
  double mobility_step_s = 1.0;
  bool unsafe = false;  // allows values outside the reference parameter ranges

  AttackerConfig attacker;
  bool detection_enabled = false;

  double sim_end_s = 600.0;
  double data_interval_s = 60.0;
  int payload_octets = 30;
  std::uint64_t seed = 1;

  LinkModel link;
  int unicast_retries = 3;

  double trickle_imin_s = 4.0;
  double trickle_imax_s = 1048.0;
  double dis_interval_s = 10.0;
  double dao_delay_s = 1.0;
  double dao_ack_timeout_s = 5.0;
  double probe_interval_s = 60.0;  // unicast DIS to the parent; 0 disables
  std::optional<double> route_lifetime_s;  // default 10 x data interval

  PayoffMatrix payoff = PayoffMatrix::canonical();
  EnergyConstants energy;

  double route_lifetime() const { return route_lifetime_s.value_or(10.0 * data_interval_s); }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const noexcept { return line_; }  // 0 when not tied to a line

 private:
  int line_;
};

/// Parses and validates. Unknown keys and out-of-range values throw ConfigError.
ScenarioConfig parse_config(const std::string& text);

/// Cross-field checks; parse_config already calls this.
void validate(const ScenarioConfig& config);

/// Every resolved key, one per line, in a fixed order; parse_config(to_text(c)) == c.
std::string to_text(const ScenarioConfig& config);

/// Applies HATCHETSIM_SEED when set in the environment.
void apply_seed_override(ScenarioConfig& config);

}  // namespace hatchet
