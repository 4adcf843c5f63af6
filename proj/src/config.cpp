#include "hatchet/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace hatchet {

const char* to_string(Topology t) {
  switch (t) {
    case Topology::Random: return "random";
    case Topology::Line: return "line";
    case Topology::Grid: return "grid";
  }
  return "?";
}

const char* to_string(MobilityMode m) { return m == MobilityMode::Static ? "static" : "rwp"; }

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

namespace {

// Validation failure tied to a key, so parse_config can report its line.
struct Invalid {
  std::string key;
  std::string message;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

template <typename T>
T parse_number(const std::string& v) {
  T out{};
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw std::invalid_argument("not a number: '" + v + "'");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(out)) throw std::invalid_argument("not a finite number: '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  throw std::invalid_argument("expected on/off: '" + v + "'");
}

Payoff parse_payoff(const std::string& v) {
  const auto parts = split(v, ',');
  if (parts.size() != 2) throw std::invalid_argument("payoff must be 'u_i,u_j': '" + v + "'");
  return {parse_number<int>(parts[0]), parse_number<int>(parts[1])};
}

AttackerConfig parse_attacker(const std::string& v, AttackerConfig current) {
  current.attacker_ids.clear();
  current.hop_selector.reset();
  if (v == "none" || v == "off") return current;
  if (v.rfind("hop", 0) == 0) {
    current.hop_selector = parse_number<int>(v.substr(3));
    return current;
  }
  for (const auto& id : split(v, ',')) current.attacker_ids.insert(NodeId{parse_number<std::uint16_t>(id)});
  return current;
}

std::string fmt_double(double d) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, d);  // shortest round-trip form
  return std::string(buf, res.ptr);
}

std::string fmt_payoff(Payoff p) { return std::to_string(p.u_i) + "," + std::to_string(p.u_j); }

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

Payoff& cell(ScenarioConfig& c, Strategy i, Strategy j) { return c.payoff.at(i, j).payoff; }

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"name", [](auto& c, auto& v) { c.name = v; }},
      {"nodes", [](auto& c, auto& v) { c.node_count = parse_number<int>(v); }},
      {"gateways", [](auto& c, auto& v) { c.gateway_count = parse_number<int>(v); }},
      {"grid", [](auto& c, auto& v) { c.grid = parse_number<double>(v); }},
      {"topology",
       [](auto& c, auto& v) {
         if (v == "random") c.topology = Topology::Random;
         else if (v == "line") c.topology = Topology::Line;
         else if (v == "grid") c.topology = Topology::Grid;
         else throw std::invalid_argument("topology must be random, line or grid");
       }},
      {"spacing", [](auto& c, auto& v) { c.spacing = parse_number<double>(v); }},
      {"columns", [](auto& c, auto& v) { c.grid_columns = parse_number<int>(v); }},
      {"mobility",
       [](auto& c, auto& v) {
         if (v == "static") c.mobility = MobilityMode::Static;
         else if (v == "rwp" || v == "random_waypoint") c.mobility = MobilityMode::RandomWaypoint;
         else throw std::invalid_argument("mobility must be static or rwp");
       }},
      {"speed",
       [](auto& c, auto& v) {
         const auto parts = split(v, ',');
         if (parts.empty() || parts.size() > 2) throw std::invalid_argument("speed must be 'v' or 'min,max'");
         c.speed_min = parse_number<double>(parts[0]);
         c.speed_max = parse_number<double>(parts.back());
       }},
      {"mobility_step", [](auto& c, auto& v) { c.mobility_step_s = parse_number<double>(v); }},
      {"unsafe", [](auto& c, auto& v) { c.unsafe = parse_bool(v); }},
      {"attacker", [](auto& c, auto& v) { c.attacker = parse_attacker(v, c.attacker); }},
      {"attacker_seed", [](auto& c, auto& v) { c.attacker.random_address_seed = parse_number<std::uint64_t>(v); }},
      {"detection", [](auto& c, auto& v) { c.detection_enabled = parse_bool(v); }},
      {"sim_end", [](auto& c, auto& v) { c.sim_end_s = parse_number<double>(v); }},
      {"data_interval", [](auto& c, auto& v) { c.data_interval_s = parse_number<double>(v); }},
      {"payload", [](auto& c, auto& v) { c.payload_octets = parse_number<int>(v); }},
      {"seed", [](auto& c, auto& v) { c.seed = parse_number<std::uint64_t>(v); }},
      {"tx_range", [](auto& c, auto& v) { c.link.tx_range = parse_number<double>(v); }},
      {"interference_range", [](auto& c, auto& v) { c.link.interference_range = parse_number<double>(v); }},
      {"loss_probability", [](auto& c, auto& v) { c.link.loss_probability = parse_number<double>(v); }},
      {"interference_loss", [](auto& c, auto& v) { c.link.interference_loss = parse_number<double>(v); }},
      {"retries", [](auto& c, auto& v) { c.unicast_retries = parse_number<int>(v); }},
      {"trickle_imin", [](auto& c, auto& v) { c.trickle_imin_s = parse_number<double>(v); }},
      {"trickle_imax", [](auto& c, auto& v) { c.trickle_imax_s = parse_number<double>(v); }},
      {"dis_interval", [](auto& c, auto& v) { c.dis_interval_s = parse_number<double>(v); }},
      {"dao_delay", [](auto& c, auto& v) { c.dao_delay_s = parse_number<double>(v); }},
      {"dao_ack_timeout", [](auto& c, auto& v) { c.dao_ack_timeout_s = parse_number<double>(v); }},
      {"probe_interval", [](auto& c, auto& v) { c.probe_interval_s = parse_number<double>(v); }},
      {"route_lifetime", [](auto& c, auto& v) { c.route_lifetime_s = parse_number<double>(v); }},
      {"payoff_fp_fp", [](auto& c, auto& v) { cell(c, Strategy::Fp, Strategy::Fp) = parse_payoff(v); }},
      {"payoff_fp_dfp", [](auto& c, auto& v) { cell(c, Strategy::Fp, Strategy::Dfp) = parse_payoff(v); }},
      {"payoff_dfp_fp", [](auto& c, auto& v) { cell(c, Strategy::Dfp, Strategy::Fp) = parse_payoff(v); }},
      {"payoff_dfp_dfp", [](auto& c, auto& v) { cell(c, Strategy::Dfp, Strategy::Dfp) = parse_payoff(v); }},
      {"tick_rate", [](auto& c, auto& v) { c.energy.tick_rate = parse_number<double>(v); }},
      {"current_cpu_active", [](auto& c, auto& v) { c.energy.current_ma[0] = parse_number<double>(v); }},
      {"current_cpu_idle", [](auto& c, auto& v) { c.energy.current_ma[1] = parse_number<double>(v); }},
      {"current_tx", [](auto& c, auto& v) { c.energy.current_ma[2] = parse_number<double>(v); }},
      {"current_rx", [](auto& c, auto& v) { c.energy.current_ma[3] = parse_number<double>(v); }},
      {"voltage", [](auto& c, auto& v) { c.energy.voltage = parse_number<double>(v); }},
  };
  return table;
}

void check(bool ok, const char* key, const std::string& message) {
  if (!ok) throw Invalid{key, message};
}

void validate_fields(const ScenarioConfig& c) {
  check(c.node_count >= 1 && c.node_count <= 1000, "nodes", "nodes must be in 1..1000");
  check(c.gateway_count == 1, "gateways", "exactly one gateway is supported");
  check(c.grid > 0, "grid", "grid must be positive");
  check(c.spacing > 0, "spacing", "spacing must be positive");
  check(c.grid_columns >= 0, "columns", "columns must be >= 0");

  if (c.unsafe) {
    check(c.speed_min > 0 && c.speed_min <= c.speed_max, "speed", "speed range must satisfy 0 < min <= max");
  } else {
    check(c.speed_min >= 1.0 && c.speed_max <= 2.0 && c.speed_min <= c.speed_max, "speed",
          "speed must lie within [1,2] m/s (set unsafe = on to override)");
  }
  check(c.mobility_step_s > 0, "mobility_step", "mobility_step must be positive");

  for (NodeId id : c.attacker.attacker_ids) {
    check(id.value >= 1 && id.value <= c.node_count, "attacker", "attacker ids must name sensor nodes (1..nodes)");
  }
  if (c.attacker.hop_selector) check(*c.attacker.hop_selector >= 1, "attacker", "hop selector must be >= 1");

  check(c.sim_end_s > 0, "sim_end", "sim_end must be positive");
  check(c.data_interval_s > 0, "data_interval", "data_interval must be positive");
  check(c.payload_octets >= 0 && c.payload_octets <= 1200, "payload", "payload must be in 0..1200 octets");
  check(c.link.tx_range > 0, "tx_range", "tx_range must be positive");
  check(c.link.tx_range <= c.link.interference_range, "interference_range", "tx_range must not exceed interference_range");
  check(c.link.loss_probability >= 0 && c.link.loss_probability <= 1, "loss_probability", "loss_probability must be in [0,1]");
  check(c.link.interference_loss >= 0 && c.link.interference_loss <= 1, "interference_loss",
        "interference_loss must be in [0,1]");
  check(c.unicast_retries >= 0 && c.unicast_retries <= 10, "retries", "retries must be in 0..10");
  check(c.trickle_imin_s > 0 && c.trickle_imin_s <= c.trickle_imax_s, "trickle_imin", "need 0 < trickle_imin <= trickle_imax");
  check(c.dis_interval_s > 0, "dis_interval", "dis_interval must be positive");
  check(c.dao_delay_s >= 0, "dao_delay", "dao_delay must be >= 0");
  check(c.dao_ack_timeout_s > 0, "dao_ack_timeout", "dao_ack_timeout must be positive");
  check(c.probe_interval_s >= 0, "probe_interval", "probe_interval must be >= 0");
  check(c.route_lifetime() > c.data_interval_s, "route_lifetime", "route_lifetime must exceed data_interval");
  check(c.energy.tick_rate > 0, "tick_rate", "tick_rate must be positive");
  for (double ma : c.energy.current_ma) check(ma >= 0, "current_tx", "currents must be >= 0");
  check(c.energy.voltage > 0, "voltage", "voltage must be positive");

  if (c.topology == Topology::Line) {
    check(c.spacing * c.node_count <= c.grid, "spacing", "line does not fit in the grid");
    check(c.unsafe || 2 * c.spacing > c.link.tx_range, "spacing",
          "line spacing lets non-adjacent nodes hear each other");
  }
  if (c.topology == Topology::Grid) {
    const int cols = c.grid_columns > 0 ? c.grid_columns
                                        : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(c.node_count + 1))));
    const int rows = (c.node_count + 1 + cols - 1) / cols;
    check((cols - 1) * c.spacing <= c.grid && (rows - 1) * c.spacing <= c.grid, "spacing", "grid layout does not fit");
  }
}

}  // namespace

void validate(const ScenarioConfig& config) {
  try {
    validate_fields(config);
  } catch (const Invalid& e) {
    throw ConfigError(0, e.key + ": " + e.message);
  }
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig config;
  std::map<std::string, int> line_of;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(line_no, "unknown key '" + key + "'");
    if (line_of.contains(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
    try {
      it->second(config, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line_no, key + ": " + e.what());
    }
    line_of[key] = line_no;
  }
  try {
    validate_fields(config);
  } catch (const Invalid& e) {
    const auto it = line_of.find(e.key);
    throw ConfigError(it == line_of.end() ? 0 : it->second, e.key + ": " + e.message);
  }
  return config;
}

std::string to_text(const ScenarioConfig& c) {
  std::ostringstream out;
  auto kv = [&](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };
  kv("name", c.name);
  kv("nodes", std::to_string(c.node_count));
  kv("gateways", std::to_string(c.gateway_count));
  kv("grid", fmt_double(c.grid));
  kv("topology", to_string(c.topology));
  kv("spacing", fmt_double(c.spacing));
  kv("columns", std::to_string(c.grid_columns));
  kv("mobility", to_string(c.mobility));
  kv("speed", fmt_double(c.speed_min) + "," + fmt_double(c.speed_max));
  kv("mobility_step", fmt_double(c.mobility_step_s));
  kv("unsafe", c.unsafe ? "on" : "off");
  std::string attacker = "none";
  if (c.attacker.hop_selector) {
    attacker = "hop" + std::to_string(*c.attacker.hop_selector);
  } else if (!c.attacker.attacker_ids.empty()) {
    attacker.clear();
    for (NodeId id : c.attacker.attacker_ids) attacker += (attacker.empty() ? "" : ",") + to_string(id);
  }
  kv("attacker", attacker);
  kv("attacker_seed", std::to_string(c.attacker.random_address_seed));
  kv("detection", c.detection_enabled ? "on" : "off");
  kv("sim_end", fmt_double(c.sim_end_s));
  kv("data_interval", fmt_double(c.data_interval_s));
  kv("payload", std::to_string(c.payload_octets));
  kv("seed", std::to_string(c.seed));
  kv("tx_range", fmt_double(c.link.tx_range));
  kv("interference_range", fmt_double(c.link.interference_range));
  kv("loss_probability", fmt_double(c.link.loss_probability));
  kv("interference_loss", fmt_double(c.link.interference_loss));
  kv("retries", std::to_string(c.unicast_retries));
  kv("trickle_imin", fmt_double(c.trickle_imin_s));
  kv("trickle_imax", fmt_double(c.trickle_imax_s));
  kv("dis_interval", fmt_double(c.dis_interval_s));
  kv("dao_delay", fmt_double(c.dao_delay_s));
  kv("dao_ack_timeout", fmt_double(c.dao_ack_timeout_s));
  kv("probe_interval", fmt_double(c.probe_interval_s));
  if (c.route_lifetime_s) kv("route_lifetime", fmt_double(*c.route_lifetime_s));
  kv("payoff_fp_fp", fmt_payoff(c.payoff.at(Strategy::Fp, Strategy::Fp).payoff));
  kv("payoff_fp_dfp", fmt_payoff(c.payoff.at(Strategy::Fp, Strategy::Dfp).payoff));
  kv("payoff_dfp_fp", fmt_payoff(c.payoff.at(Strategy::Dfp, Strategy::Fp).payoff));
  kv("payoff_dfp_dfp", fmt_payoff(c.payoff.at(Strategy::Dfp, Strategy::Dfp).payoff));
  kv("tick_rate", fmt_double(c.energy.tick_rate));
  kv("current_cpu_active", fmt_double(c.energy.current_ma[0]));
  kv("current_cpu_idle", fmt_double(c.energy.current_ma[1]));
  kv("current_tx", fmt_double(c.energy.current_ma[2]));
  kv("current_rx", fmt_double(c.energy.current_ma[3]));
  kv("voltage", fmt_double(c.energy.voltage));
  return out.str();
}

void apply_seed_override(ScenarioConfig& config) {
  if (const char* env = std::getenv("HATCHETSIM_SEED"); env != nullptr && *env != '\0') {
    try {
      config.seed = parse_number<std::uint64_t>(trim(env));
    } catch (const std::invalid_argument&) {
      throw ConfigError(0, std::string("HATCHETSIM_SEED is not an unsigned integer: '") + env + "'");
    }
  }
}

}  // namespace hatchet
