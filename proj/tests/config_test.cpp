#include <gtest/gtest.h>

#include <cstdlib>

#include "hatchet/config.hpp"

using namespace hatchet;

namespace {

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Config, EmptyTextGivesDefaults) {
  const auto c = parse_config("");
  EXPECT_EQ(c, ScenarioConfig{});
  EXPECT_EQ(c.node_count, 10);
  EXPECT_EQ(c.grid, 200.0);
  EXPECT_EQ(c.speed_min, 1.0);
  EXPECT_EQ(c.speed_max, 2.0);
  EXPECT_EQ(c.link.tx_range, 50.0);
  EXPECT_EQ(c.route_lifetime(), 600.0);
  EXPECT_FALSE(c.attacker.enabled());
}

TEST(Config, ParsesScenario) {
  const auto c = parse_config(
      "# twenty nodes\n"
      "nodes = 20\n"
      "attacker = hop1   # first hop\n"
      "mobility = rwp\n"
      "speed = 1.5\n"
      "detection = on\n"
      "seed = 42\n");
  EXPECT_EQ(c.node_count, 20);
  EXPECT_EQ(c.attacker.hop_selector, 1);
  EXPECT_TRUE(c.attacker.attacker_ids.empty());
  EXPECT_EQ(c.mobility, MobilityMode::RandomWaypoint);
  EXPECT_EQ(c.speed_min, 1.5);
  EXPECT_EQ(c.speed_max, 1.5);
  EXPECT_TRUE(c.detection_enabled);
  EXPECT_EQ(c.seed, 42u);

  const auto ids = parse_config("nodes = 5\nattacker = 2,4\n");
  EXPECT_EQ(ids.attacker.attacker_ids, (std::set<NodeId>{NodeId{2}, NodeId{4}}));
}

TEST(Config, ErrorsCarryTheLine) {
  EXPECT_EQ(error_line("nodes = 20\n\nspeed = 5\n"), 3);
  EXPECT_EQ(error_line("nodes = 20\nbogus = 1\n"), 2);
  EXPECT_EQ(error_line("nodes = 20\nnodes = 30\n"), 2);
  EXPECT_EQ(error_line("nodes 20\n"), 1);
  EXPECT_EQ(error_line("nodes = twenty\n"), 1);
  EXPECT_EQ(error_line("nodes = 5\nattacker = 9\n"), 2);
  EXPECT_EQ(error_line("gateways = 2\n"), 1);
  EXPECT_EQ(error_line("nodes = 0\n"), 1);
  try {
    parse_config("speed = 5\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
}

TEST(Config, UnsafeAllowsOutOfRangeSpeed) {
  const auto c = parse_config("unsafe = on\nspeed = 5\n");
  EXPECT_EQ(c.speed_max, 5.0);
}

TEST(Config, LineTopologyMustBeAChain) {
  EXPECT_NO_THROW(parse_config("topology = line\nnodes = 5\nspacing = 40\n"));
  EXPECT_EQ(error_line("topology = line\nnodes = 6\nspacing = 40\n"), 3);  // does not fit the grid
  EXPECT_EQ(error_line("topology = line\nnodes = 5\nspacing = 20\n"), 3);  // two-hop shortcuts
}

TEST(Config, TextRoundTrip) {
  ScenarioConfig c;
  c.name = "rt";
  c.node_count = 30;
  c.mobility = MobilityMode::RandomWaypoint;
  c.speed_min = 1.25;
  c.attacker.hop_selector = 2;
  c.detection_enabled = true;
  c.seed = 123456789012345ull;
  c.link.loss_probability = 0.05;
  c.route_lifetime_s = 900;
  c.payoff.at(Strategy::Fp, Strategy::Dfp).payoff = {-2, 3};
  c.energy.voltage = 3.3;
  EXPECT_EQ(parse_config(to_text(c)), c);
  EXPECT_EQ(parse_config(to_text(ScenarioConfig{})), ScenarioConfig{});
  EXPECT_EQ(to_text(parse_config(to_text(c))), to_text(c));
}

TEST(Config, SeedOverrideFromEnvironment) {
  ScenarioConfig c;
  ::setenv("HATCHETSIM_SEED", "77", 1);
  apply_seed_override(c);
  EXPECT_EQ(c.seed, 77u);
  ::setenv("HATCHETSIM_SEED", "x7", 1);
  EXPECT_THROW(apply_seed_override(c), ConfigError);
  ::unsetenv("HATCHETSIM_SEED");
  c.seed = 5;
  apply_seed_override(c);
  EXPECT_EQ(c.seed, 5u);
}
