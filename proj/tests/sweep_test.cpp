#include <gtest/gtest.h>

#include "hatchet/sweep.hpp"

using namespace hatchet;

TEST(Sweep, ScenarioId) {
  ScenarioConfig c;
  c.node_count = 20;
  c.seed = 3;
  c.attacker.hop_selector = 1;
  EXPECT_EQ(scenario_id(c), "n20-static-atk1-det0-s3");
  c.mobility = MobilityMode::RandomWaypoint;
  c.detection_enabled = true;
  c.attacker = {};
  EXPECT_EQ(scenario_id(c), "n20-rwp-atk0-det1-s3");
}

TEST(Sweep, ExpandsInFixedOrder) {
  ScenarioConfig base;
  SweepSpec spec;
  spec.nodes = {10, 20, 30};
  spec.attack = {true, false};
  spec.seeds = {1};
  const auto cells = expand_sweep(base, spec);
  ASSERT_EQ(cells.size(), 6u);
  const std::vector<std::string> want{"n10-static-atk1-det0-s1", "n10-static-atk0-det0-s1",
                                      "n20-static-atk1-det0-s1", "n20-static-atk0-det0-s1",
                                      "n30-static-atk1-det0-s1", "n30-static-atk0-det0-s1"};
  for (std::size_t i = 0; i < cells.size(); ++i) {
    EXPECT_EQ(scenario_id(cells[i]), want[i]);
    EXPECT_EQ(cells[i].name, want[i]);
  }
  EXPECT_EQ(cells[0].attacker.hop_selector, 1);
  EXPECT_FALSE(cells[1].attacker.enabled());
}

TEST(Sweep, AttackOnKeepsConfiguredAttacker) {
  ScenarioConfig base;
  base.attacker.attacker_ids = {NodeId{4}};
  SweepSpec spec;
  spec.nodes = {10};
  spec.attack = {true};
  spec.detect = {false, true};
  spec.mobility = {MobilityMode::Static, MobilityMode::RandomWaypoint};
  spec.seeds = {5, 6};
  const auto cells = expand_sweep(base, spec);
  ASSERT_EQ(cells.size(), 8u);
  EXPECT_EQ(scenario_id(cells[0]), "n10-static-atk1-det0-s5");
  EXPECT_EQ(scenario_id(cells[1]), "n10-static-atk1-det0-s6");
  EXPECT_EQ(scenario_id(cells[2]), "n10-static-atk1-det1-s5");
  EXPECT_EQ(scenario_id(cells[4]), "n10-rwp-atk1-det0-s5");
  for (const auto& c : cells) EXPECT_EQ(c.attacker.attacker_ids, (std::set<NodeId>{NodeId{4}}));
}

TEST(Sweep, SixRowsDeterministicAcrossThreadCounts) {
  ScenarioConfig base;
  base.sim_end_s = 300;
  SweepSpec spec;
  spec.nodes = {10, 20, 30};
  spec.attack = {true, false};
  const auto cells = expand_sweep(base, spec);
  const auto one = run_sweep(cells, 1);
  const auto four = run_sweep(cells, 4);
  ASSERT_TRUE(one.ok());
  ASSERT_EQ(one.rows.size(), 6u);
  std::string a = csv_header(), b = csv_header();
  for (std::size_t i = 0; i < 6; ++i) {
    a += csv_line(one.rows[i]);
    b += csv_line(four.rows[i]);
    EXPECT_EQ(one.rows[i].scenario_id, scenario_id(cells[i]));
    EXPECT_EQ(one.runs[i].trace, four.runs[i].trace);
  }
  EXPECT_EQ(a, b);
  EXPECT_EQ(csv_header(),
            "scenario_id,seed,node_count,mobility,attacker_enabled,detection_enabled,pdr,avg_delay_s,"
            "overhead_count,mean_power_mw\n");
  EXPECT_EQ(one.rows[1].pdr, 1.0);
}

TEST(Sweep, CsvLineFormat) {
  ResultRow r;
  r.scenario_id = "n10-static-atk0-det0-s1";
  r.seed = 1;
  r.node_count = 10;
  r.pdr = 0.5;
  r.overhead_count = 12;
  r.mean_power_mw = 0.25;
  EXPECT_EQ(csv_line(r), "n10-static-atk0-det0-s1,1,10,static,0,0,0.5,nan,12,0.25\n");
}

TEST(Sweep, ErrorsAreCollected) {
  ScenarioConfig bad;
  bad.node_count = 5;
  bad.topology = Topology::Line;
  bad.spacing = 10;  // too close: fails validation
  const auto out = run_sweep({bad}, 1);
  EXPECT_FALSE(out.ok());
  ASSERT_EQ(out.errors.size(), 1u);
}
