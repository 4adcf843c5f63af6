#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "hatchet/config.hpp"
#include "hatchet/simulator.hpp"
#include "test_util.hpp"

using namespace hatchet;

namespace {

struct Line {
  std::string time;
  std::string kind;
  std::string src;
  std::string dst;
  std::string detail;
};

std::vector<Line> parse_trace(const std::string& trace) {
  std::vector<Line> out;
  std::istringstream in(trace);
  for (std::string l; std::getline(in, l);) {
    if (l.empty() || l[0] == '#') continue;
    const auto f = testutil::split(l, '\t');
    if (f.size() != 5) throw std::runtime_error("bad trace line: " + l);
    out.push_back({f[0], f[1], f[2], f[3], f[4]});
  }
  return out;
}

// Value of `key=` in a detail string.
std::string field(const std::string& detail, const std::string& key) {
  const auto p = detail.find(key + "=");
  if (p == std::string::npos) return {};
  const auto b = p + key.size() + 1;
  return detail.substr(b, detail.find(' ', b) - b);
}

std::string first_word(const std::string& s) { return s.substr(0, s.find(' ')); }

// Transmit detail without the attempt and result fields.
std::string frame_key(const Line& l) {
  return l.src + ">" + l.dst + " " + l.detail.substr(0, l.detail.find(" attempt="));
}

ScenarioConfig cfg(const std::string& text) { return parse_config(text); }

}  // namespace

TEST(HopLatency, FiveMsPlusAirtime) {
  EXPECT_EQ(hop_latency(0), seconds(0.005));
  EXPECT_EQ(hop_latency(32), seconds(0.006));
  EXPECT_EQ(hop_latency(86), SimTime{5000000 + 86 * 31250});
}

TEST(Engine, BroadcastReachesExactlyTheGeometricNeighbours) {
  const auto c = cfg("topology = grid\nnodes = 24\nspacing = 40\nsim_end = 120\n");
  const auto r = run_scenario(c);
  const auto& pos = r.initial_positions;
  std::map<std::pair<std::string, std::string>, int> delivered;  // (time, src) -> receivers
  const auto lines = parse_trace(r.trace);
  for (const auto& l : lines) {
    if (l.kind == "RadioDeliver" && first_word(l.detail) == "DIO") ++delivered[{l.time, l.src}];
  }
  int checked = 0;
  for (const auto& l : lines) {
    if (l.kind != "Transmit" || field(l.detail, "result") != "broadcast" || first_word(l.detail) != "DIO") continue;
    const auto s = static_cast<std::size_t>(std::stoi(l.src));
    int expect = 0;
    for (std::size_t j = 0; j < pos.size(); ++j) {
      if (j != s && distance(pos[s], pos[j]) <= c.link.tx_range) ++expect;
    }
    const double t = std::stod(l.time) + to_seconds(hop_latency(84));
    char key[40];
    std::snprintf(key, sizeof key, "%.9f", t);
    EXPECT_EQ((delivered[{key, l.src}]), expect) << "DIO from " << l.src << " at " << l.time;
    if (s == 6) EXPECT_EQ(expect, 4);  // interior of the 5-column grid
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST(Engine, UnicastRetriesBeforeDeliveryFailed) {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto c = cfg("nodes = 20\nmobility = rwp\nsim_end = 600\nloss_probability = 0.2\n");
    c.seed = seed;
    const auto r = run_scenario(c);
    const int attempts = c.unicast_retries + 1;
    std::map<std::string, int> failed, last_attempts, failed_at[8], tried_at[8];
    int failures = 0;
    for (const auto& l : parse_trace(r.trace)) {
      if (l.kind == "DeliveryFailed") {
        ++failed[l.src + ">" + l.dst + " " + l.detail];
        ++failures;
      }
      if (l.kind != "Transmit" || field(l.detail, "result") == "broadcast") continue;
      const int k = std::stoi(field(l.detail, "attempt"));
      ASSERT_GE(k, 1);
      ASSERT_LE(k, attempts);
      const bool ok = field(l.detail, "result") == "ok";
      ++tried_at[k][frame_key(l)];
      if (!ok) ++failed_at[k][frame_key(l)];
      if (k == attempts && !ok) ++last_attempts[frame_key(l)];
    }
    EXPECT_GT(failures, 0) << "seed " << seed;
    EXPECT_EQ(failed, last_attempts) << "seed " << seed;
    // Attempt k+1 happens exactly when attempt k failed.
    for (int k = 1; k < attempts; ++k) EXPECT_EQ(failed_at[k], tried_at[k + 1]) << "attempt " << k;
  }
}

TEST(Engine, TraceRecountMatchesLedger) {
  for (const char* text : {"nodes = 20\nattacker = hop1\ndetection = on\n",
                           "nodes = 20\nmobility = rwp\nattacker = hop2\nloss_probability = 0.05\n",
                           "topology = line\nnodes = 5\nattacker = 2\ndetection = on\n"}) {
    const auto r = run_scenario(cfg(text));
    std::uint64_t sends = 0, deliveries = 0, tampers = 0, fake_at_root = 0, icmp_at_root = 0;
    std::map<std::string, std::uint64_t> tx;
    std::string prev = "0";
    for (const auto& l : parse_trace(r.trace)) {
      ASSERT_LE(std::stod(prev), std::stod(l.time));
      prev = l.time;
      if (l.kind == "AppSend") ++sends;
      if (l.kind == "Delivered") ++deliveries;
      if (l.kind == "Tamper") ++tampers;
      if (l.kind == "FakeNeighborReceived") ++fake_at_root;
      if (l.kind == "IcmpReceived") ++icmp_at_root;
      if (l.kind == "Transmit") ++tx[first_word(l.detail)];  // every attempt is a transmission
    }
    const auto& m = r.ledger;
    EXPECT_EQ(sends, m.sent_by_sink) << text;
    EXPECT_EQ(deliveries, m.received_by_sensors) << text;
    EXPECT_EQ(tampers, m.corrupted_packets) << text;
    EXPECT_EQ(fake_at_root, m.fake_neighbor_received_at_root) << text;
    EXPECT_EQ(icmp_at_root, m.icmp_received_at_root) << text;
    std::uint64_t overhead = 0;
    for (std::size_t k = 0; k < kPacketKindCount; ++k) {
      const auto kind = static_cast<PacketKind>(k);
      EXPECT_EQ(tx[to_string(kind)], m.transmitted(kind)) << text << to_string(kind);
      if (is_overhead(kind)) overhead += tx[to_string(kind)];
    }
    EXPECT_EQ(overhead, overhead_count(m)) << text;
  }
}

TEST(Engine, DeterministicPerSeed) {
  const auto c = cfg("nodes = 20\nmobility = rwp\nattacker = hop1\ndetection = on\nloss_probability = 0.05\n");
  const auto a = run_scenario(c);
  const auto b = run_scenario(c);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.detection_log, b.detection_log);
  auto d = c;
  d.seed = 2;
  EXPECT_NE(run_scenario(d).trace, a.trace);
}

TEST(Engine, NoTrafficBeforeFirstRound) {
  const auto r = run_scenario(cfg("sim_end = 59\n"));
  EXPECT_EQ(r.ledger.sent_by_sink, 0u);
  EXPECT_THROW(downward_pdr(r.ledger), MetricsError);
}

TEST(Engine, StaticBaselineDeliversEverything) {
  for (int n : {10, 20, 30}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      auto c = cfg("");
      c.node_count = n;
      c.seed = seed;
      const auto r = run_scenario(c);
      EXPECT_EQ(r.ledger.sent_by_sink, static_cast<std::uint64_t>(9 * n));
      EXPECT_EQ(downward_pdr(r.ledger), 1.0) << "n=" << n << " seed=" << seed;
      EXPECT_TRUE(r.blacklisted.empty());
    }
  }
}

// BFS over the unit-disk graph gives the hop count every node must settle on.
TEST(Engine, StaticRoutesAreShortestPaths) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto c = cfg("nodes = 30\n");
    c.seed = seed;
    const auto r = run_scenario(c);
    const auto& pos = r.initial_positions;
    std::vector<int> dist(pos.size(), -1);
    std::vector<std::size_t> q{0};
    dist[0] = 0;
    for (std::size_t h = 0; h < q.size(); ++h) {
      for (std::size_t v = 0; v < pos.size(); ++v) {
        if (dist[v] < 0 && distance(pos[q[h]], pos[v]) <= c.link.tx_range) {
          dist[v] = dist[q[h]] + 1;
          q.push_back(v);
        }
      }
    }
    EXPECT_EQ(r.hops_at_first_round, dist) << "seed " << seed;
  }
}

TEST(Engine, DeliveryDelayIsHopsTimesLatency) {
  const auto r = run_scenario(cfg("topology = line\nnodes = 5\nsim_end = 100\n"));
  // One SRH address per hop, one octet each after compression, padded to 8.
  const std::size_t frame = 40 + 8 + 8 + 30;
  for (const auto& p : r.ledger.packets) {
    ASSERT_TRUE(p.delivered);
    EXPECT_EQ(*p.delivered - p.sent, static_cast<int>(p.destination.value) * hop_latency(frame));
  }
}

TEST(Engine, EnergyTicksCoverTheRun) {
  const auto c = cfg("nodes = 10\nsim_end = 300\n");
  const auto r = run_scenario(c);
  const auto total = static_cast<std::uint64_t>(300 * c.energy.tick_rate);
  ASSERT_EQ(r.ledger.energy.size(), 11u);
  for (const auto& acc : r.ledger.energy) {
    const auto cpu = acc.get(EnergyState::CpuActive) + acc.get(EnergyState::CpuIdle);
    EXPECT_LE(cpu > total ? cpu - total : total - cpu, 1u);
    EXPECT_GT(acc.get(EnergyState::RadioTx), 0u);
  }
  const double p = mean_power_mw(r.ledger, c.energy.voltage);
  EXPECT_GT(p, 0.0);
}

TEST(Engine, AttackerTampersOnlyData) {
  const auto r = run_scenario(cfg("nodes = 20\nattacker = hop1\n"));
  ASSERT_EQ(r.ledger.attackers.size(), 1u);
  const auto atk = to_string(*r.ledger.attackers.begin());
  std::set<std::string> tampered;
  for (const auto& l : parse_trace(r.trace)) {
    if (l.kind == "Tamper") {
      EXPECT_EQ(l.src, atk);
      tampered.insert(field(l.detail, "id"));
    }
    if (l.kind == "Delivered") EXPECT_FALSE(tampered.contains(field(l.detail, "id")));
  }
  EXPECT_GT(tampered.size(), 0u);
  EXPECT_EQ(r.ledger.icmp_generated, r.ledger.corrupted_packets);
  EXPECT_EQ(r.ledger.fake_neighbor_generated, r.ledger.corrupted_packets);
}
