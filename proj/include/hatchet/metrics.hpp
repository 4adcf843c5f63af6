#pragma once

// Per-run measurements and the derived performance indicators.

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hatchet/packet.hpp"
#include "hatchet/types.hpp"

namespace hatchet {

enum class MetricsErrorCode { NoTraffic, NoDeliveries, BadTickRate };

class MetricsError : public std::runtime_error {
 public:
  explicit MetricsError(MetricsErrorCode code);
  MetricsErrorCode code() const noexcept { return code_; }

 private:
  MetricsErrorCode code_;
};

enum class EnergyState : std::uint8_t { CpuActive, CpuIdle, RadioTx, RadioRx };

inline constexpr std::size_t kEnergyStateCount = 4;

/// Z1-class placeholders (mA), not measured values.
struct EnergyConstants {
  double tick_rate = 32768.0;  // ticks per second
  std::array<double, kEnergyStateCount> current_ma{1.8, 0.0545, 17.4, 18.8};
  double voltage = 3.0;

  friend bool operator==(const EnergyConstants&, const EnergyConstants&) = default;
};

struct EnergyAccount {
  std::array<std::uint64_t, kEnergyStateCount> ticks{};  // c_t per state
  std::array<double, kEnergyStateCount> current_ma{};    // c_c per state
  double tick_rate = 32768.0;                            // c_d

  void add(EnergyState state, std::uint64_t t) { ticks[static_cast<std::size_t>(state)] += t; }
  std::uint64_t get(EnergyState state) const { return ticks[static_cast<std::size_t>(state)]; }
};

/// epsilon = sum over states of (c_t * c_c) / c_d, times voltage, in mW.
double avg_power(const EnergyAccount& account, double voltage);

struct PacketRecord {
  std::uint64_t id = 0;
  NodeId destination;
  SimTime sent{};
  std::optional<SimTime> delivered;
  bool tampered = false;
};

struct DetectionEvent {
  SimTime time{};
  NodeId detector;
  NodeId suspect;
  std::uint16_t ch_i = 0;
  std::uint16_t ch_n = 0;
  std::string action;
};

struct MetricsLedger {
  std::uint64_t sent_by_sink = 0;         // Si_n
  std::uint64_t received_by_sensors = 0;  // Sn_n
  std::vector<double> latency_samples;    // delta_i, seconds, delivered packets only
  std::vector<PacketRecord> packets;      // indexed by data packet id

  std::array<std::uint64_t, kPacketKindCount> transmissions{};
  std::uint64_t corrupted_packets = 0;
  std::uint64_t icmp_generated = 0;
  std::uint64_t fake_neighbor_generated = 0;
  std::uint64_t icmp_received_at_root = 0;
  std::uint64_t fake_neighbor_received_at_root = 0;

  std::vector<EnergyAccount> energy;  // per node
  std::vector<DetectionEvent> detections;
  std::set<NodeId> attackers;
  SimTime duration{};

  void record_send(std::uint64_t id, NodeId destination, SimTime now, bool tampered = false);
  void record_delivery(std::uint64_t id, SimTime now);
  std::uint64_t transmitted(PacketKind kind) const { return transmissions[static_cast<std::size_t>(kind)]; }
};

/// received / sent. Throws NoTraffic when nothing was sent.
double downward_pdr(const MetricsLedger& ledger);

/// PDR over data packets sent in [from, to).
double downward_pdr(const MetricsLedger& ledger, SimTime from, SimTime to);

/// Mean latency over delivered packets. Throws NoDeliveries.
double avg_delay(const MetricsLedger& ledger);

/// DIO + DIS + DAO + DAO-ACK + ICMPv6 error + FAKE_NEIGHBOR transmissions.
std::uint64_t overhead_count(const MetricsLedger& ledger);

/// Mean over nodes of avg_power normalised by run length: an average power in mW.
double mean_power_mw(const MetricsLedger& ledger, double voltage);

}  // namespace hatchet
