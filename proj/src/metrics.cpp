#include "hatchet/metrics.hpp"

#include <numeric>

namespace hatchet {

namespace {
const char* message(MetricsErrorCode code) {
  switch (code) {
    case MetricsErrorCode::NoTraffic: return "NoTraffic: no downward data packets were sent";
    case MetricsErrorCode::NoDeliveries: return "NoDeliveries: no data packet was delivered";
    case MetricsErrorCode::BadTickRate: return "BadTickRate: tick rate must be positive";
  }
  return "?";
}
}  // namespace

MetricsError::MetricsError(MetricsErrorCode code) : std::runtime_error(message(code)), code_(code) {}

const char* to_string(PacketKind kind) {
  switch (kind) {
    case PacketKind::Data: return "DATA";
    case PacketKind::Dio: return "DIO";
    case PacketKind::Dis: return "DIS";
    case PacketKind::Dao: return "DAO";
    case PacketKind::DaoAck: return "DAO_ACK";
    case PacketKind::IcmpError: return "ICMP_ERROR";
    case PacketKind::FakeNeighbor: return "FAKE_NEIGHBOR";
  }
  return "?";
}

double avg_power(const EnergyAccount& account, double voltage) {
  if (!(account.tick_rate > 0)) throw MetricsError(MetricsErrorCode::BadTickRate);
  double current = 0;
  for (std::size_t s = 0; s < kEnergyStateCount; ++s) {
    current += static_cast<double>(account.ticks[s]) * account.current_ma[s] / account.tick_rate;
  }
  return current * voltage;
}

void MetricsLedger::record_send(std::uint64_t id, NodeId destination, SimTime now, bool tampered) {
  if (packets.size() <= id) packets.resize(id + 1);
  packets[id] = {id, destination, now, std::nullopt, tampered};
  ++sent_by_sink;
}

void MetricsLedger::record_delivery(std::uint64_t id, SimTime now) {
  auto& rec = packets.at(id);
  if (rec.delivered) return;
  rec.delivered = now;
  ++received_by_sensors;
  latency_samples.push_back(to_seconds(now - rec.sent));
}

double downward_pdr(const MetricsLedger& ledger) {
  if (ledger.sent_by_sink == 0) throw MetricsError(MetricsErrorCode::NoTraffic);
  return static_cast<double>(ledger.received_by_sensors) / static_cast<double>(ledger.sent_by_sink);
}

double downward_pdr(const MetricsLedger& ledger, SimTime from, SimTime to) {
  std::uint64_t sent = 0, received = 0;
  for (const auto& p : ledger.packets) {
    if (p.sent < from || p.sent >= to) continue;
    ++sent;
    if (p.delivered) ++received;
  }
  if (sent == 0) throw MetricsError(MetricsErrorCode::NoTraffic);
  return static_cast<double>(received) / static_cast<double>(sent);
}

double avg_delay(const MetricsLedger& ledger) {
  if (ledger.latency_samples.empty()) throw MetricsError(MetricsErrorCode::NoDeliveries);
  const double sum = std::accumulate(ledger.latency_samples.begin(), ledger.latency_samples.end(), 0.0);
  return sum / static_cast<double>(ledger.latency_samples.size());
}

std::uint64_t overhead_count(const MetricsLedger& ledger) {
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < kPacketKindCount; ++k) {
    if (is_overhead(static_cast<PacketKind>(k))) total += ledger.transmissions[k];
  }
  return total;
}

double mean_power_mw(const MetricsLedger& ledger, double voltage) {
  if (ledger.energy.empty() || ledger.duration <= SimTime::zero()) return 0.0;
  const double secs = to_seconds(ledger.duration);
  double sum = 0;
  for (const auto& acc : ledger.energy) sum += avg_power(acc, voltage) / secs;
  return sum / static_cast<double>(ledger.energy.size());
}

}  // namespace hatchet
