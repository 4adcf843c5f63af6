#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "hatchet/rpl.hpp"
#include "hatchet/srh.hpp"

namespace hatchet {

enum class PacketKind : std::uint8_t { Data, Dio, Dis, Dao, DaoAck, IcmpError, FakeNeighbor };

inline constexpr std::size_t kPacketKindCount = 7;

const char* to_string(PacketKind kind);

constexpr bool is_overhead(PacketKind kind) { return kind != PacketKind::Data; }

/// Frame sizes used for airtime, in octets (IPv6 header included).
inline constexpr std::size_t kDioOctets = 84;
inline constexpr std::size_t kDisOctets = 46;
inline constexpr std::size_t kDaoOctets = 84;
inline constexpr std::size_t kDaoAckOctets = 48;
inline constexpr std::size_t kIcmpErrorBaseOctets = 48;
inline constexpr std::size_t kFakeNeighborOctets = 60;
inline constexpr int kDefaultHopLimit = 64;

struct Packet {
  std::uint64_t id = 0;
  PacketKind kind = PacketKind::Data;
  NodeId origin;
  NodeId final_destination;
  SimTime created{};
  int hop_limit = kDefaultHopLimit;
  std::size_t octets = 0;

  // Source-routed downward packets (data, DAO-ACK).
  std::optional<SourceRoutingHeader> srh;
  Ipv6Address ip_destination{};

  std::optional<ControlMessage> control;
  std::optional<IcmpKind> icmp;

  /// Ground truth for bookkeeping only; nodes never read it.
  bool tampered = false;
};

}  // namespace hatchet
