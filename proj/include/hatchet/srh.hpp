#pragma once

// RFC 6554 source routing header: wire codec and per-hop processing.

#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hatchet/address.hpp"

namespace hatchet {

inline constexpr std::uint8_t kSrhRoutingType = 3;
inline constexpr std::size_t kMaxSrhAddresses = 32;
inline constexpr std::size_t kSrhFixedOctets = 8;

enum class SrhErrorCode {
  NonIntegralCount,
  NonPositiveCount,
  TooManyAddresses,
  BadRoutingType,
  Truncated,
  BadField,
};

const char* to_string(SrhErrorCode code);

class SrhError : public std::runtime_error {
 public:
  explicit SrhError(SrhErrorCode code, const std::string& detail = {});
  SrhErrorCode code() const noexcept { return code_; }

 private:
  SrhErrorCode code_;
};

struct SourceRoutingHeader {
  std::uint8_t next_header = 17;  // UDP
  std::uint8_t hdr_ext_len = 0;
  std::uint8_t routing_type = kSrhRoutingType;
  std::uint8_t segments_left = 0;
  std::uint8_t cmpr_i = 0;
  std::uint8_t cmpr_e = 0;
  std::uint8_t pad = 0;
  std::uint32_t reserved = 0;  // 20 bits on the wire
  std::vector<Ipv6Address> addresses;

  /// Total header size on the wire.
  std::size_t wire_size() const { return kSrhFixedOctets + 8u * hdr_ext_len; }

  friend bool operator==(const SourceRoutingHeader&, const SourceRoutingHeader&) = default;
};

/// n = (((HdrExtLen*8) - Pad - (16 - CmprE)) / (16 - CmprI)) + 1, with exact division.
int address_count(int hdr_ext_len, int pad, int cmpr_i, int cmpr_e);

struct EncodedSrh {
  SourceRoutingHeader header;
  std::vector<std::uint8_t> octets;
};

/// Lays out `addresses` with CmprI = CmprE = shared_prefix_octets and minimal padding.
/// Every address must share that many leading octets with `prefix_source`
/// (the packet's IPv6 destination), otherwise BadField is thrown.
EncodedSrh encode(const std::vector<Ipv6Address>& addresses, int shared_prefix_octets,
                  int segments_left, std::uint32_t reserved,
                  const Ipv6Address& prefix_source, std::uint8_t next_header = 17);

/// Re-serialises an already-populated header (fields taken as given).
std::vector<std::uint8_t> serialize(const SourceRoutingHeader& header);

/// Parses a header; elided prefixes are copied from `prefix_source`.
SourceRoutingHeader decode(std::span<const std::uint8_t> raw, const Ipv6Address& prefix_source);

/// Longest prefix (capped at 15) shared by every address and the destination.
int shared_prefix(const std::vector<Ipv6Address>& addresses, const Ipv6Address& destination);

/// Re-derives the length/compression fields for the current address vector,
/// as a node must after rewriting an address.
SourceRoutingHeader recompress(SourceRoutingHeader header, const Ipv6Address& destination);

// --- forwarding ------------------------------------------------------------

enum class IcmpKind { SegmentsLeftExceedsN, NextHopUnreachable, HopLimitExceeded };

const char* to_string(IcmpKind kind);

struct Deliver {
  friend bool operator==(const Deliver&, const Deliver&) = default;
};

struct Forward {
  Ipv6Address next_destination;
  SourceRoutingHeader updated_header;
  int hop_limit = 0;

  friend bool operator==(const Forward&, const Forward&) = default;
};

struct IcmpError {
  IcmpKind kind;
  /// The address the node was asked to reach, when one was computed.
  Ipv6Address target{};

  friend bool operator==(const IcmpError&, const IcmpError&) = default;
};

using ForwardAction = std::variant<Deliver, Forward, IcmpError>;

using NeighborSet = std::set<Ipv6Address>;

/// Benign RFC 6554 processing at one hop.
ForwardAction forward_step(const SourceRoutingHeader& header, const Ipv6Address& current_destination,
                           int hop_limit, const NeighborSet& neighbors);

}  // namespace hatchet
