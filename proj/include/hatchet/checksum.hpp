#pragma once

// SRH integrity checksum carried in the low 16 bits of the reserved field.

#include <cstdint>
#include <span>
#include <vector>

#include "hatchet/srh.hpp"

namespace hatchet {

/// 16-bit one's-complement sum of the uncompressed addresses (as big-endian
/// 16-bit words) plus `segments_total`, complemented.
std::uint16_t compute_checksum(std::span<const Ipv6Address> addresses, std::uint32_t segments_total);

/// The route as the generator issued it, undoing the per-hop swaps. With
/// p = n - segments_left hops processed, the route is
/// Address[2..p] ++ current_destination ++ Address[p+1..n].
std::vector<Ipv6Address> issued_route(const SourceRoutingHeader& header,
                                      const Ipv6Address& current_destination);

struct ChecksumPair {
  std::uint16_t ch_i = 0;  // from the header's reserved bits
  std::uint16_t ch_n = 0;  // recomputed at this hop

  bool matches() const { return ch_i == ch_n; }
};

/// Recomputes the checksum over the received header and compares it with the
/// value stored by the root.
ChecksumPair verify_srh(const SourceRoutingHeader& header, const Ipv6Address& current_destination);

inline std::uint16_t stored_checksum(const SourceRoutingHeader& header) {
  return static_cast<std::uint16_t>(header.reserved & 0xffff);
}

}  // namespace hatchet
