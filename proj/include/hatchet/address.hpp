#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include "hatchet/types.hpp"

namespace hatchet {

/// A raw 128-bit IPv6 address.
struct Ipv6Address {
  std::array<std::uint8_t, 16> octets{};

  bool is_unspecified() const;

  friend auto operator<=>(const Ipv6Address&, const Ipv6Address&) = default;
};

/// Number of leading octets shared by two addresses (0..16).
int common_prefix_octets(const Ipv6Address& a, const Ipv6Address& b);

/// Scenario nodes live under fd00::/112; the low 16 bits carry the node id.
Ipv6Address node_address(NodeId id);

/// Inverse of node_address(); empty for addresses outside the scenario prefix.
std::optional<NodeId> node_of(const Ipv6Address& addr);

/// Compressed-zero text form, e.g. "fd00::7" or "2001:db8::1:2".
std::string to_string(const Ipv6Address& addr);

}  // namespace hatchet
