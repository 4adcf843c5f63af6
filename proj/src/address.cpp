#include "hatchet/address.hpp"

#include <algorithm>
#include <cstdio>

namespace hatchet {

bool Ipv6Address::is_unspecified() const {
  return std::all_of(octets.begin(), octets.end(), [](std::uint8_t b) { return b == 0; });
}

int common_prefix_octets(const Ipv6Address& a, const Ipv6Address& b) {
  int n = 0;
  while (n < 16 && a.octets[n] == b.octets[n]) ++n;
  return n;
}

Ipv6Address node_address(NodeId id) {
  Ipv6Address a;
  a.octets[0] = 0xfd;
  a.octets[14] = static_cast<std::uint8_t>(id.value >> 8);
  a.octets[15] = static_cast<std::uint8_t>(id.value & 0xff);
  return a;
}

std::optional<NodeId> node_of(const Ipv6Address& addr) {
  const Ipv6Address base = node_address(NodeId{0});
  if (common_prefix_octets(addr, base) < 14) return std::nullopt;
  return NodeId{static_cast<std::uint16_t>(addr.octets[14] << 8 | addr.octets[15])};
}

std::string to_string(const Ipv6Address& addr) {
  std::array<unsigned, 8> groups{};
  for (int i = 0; i < 8; ++i) groups[i] = addr.octets[2 * i] << 8 | addr.octets[2 * i + 1];

  // Longest run of zero groups (length >= 2) collapses to "::".
  int best_start = -1, best_len = 0;
  for (int i = 0; i < 8;) {
    if (groups[i] != 0) {
      ++i;
      continue;
    }
    int j = i;
    while (j < 8 && groups[j] == 0) ++j;
    if (j - i > best_len) {
      best_start = i;
      best_len = j - i;
    }
    i = j;
  }
  if (best_len < 2) best_start = -1;

  std::string out;
  char buf[8];
  for (int i = 0; i < 8; ++i) {
    if (i == best_start) {
      out += "::";
      i += best_len - 1;
      continue;
    }
    if (!out.empty() && out.back() != ':') out += ':';
    std::snprintf(buf, sizeof buf, "%x", groups[i]);
    out += buf;
  }
  return out;
}

}  // namespace hatchet
