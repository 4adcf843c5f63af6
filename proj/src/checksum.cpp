#include "hatchet/checksum.hpp"

namespace hatchet {

std::uint16_t compute_checksum(std::span<const Ipv6Address> addresses, std::uint32_t segments_total) {
  std::uint64_t sum = 0;
  for (const auto& a : addresses) {
    for (std::size_t i = 0; i < 16; i += 2) sum += static_cast<std::uint32_t>(a.octets[i] << 8 | a.octets[i + 1]);
  }
  sum += segments_total;
  while (sum > 0xffff) sum = (sum & 0xffff) + (sum >> 16);
  return static_cast<std::uint16_t>(~sum & 0xffff);
}

std::vector<Ipv6Address> issued_route(const SourceRoutingHeader& header,
                                      const Ipv6Address& current_destination) {
  const auto& v = header.addresses;
  const std::size_t n = v.size();
  if (header.segments_left >= n) return v;  // not yet processed by the generator
  const std::size_t processed = n - header.segments_left;

  std::vector<Ipv6Address> route;
  route.reserve(n);
  route.insert(route.end(), v.begin() + 1, v.begin() + static_cast<std::ptrdiff_t>(processed));
  route.push_back(current_destination);
  route.insert(route.end(), v.begin() + static_cast<std::ptrdiff_t>(processed), v.end());
  return route;
}

ChecksumPair verify_srh(const SourceRoutingHeader& header, const Ipv6Address& current_destination) {
  const auto route = issued_route(header, current_destination);
  return {stored_checksum(header),
          compute_checksum(route, static_cast<std::uint32_t>(header.addresses.size()))};
}

}  // namespace hatchet
