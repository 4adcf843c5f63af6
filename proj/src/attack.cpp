#include "hatchet/attack.hpp"

namespace hatchet {

Ipv6Address random_unreachable_address(std::mt19937_64& rng) {
  Ipv6Address a;
  a.octets[0] = 0x20;
  a.octets[1] = 0x01;
  a.octets[2] = 0x0d;
  a.octets[3] = 0xb8;
  for (std::size_t i = 4; i < 16; i += 4) {
    const auto word = static_cast<std::uint32_t>(rng());
    a.octets[i] = static_cast<std::uint8_t>(word >> 24);
    a.octets[i + 1] = static_cast<std::uint8_t>(word >> 16);
    a.octets[i + 2] = static_cast<std::uint8_t>(word >> 8);
    a.octets[i + 3] = static_cast<std::uint8_t>(word);
  }
  if (a.octets[15] == 0 && a.octets[14] == 0) a.octets[15] = 1;
  return a;
}

ForwardAction hatchet_forward_step(const SourceRoutingHeader& header, const Ipv6Address& current_destination,
                                   int hop_limit, const NeighborSet& neighbors, std::mt19937_64& rng) {
  if (header.segments_left == 0) return Deliver{};
  const auto n = header.addresses.size();
  if (header.segments_left > n) return IcmpError{IcmpKind::SegmentsLeftExceedsN};

  // index of the next hop is n - (segments_left - 1); the one after it is index + 1.
  const std::size_t index = n - (header.segments_left - 1u);
  const std::size_t index_next = index + 1;
  if (index_next > n) return forward_step(header, current_destination, hop_limit, neighbors);

  SourceRoutingHeader tampered = header;
  tampered.addresses[index_next - 1] = random_unreachable_address(rng);
  auto action = forward_step(tampered, current_destination, hop_limit, neighbors);
  if (auto* fwd = std::get_if<Forward>(&action)) {
    fwd->updated_header = recompress(std::move(fwd->updated_header), fwd->next_destination);
  }
  return action;
}

ForwardAction Attacker::process(const SourceRoutingHeader& header, const Ipv6Address& current_destination,
                                int hop_limit, const NeighborSet& neighbors) {
  if (!enabled_) return forward_step(header, current_destination, hop_limit, neighbors);
  auto action = hatchet_forward_step(header, current_destination, hop_limit, neighbors, rng_);
  if (was_corrupted(header, action)) ++corrupted_;
  return action;
}

bool was_corrupted(const SourceRoutingHeader& before, const ForwardAction& action) {
  const auto* fwd = std::get_if<Forward>(&action);
  if (fwd == nullptr) return false;
  const auto& after = fwd->updated_header.addresses;
  const std::size_t index = before.addresses.size() - fwd->updated_header.segments_left;
  for (std::size_t k = 0; k < after.size(); ++k) {
    if (k + 1 != index && after[k] != before.addresses[k]) return true;
  }
  return false;
}

}  // namespace hatchet
