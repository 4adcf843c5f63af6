#include "hatchet/srh.hpp"

#include <algorithm>

namespace hatchet {

const char* to_string(SrhErrorCode code) {
  switch (code) {
    case SrhErrorCode::NonIntegralCount: return "NonIntegralCount";
    case SrhErrorCode::NonPositiveCount: return "NonPositiveCount";
    case SrhErrorCode::TooManyAddresses: return "TooManyAddresses";
    case SrhErrorCode::BadRoutingType: return "BadRoutingType";
    case SrhErrorCode::Truncated: return "Truncated";
    case SrhErrorCode::BadField: return "BadField";
  }
  return "?";
}

SrhError::SrhError(SrhErrorCode code, const std::string& detail)
    : std::runtime_error(detail.empty() ? std::string(to_string(code))
                                        : std::string(to_string(code)) + ": " + detail),
      code_(code) {}

const char* to_string(IcmpKind kind) {
  switch (kind) {
    case IcmpKind::SegmentsLeftExceedsN: return "SegmentsLeftExceedsN";
    case IcmpKind::NextHopUnreachable: return "NextHopUnreachable";
    case IcmpKind::HopLimitExceeded: return "HopLimitExceeded";
  }
  return "?";
}

int address_count(int hdr_ext_len, int pad, int cmpr_i, int cmpr_e) {
  if (cmpr_i < 0 || cmpr_i > 15 || cmpr_e < 0 || cmpr_e > 15 || pad < 0 || pad > 7 ||
      hdr_ext_len < 0 || hdr_ext_len > 255) {
    throw SrhError(SrhErrorCode::BadField, "field out of range");
  }
  const int numerator = hdr_ext_len * 8 - pad - (16 - cmpr_e);
  const int denominator = 16 - cmpr_i;
  if (numerator % denominator != 0) throw SrhError(SrhErrorCode::NonIntegralCount);
  const int n = numerator / denominator + 1;
  if (n < 0 || (n == 0 && hdr_ext_len > 0)) throw SrhError(SrhErrorCode::NonPositiveCount);
  return n;
}

namespace {

void check_addresses(const std::vector<Ipv6Address>& addresses) {
  if (addresses.empty()) throw SrhError(SrhErrorCode::BadField, "empty address vector");
  if (addresses.size() > kMaxSrhAddresses) throw SrhError(SrhErrorCode::TooManyAddresses);
  for (const auto& a : addresses) {
    if (a.is_unspecified()) throw SrhError(SrhErrorCode::BadField, "unspecified hop address");
  }
}

// Fills hdr_ext_len / pad for the current address vector and compression.
void layout(SourceRoutingHeader& h) {
  const std::size_t n = h.addresses.size();
  const std::size_t area = (n - 1) * (16u - h.cmpr_i) + (16u - h.cmpr_e);
  const std::size_t pad = (8 - area % 8) % 8;
  const std::size_t units = (area + pad) / 8;
  if (units > 255) throw SrhError(SrhErrorCode::TooManyAddresses);
  h.pad = static_cast<std::uint8_t>(pad);
  h.hdr_ext_len = static_cast<std::uint8_t>(units);
}

}  // namespace

std::vector<std::uint8_t> serialize(const SourceRoutingHeader& h) {
  std::vector<std::uint8_t> out;
  out.reserve(h.wire_size());
  out.push_back(h.next_header);
  out.push_back(h.hdr_ext_len);
  out.push_back(h.routing_type);
  out.push_back(h.segments_left);
  out.push_back(static_cast<std::uint8_t>(h.cmpr_i << 4 | (h.cmpr_e & 0x0f)));
  out.push_back(static_cast<std::uint8_t>(h.pad << 4 | ((h.reserved >> 16) & 0x0f)));
  out.push_back(static_cast<std::uint8_t>(h.reserved >> 8));
  out.push_back(static_cast<std::uint8_t>(h.reserved));
  for (std::size_t i = 0; i < h.addresses.size(); ++i) {
    const bool last = i + 1 == h.addresses.size();
    const int elided = last ? h.cmpr_e : h.cmpr_i;
    const auto& o = h.addresses[i].octets;
    out.insert(out.end(), o.begin() + elided, o.end());
  }
  out.insert(out.end(), h.pad, 0);
  return out;
}

EncodedSrh encode(const std::vector<Ipv6Address>& addresses, int shared_prefix_octets,
                  int segments_left, std::uint32_t reserved, const Ipv6Address& prefix_source,
                  std::uint8_t next_header) {
  check_addresses(addresses);
  if (shared_prefix_octets < 0 || shared_prefix_octets > 15)
    throw SrhError(SrhErrorCode::BadField, "prefix octets out of range");
  if (segments_left < 0 || static_cast<std::size_t>(segments_left) > addresses.size())
    throw SrhError(SrhErrorCode::BadField, "segments_left exceeds address count");
  if (reserved > 0xfffff) throw SrhError(SrhErrorCode::BadField, "reserved exceeds 20 bits");
  for (const auto& a : addresses) {
    if (common_prefix_octets(a, prefix_source) < shared_prefix_octets)
      throw SrhError(SrhErrorCode::BadField, "address does not share the elided prefix");
  }

  EncodedSrh out;
  auto& h = out.header;
  h.next_header = next_header;
  h.segments_left = static_cast<std::uint8_t>(segments_left);
  h.cmpr_i = h.cmpr_e = static_cast<std::uint8_t>(shared_prefix_octets);
  h.reserved = reserved;
  h.addresses = addresses;
  layout(h);
  out.octets = serialize(h);
  return out;
}

SourceRoutingHeader decode(std::span<const std::uint8_t> raw, const Ipv6Address& prefix_source) {
  if (raw.size() < kSrhFixedOctets) throw SrhError(SrhErrorCode::Truncated);
  SourceRoutingHeader h;
  h.next_header = raw[0];
  h.hdr_ext_len = raw[1];
  h.routing_type = raw[2];
  h.segments_left = raw[3];
  h.cmpr_i = raw[4] >> 4;
  h.cmpr_e = raw[4] & 0x0f;
  h.pad = raw[5] >> 4;
  h.reserved = static_cast<std::uint32_t>(raw[5] & 0x0f) << 16 |
               static_cast<std::uint32_t>(raw[6]) << 8 | raw[7];
  if (h.routing_type != kSrhRoutingType) throw SrhError(SrhErrorCode::BadRoutingType);
  if (h.pad > 7) throw SrhError(SrhErrorCode::BadField, "pad exceeds 7");

  const int n = address_count(h.hdr_ext_len, h.pad, h.cmpr_i, h.cmpr_e);
  if (n == 0) throw SrhError(SrhErrorCode::NonPositiveCount);
  if (static_cast<std::size_t>(n) > kMaxSrhAddresses) throw SrhError(SrhErrorCode::TooManyAddresses);
  if (raw.size() < h.wire_size()) throw SrhError(SrhErrorCode::Truncated);

  std::size_t pos = kSrhFixedOctets;
  h.addresses.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int elided = (i + 1 == n) ? h.cmpr_e : h.cmpr_i;
    auto& o = h.addresses[static_cast<std::size_t>(i)].octets;
    std::copy_n(prefix_source.octets.begin(), elided, o.begin());
    std::copy_n(raw.begin() + static_cast<std::ptrdiff_t>(pos), 16 - elided, o.begin() + elided);
    pos += static_cast<std::size_t>(16 - elided);
  }
  return h;
}

int shared_prefix(const std::vector<Ipv6Address>& addresses, const Ipv6Address& destination) {
  int p = 15;
  for (const auto& a : addresses) p = std::min(p, common_prefix_octets(a, destination));
  return p;
}

SourceRoutingHeader recompress(SourceRoutingHeader h, const Ipv6Address& destination) {
  check_addresses(h.addresses);
  const auto p = static_cast<std::uint8_t>(shared_prefix(h.addresses, destination));
  h.cmpr_i = h.cmpr_e = p;
  layout(h);
  return h;
}

ForwardAction forward_step(const SourceRoutingHeader& header, const Ipv6Address& current_destination,
                           int hop_limit, const NeighborSet& neighbors) {
  if (header.segments_left == 0) return Deliver{};

  const auto n = header.addresses.size();
  if (header.segments_left > n) return IcmpError{IcmpKind::SegmentsLeftExceedsN};

  Forward fwd;
  fwd.updated_header = header;
  auto& h = fwd.updated_header;
  h.segments_left -= 1;
  const std::size_t index = n - h.segments_left;  // 1-based
  fwd.next_destination = h.addresses[index - 1];
  if (hop_limit <= 1) return IcmpError{IcmpKind::HopLimitExceeded, fwd.next_destination};
  h.addresses[index - 1] = current_destination;
  fwd.hop_limit = hop_limit - 1;

  if (!neighbors.contains(fwd.next_destination))
    return IcmpError{IcmpKind::NextHopUnreachable, fwd.next_destination};
  return fwd;
}

}  // namespace hatchet
