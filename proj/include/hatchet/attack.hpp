#pragma once

// Hatchetman attacker: forwards downward packets but overwrites the
// next-to-next SRH address so the following hop cannot forward.

#include <cstdint>
#include <optional>
#include <random>
#include <set>

#include "hatchet/srh.hpp"
#include "hatchet/types.hpp"

namespace hatchet {

struct AttackerConfig {
  std::set<NodeId> attacker_ids;
  /// When set, the attacker is the hop-k node (k = *hop_selector) picked at placement.
  std::optional<int> hop_selector;
  std::uint64_t random_address_seed = 0x5eed;

  bool enabled() const { return !attacker_ids.empty() || hop_selector.has_value(); }

  friend bool operator==(const AttackerConfig&, const AttackerConfig&) = default;
};

/// Uniform random address under 2001:db8::/32, which no scenario node uses.
Ipv6Address random_unreachable_address(std::mt19937_64& rng);

/// forward_step with the next-to-next address replaced when one exists.
ForwardAction hatchet_forward_step(const SourceRoutingHeader& header, const Ipv6Address& current_destination,
                                   int hop_limit, const NeighborSet& neighbors, std::mt19937_64& rng);

/// Per-node attacker behaviour; a disabled attacker forwards benignly.
class Attacker {
 public:
  Attacker() = default;
  explicit Attacker(std::uint64_t seed) : enabled_(true), rng_(seed) {}

  bool enabled() const { return enabled_; }
  std::uint64_t corrupted() const { return corrupted_; }

  ForwardAction process(const SourceRoutingHeader& header, const Ipv6Address& current_destination,
                        int hop_limit, const NeighborSet& neighbors);

 private:
  bool enabled_ = false;
  std::mt19937_64 rng_{};
  std::uint64_t corrupted_ = 0;
};

/// Whether `action` carries a header that differs from benign processing in more than the swap.
bool was_corrupted(const SourceRoutingHeader& before, const ForwardAction& action);

}  // namespace hatchet
