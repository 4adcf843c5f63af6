#pragma once

// Game-based detection of route tampering and the parent-switch mitigation.

#include <map>
#include <optional>

#include "hatchet/checksum.hpp"
#include "hatchet/game.hpp"
#include "hatchet/rpl.hpp"

namespace hatchet {

/// Per-node detection state: one game per parent played against, and the blacklist.
struct DetectionState {
  NodeId self;
  NodeId root = kRootId;
  PayoffMatrix initial = PayoffMatrix::canonical();
  std::map<NodeId, PayoffMatrix> games;
  Blacklist blacklist;

  PayoffMatrix& game_with(NodeId parent);
};

ControlMessage make_fake_neighbor(NodeId self, const Ipv6Address& unreachable);

struct FailureResponse {
  ControlMessage fake_neighbor;
  bool marker_set = false;           // false when the guard did not hold
  std::optional<NodeId> blacklisted; // newly added this call
};

/// Reaction of a node whose forward failed (NextHopUnreachable). The payoff
/// marker is only written when the checksum also mismatches.
FailureResponse on_forward_failure(DetectionState& state, NodeId parent, const ChecksumPair& checksum,
                                   const Ipv6Address& unreachable, SimTime now);

enum class MitigationStatus { NotNeeded, SwitchedParent, NoAlternateParent };

const char* to_string(MitigationStatus s);

struct MitigationOutcome {
  MitigationStatus status = MitigationStatus::NotNeeded;
  std::optional<NodeId> new_parent;
  bool rank_changed = false;
};

/// Replaces a blacklisted preferred parent with the best non-blacklisted
/// neighbour ranked below the node. Without one the node keeps its parent
/// (NoAlternateParent): leaving would only strand its sub-DODAG, and a later
/// DIO from a better neighbour still triggers the switch.
MitigationOutcome mitigate(RplState& node, const Blacklist& blacklist);

}  // namespace hatchet
