#include "hatchet/detection.hpp"

namespace hatchet {

PayoffMatrix& DetectionState::game_with(NodeId parent) {
  return games.try_emplace(parent, initial).first->second;
}

ControlMessage make_fake_neighbor(NodeId self, const Ipv6Address& unreachable) {
  return {self, FakeNeighborBody{unreachable}};
}

FailureResponse on_forward_failure(DetectionState& state, NodeId parent, const ChecksumPair& checksum,
                                   const Ipv6Address& unreachable, SimTime now) {
  FailureResponse out{make_fake_neighbor(state.self, unreachable), false, std::nullopt};
  if (checksum.matches()) return out;

  auto& game = state.game_with(parent);
  game.mark_forward_failure();
  out.marker_set = true;

  if (auto suspect = extract_blacklist(game, parent)) {
    if (*suspect != state.root && *suspect != state.self && state.blacklist.add(*suspect, now)) {
      out.blacklisted = suspect;
    }
  }
  return out;
}

const char* to_string(MitigationStatus s) {
  switch (s) {
    case MitigationStatus::NotNeeded: return "not-needed";
    case MitigationStatus::SwitchedParent: return "switch-parent";
    case MitigationStatus::NoAlternateParent: return "no-alternate-parent";
  }
  return "?";
}

MitigationOutcome mitigate(RplState& node, const Blacklist& blacklist) {
  if (!node.parent || !blacklist.contains(*node.parent)) return {};
  if (auto alt = select_parent(node, blacklist, node.rank)) {
    const bool changed = adopt_parent(node, *alt, *node.neighbors.at(*alt).rank);
    return {MitigationStatus::SwitchedParent, alt, changed};
  }
  return {MitigationStatus::NoAlternateParent, std::nullopt, false};
}

}  // namespace hatchet
