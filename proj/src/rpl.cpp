#include "hatchet/rpl.hpp"

#include <algorithm>
#include <deque>

#include "hatchet/checksum.hpp"

namespace hatchet {

const char* to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::Dio: return "DIO";
    case MessageKind::Dis: return "DIS";
    case MessageKind::Dao: return "DAO";
    case MessageKind::DaoAck: return "DAO_ACK";
    case MessageKind::FakeNeighbor: return "FAKE_NEIGHBOR";
  }
  return "?";
}

const char* to_string(DioChange c) {
  switch (c) {
    case DioChange::Ignored: return "ignored";
    case DioChange::NoChange: return "no-change";
    case DioChange::Joined: return "joined";
    case DioChange::SwitchedParent: return "switched-parent";
    case DioChange::RankChanged: return "rank-changed";
    case DioChange::Detached: return "detached";
  }
  return "?";
}

const char* to_string(RouteErrorCode code) {
  switch (code) {
    case RouteErrorCode::UnknownDestination: return "UnknownDestination";
    case RouteErrorCode::StaleRoute: return "StaleRoute";
    case RouteErrorCode::RouteTooLong: return "RouteTooLong";
  }
  return "?";
}

RouteError::RouteError(RouteErrorCode code, NodeId at)
    : std::runtime_error(std::string(to_string(code)) + " at node " + to_string(at)), code_(code), at_(at) {}

// --- trickle -----------------------------------------------------------------

TrickleState trickle_start(SimTime interval_min, SimTime interval_max, SimTime now) {
  return {interval_min, interval_max, interval_min, now + interval_min};
}

bool trickle_tick(TrickleState& s, SimTime now) {
  if (now < s.next_fire) return false;
  s.current_interval = std::min(s.current_interval * 2, s.interval_max);
  s.next_fire = now + s.current_interval;
  return true;
}

void trickle_reset(TrickleState& s, SimTime now) {
  if (s.current_interval == s.interval_min) return;
  s.current_interval = s.interval_min;
  s.next_fire = now + s.interval_min;
}

// --- node state --------------------------------------------------------------

RplState make_root(NodeId id) {
  RplState s;
  s.self = id;
  s.is_root = true;
  s.rank = kRootRank;
  return s;
}

RplState make_sensor(NodeId id) {
  RplState s;
  s.self = id;
  return s;
}

std::optional<NodeId> select_parent(const RplState& state, const Blacklist& blacklist, Rank bound) {
  std::optional<NodeId> best;
  Rank best_rank = kInfiniteRank;
  for (const auto& [id, info] : state.neighbors) {
    if (id == state.self || !info.rank || blacklist.contains(id)) continue;
    if (*info.rank >= bound || *info.rank >= kInfiniteRank) continue;
    if (!best || *info.rank < best_rank) {
      best = id;
      best_rank = *info.rank;
    }
  }
  return best;
}

bool adopt_parent(RplState& state, NodeId parent, Rank parent_rank) {
  const Rank old = state.rank;
  state.parent = parent;
  state.rank = rank_below(parent_rank);
  return old != state.rank;
}

void detach(RplState& state) {
  state.parent.reset();
  state.rank = kInfiniteRank;
}

DioOutcome on_dio(RplState& node, const ControlMessage& dio, const Blacklist& blacklist, SimTime now) {
  const auto* body = std::get_if<DioBody>(&dio.body);
  if (body == nullptr || dio.origin == node.self) return {};

  auto& info = node.neighbors[dio.origin];
  info.rank = body->rank;
  info.last_heard = now;

  if (node.is_root || blacklist.contains(dio.origin)) return {};

  const Rank offered = rank_below(body->rank);
  const bool from_parent = node.parent == dio.origin;

  if (from_parent && offered == kInfiniteRank) {
    // Parent detached. Only neighbours ranked below us cannot be our descendants.
    if (auto alt = select_parent(node, blacklist, node.rank)) {
      const bool changed = adopt_parent(node, *alt, *node.neighbors[*alt].rank);
      return {DioChange::SwitchedParent, true, changed};
    }
    detach(node);
    return {DioChange::Detached, false, false};
  }
  if (offered == kInfiniteRank) return {DioChange::NoChange};

  if (!node.joined()) {
    adopt_parent(node, dio.origin, body->rank);
    return {DioChange::Joined, true, true};
  }
  if (from_parent) {
    if (offered == node.rank) return {DioChange::NoChange};
    node.rank = offered;
    return {DioChange::RankChanged, false, true};
  }
  if (offered < node.rank) {
    adopt_parent(node, dio.origin, body->rank);
    return {DioChange::SwitchedParent, true, true};
  }
  return {DioChange::NoChange};
}

DisResponse on_dis(RplState& node, const ControlMessage& dis, SimTime now) {
  const auto* body = std::get_if<DisBody>(&dis.body);
  if (body == nullptr || !node.joined()) return DisResponse::Ignore;
  if (body->unicast) return DisResponse::UnicastDio;
  trickle_reset(node.trickle, now);
  return DisResponse::TrickleReset;
}

// --- root routing table ------------------------------------------------------

bool RootRoutingTable::has_cycle() const {
  for (const auto& [start, _] : parent_of) {
    NodeId cur = start;
    for (std::size_t steps = 0;; ++steps) {
      auto it = parent_of.find(cur);
      if (it == parent_of.end()) break;
      cur = it->second;
      if (cur == start || steps > parent_of.size()) return true;
    }
  }
  return false;
}

DaoResult on_dao(RootRoutingTable& table, const ControlMessage& dao, SimTime now) {
  const auto& body = std::get<DaoBody>(dao.body);
  auto ack = [&](DaoStatus status) {
    return DaoResult{status, ControlMessage{table.root, DaoAckBody{body.sequence, static_cast<std::uint8_t>(status)}}};
  };

  if (body.child == table.root || body.child == body.parent) return ack(DaoStatus::CycleRejected);
  NodeId cur = body.parent;
  for (std::size_t steps = 0; cur != table.root; ++steps) {
    if (cur == body.child || steps > table.parent_of.size()) return ack(DaoStatus::CycleRejected);
    auto it = table.parent_of.find(cur);
    if (it == table.parent_of.end()) break;
    cur = it->second;
  }

  table.parent_of[body.child] = body.parent;
  table.freshness[body.child] = now;
  table.known_links[{body.child, body.parent}] = now;
  for (NodeId b : body.blacklist) {
    if (b != table.root) table.blacklisted.insert(b);
  }
  return ack(DaoStatus::Accepted);
}

namespace {

std::vector<NodeId> primary_route(const RootRoutingTable& table, NodeId destination, SimTime now,
                                  SimTime lifetime) {
  std::vector<NodeId> route;
  for (NodeId cur = destination; cur != table.root;) {
    if (route.size() >= kMaxSrhAddresses) throw RouteError(RouteErrorCode::RouteTooLong, destination);
    auto it = table.parent_of.find(cur);
    if (it == table.parent_of.end()) throw RouteError(RouteErrorCode::UnknownDestination, cur);
    if (now - table.freshness.at(cur) > lifetime) throw RouteError(RouteErrorCode::StaleRoute, cur);
    route.push_back(cur);
    cur = it->second;
  }
  std::reverse(route.begin(), route.end());
  return route;
}

// Shortest chain over fresh announced links that avoids blacklisted relays.
std::optional<std::vector<NodeId>> alternate_route(const RootRoutingTable& table, NodeId destination,
                                                   SimTime now, SimTime lifetime) {
  std::map<NodeId, std::vector<NodeId>> parents;
  for (const auto& [link, when] : table.known_links) {
    if (now - when <= lifetime && !table.blacklisted.contains(link.second)) {
      parents[link.first].push_back(link.second);
    }
  }
  std::map<NodeId, NodeId> towards_dest;  // node -> the child it was reached from
  std::deque<NodeId> frontier{destination};
  std::set<NodeId> seen{destination};
  while (!frontier.empty()) {
    const NodeId cur = frontier.front();
    frontier.pop_front();
    if (cur == table.root) {
      std::vector<NodeId> route;
      for (NodeId n = towards_dest.at(cur); n != destination; n = towards_dest.at(n)) route.push_back(n);
      route.push_back(destination);
      if (route.size() > kMaxSrhAddresses) return std::nullopt;
      return route;
    }
    for (NodeId p : parents[cur]) {
      if (seen.insert(p).second) {
        towards_dest[p] = cur;
        frontier.push_back(p);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<NodeId> compute_source_route(const RootRoutingTable& table, NodeId destination,
                                         SimTime now, SimTime lifetime) {
  if (destination == table.root) throw RouteError(RouteErrorCode::UnknownDestination, destination);
  auto route = primary_route(table, destination, now, lifetime);
  const bool crosses_attacker = std::any_of(route.begin(), route.end() - 1,
                                            [&](NodeId n) { return table.blacklisted.contains(n); });
  if (crosses_attacker) {
    if (auto alt = alternate_route(table, destination, now, lifetime)) return *alt;
  }
  return route;
}

DownwardPacket build_downward_packet(const RootRoutingTable& table, NodeId destination,
                                     std::size_t payload_octets, SimTime now, SimTime lifetime) {
  DownwardPacket pkt;
  pkt.route = compute_source_route(table, destination, now, lifetime);

  std::vector<Ipv6Address> addresses;
  addresses.reserve(pkt.route.size());
  for (NodeId hop : pkt.route) addresses.push_back(node_address(hop));

  const auto root_addr = node_address(table.root);
  const auto n = static_cast<std::uint32_t>(addresses.size());
  pkt.checksum = compute_checksum(addresses, n);
  pkt.srh = encode(addresses, shared_prefix(addresses, root_addr), static_cast<int>(n), pkt.checksum, root_addr)
                .header;
  pkt.total_octets = kIpv6HeaderOctets + pkt.srh.wire_size() + payload_octets;
  return pkt;
}

}  // namespace hatchet
