#pragma once

// RPL non-storing mode: ranks, control messages, trickle, the root's
// downward routing table and downward packet construction.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <variant>
#include <vector>

#include "hatchet/game.hpp"
#include "hatchet/srh.hpp"
#include "hatchet/types.hpp"

namespace hatchet {

struct Rank {
  std::uint16_t value = 0xffff;

  friend constexpr auto operator<=>(Rank, Rank) = default;
};

inline constexpr std::uint16_t kMinHopRankIncrease = 256;
inline constexpr Rank kRootRank{kMinHopRankIncrease};
inline constexpr Rank kInfiniteRank{0xffff};

/// OF0 with a hop-count metric.
constexpr Rank rank_below(Rank parent) {
  const std::uint32_t r = std::uint32_t{parent.value} + kMinHopRankIncrease;
  return r >= kInfiniteRank.value ? kInfiniteRank : Rank{static_cast<std::uint16_t>(r)};
}

constexpr int hop_count(Rank r) { return r.value / kMinHopRankIncrease - 1; }

// --- control messages --------------------------------------------------------

struct DioBody {
  Rank rank;
  NodeId dodag_id = kRootId;
  std::uint8_t version = 0;
};

struct DisBody {
  bool unicast = false;
};

struct DaoBody {
  NodeId child;
  NodeId parent;
  std::uint8_t sequence = 0;
  std::vector<NodeId> blacklist;  // attackers reported to the root
};

struct DaoAckBody {
  std::uint8_t sequence = 0;
  std::uint8_t status = 0;  // 0 = accepted
};

/// SN_ip: a node asking to add a neighbour that does not exist.
struct FakeNeighborBody {
  Ipv6Address advertised;
};

enum class MessageKind { Dio, Dis, Dao, DaoAck, FakeNeighbor };

const char* to_string(MessageKind kind);

struct ControlMessage {
  NodeId origin;
  std::variant<DioBody, DisBody, DaoBody, DaoAckBody, FakeNeighborBody> body;

  MessageKind kind() const { return static_cast<MessageKind>(body.index()); }
};

// --- trickle -----------------------------------------------------------------

struct TrickleState {
  SimTime interval_min{};
  SimTime interval_max{};
  SimTime current_interval{};
  SimTime next_fire{};
};

TrickleState trickle_start(SimTime interval_min, SimTime interval_max, SimTime now);

/// Fires when now >= next_fire: doubles the interval (clamped) and reschedules.
/// Returns whether a DIO is due.
bool trickle_tick(TrickleState& state, SimTime now);

/// Back to interval_min; a no-op when already there.
void trickle_reset(TrickleState& state, SimTime now);

// --- node state --------------------------------------------------------------

struct NeighborInfo {
  std::optional<Rank> rank;  // last advertised, if a DIO was heard
  SimTime last_heard{};
};

struct RplState {
  NodeId self;
  bool is_root = false;
  Rank rank = kInfiniteRank;
  std::optional<NodeId> parent;
  std::map<NodeId, NeighborInfo> neighbors;
  TrickleState trickle;

  bool joined() const { return is_root || parent.has_value(); }
};

RplState make_root(NodeId id);
RplState make_sensor(NodeId id);

enum class DioChange { Ignored, NoChange, Joined, SwitchedParent, RankChanged, Detached };

const char* to_string(DioChange c);

struct DioOutcome {
  DioChange change = DioChange::Ignored;
  bool schedule_dao = false;
  bool reset_trickle = false;
};

/// Best non-blacklisted neighbour with a known rank strictly below `bound`.
std::optional<NodeId> select_parent(const RplState& state, const Blacklist& blacklist, Rank bound);

/// Makes `parent` the preferred parent. Returns whether the rank changed.
bool adopt_parent(RplState& state, NodeId parent, Rank parent_rank);

/// Drops the parent and sets infinite rank.
void detach(RplState& state);

DioOutcome on_dio(RplState& node, const ControlMessage& dio, const Blacklist& blacklist, SimTime now);

enum class DisResponse { Ignore, UnicastDio, TrickleReset };

DisResponse on_dis(RplState& node, const ControlMessage& dis, SimTime now);

// --- root routing table ------------------------------------------------------

enum class RouteErrorCode { UnknownDestination, StaleRoute, RouteTooLong };

const char* to_string(RouteErrorCode code);

class RouteError : public std::runtime_error {
 public:
  explicit RouteError(RouteErrorCode code, NodeId at);
  RouteErrorCode code() const noexcept { return code_; }
  NodeId at() const noexcept { return at_; }

 private:
  RouteErrorCode code_;
  NodeId at_;
};

struct RootRoutingTable {
  NodeId root = kRootId;
  std::map<NodeId, NodeId> parent_of;
  std::map<NodeId, SimTime> freshness;
  /// Every (child, parent) link announced, with its latest announcement.
  std::map<std::pair<NodeId, NodeId>, SimTime> known_links;
  /// Attackers reported by sensors.
  std::set<NodeId> blacklisted;

  bool has_cycle() const;
};

enum class DaoStatus : std::uint8_t { Accepted = 0, CycleRejected = 1 };

struct DaoResult {
  DaoStatus status;
  ControlMessage ack;  // addressed to the DAO's child
};

DaoResult on_dao(RootRoutingTable& table, const ControlMessage& dao, SimTime now);

/// Hops from the root's first hop to `destination`, inclusive.
std::vector<NodeId> compute_source_route(const RootRoutingTable& table, NodeId destination,
                                         SimTime now, SimTime lifetime);

inline constexpr std::size_t kIpv6HeaderOctets = 40;

struct DownwardPacket {
  std::vector<NodeId> route;
  SourceRoutingHeader srh;  // unprocessed: segments_left == route.size()
  std::uint16_t checksum = 0;
  std::size_t total_octets = 0;
};

DownwardPacket build_downward_packet(const RootRoutingTable& table, NodeId destination,
                                     std::size_t payload_octets, SimTime now, SimTime lifetime);

}  // namespace hatchet
