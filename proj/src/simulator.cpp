#include "hatchet/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <queue>
#include <tuple>

#include "hatchet/attack.hpp"
#include "hatchet/checksum.hpp"
#include "hatchet/detection.hpp"
#include "hatchet/packet.hpp"
#include "hatchet/rpl.hpp"

namespace hatchet {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::RadioDeliver: return "RadioDeliver";
    case EventKind::DeliveryFailed: return "DeliveryFailed";
    case EventKind::TimerFire: return "TimerFire";
    case EventKind::MobilityUpdate: return "MobilityUpdate";
    case EventKind::AppSend: return "AppSend";
  }
  return "?";
}

SimTime hop_latency(std::size_t octets) {
  return SimTime{5'000'000} + SimTime{31'250} * static_cast<std::int64_t>(octets);
}

namespace {

constexpr std::uint64_t kPlacementStream = 1;
constexpr std::uint64_t kMobilityStream = 2;
constexpr std::uint64_t kLossStream = 3;
constexpr std::uint64_t kJitterStream = 4;
constexpr std::uint64_t kAttackerStream = 0x100;

constexpr SimTime kCpuPerFrame = std::chrono::microseconds(500);
constexpr std::size_t kIcmpMaxOctets = 1280;
constexpr std::size_t kDaoAckPayload = kDaoAckOctets - kIpv6HeaderOctets;

}  // namespace

std::vector<Position> place_nodes(const ScenarioConfig& c) {
  validate(c);
  const auto total = static_cast<std::size_t>(c.node_count) + 1;
  std::vector<Position> pos;
  pos.reserve(total);
  switch (c.topology) {
    case Topology::Line:
      for (std::size_t i = 0; i < total; ++i) pos.push_back({static_cast<double>(i) * c.spacing, c.grid / 2});
      break;
    case Topology::Grid: {
      const auto cols = static_cast<std::size_t>(
          c.grid_columns > 0 ? c.grid_columns : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(total)))));
      for (std::size_t i = 0; i < total; ++i) {
        pos.push_back({static_cast<double>(i % cols) * c.spacing, static_cast<double>(i / cols) * c.spacing});
      }
      break;
    }
    case Topology::Random: {
      auto rng = make_stream(c.seed, kPlacementStream);
      pos.push_back({c.grid / 2, c.grid / 2});
      while (pos.size() < total) {
        for (int attempt = 0;; ++attempt) {
          if (attempt == 100000) throw ConfigError(0, "could not place a connected topology");
          const Position p{uniform(rng, 0, c.grid), uniform(rng, 0, c.grid)};
          const bool reachable = std::any_of(pos.begin(), pos.end(), [&](const Position& q) {
            return connectivity(p, q, c.link) == Link::Connected;
          });
          if (reachable) {
            pos.push_back(p);
            break;
          }
        }
      }
      break;
    }
  }
  return pos;
}

namespace {

enum class Timer : std::uint8_t { Trickle, Dis, Dao, DaoAckTimeout, DaoRefresh, Probe };
constexpr std::size_t kTimerCount = 6;

const char* to_string(Timer t) {
  switch (t) {
    case Timer::Trickle: return "trickle";
    case Timer::Dis: return "dis";
    case Timer::Dao: return "dao";
    case Timer::DaoAckTimeout: return "dao-ack-timeout";
    case Timer::DaoRefresh: return "dao-refresh";
    case Timer::Probe: return "probe";
  }
  return "?";
}

struct Event {
  SimTime time{};
  std::uint64_t seq = 0;
  EventKind kind = EventKind::TimerFire;
  NodeId node;  // receiver, timer owner, failed sender, or AppSend destination
  NodeId peer;  // link-layer sender / intended receiver
  Timer timer = Timer::Trickle;
  std::uint64_t generation = 0;
  std::shared_ptr<const Packet> packet;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return std::tie(a.time, a.seq) > std::tie(b.time, b.seq);
  }
};

struct Node {
  NodeId id;
  Ipv6Address address;
  Position position;
  MobilityState mobility;
  std::mt19937_64 mobility_rng;
  RplState rpl;
  DetectionState detection;
  Attacker attacker;
  std::uint8_t dao_sequence = 0;
  bool awaiting_ack = false;
  int dao_retries_left = 0;
  std::array<std::uint64_t, kTimerCount> generation{};
  std::array<SimTime, kEnergyStateCount> busy{};
};

struct Airframe {
  NodeId sender;
  SimTime start{};
  SimTime end{};
};

std::string format_time(SimTime t) {
  char buf[40];
  const auto ns = t.count();
  std::snprintf(buf, sizeof buf, "%lld.%09lld", static_cast<long long>(ns / 1'000'000'000),
                static_cast<long long>(ns % 1'000'000'000));
  return buf;
}

std::string describe(const Packet& p) {
  std::string s = to_string(p.kind);
  if (p.kind == PacketKind::Data) s += " id=" + std::to_string(p.id);
  if (p.control && p.kind == PacketKind::Dio) {
    s += " rank=" + std::to_string(std::get<DioBody>(p.control->body).rank.value);
  }
  s += " octets=" + std::to_string(p.octets);
  return s;
}

class Engine {
 public:
  explicit Engine(const ScenarioConfig& config);
  RunResult run();

 private:
  SimTime secs(double s) const { return seconds(s); }

  void schedule(Event e) {
    e.seq = next_seq_++;
    queue_.push(std::move(e));
  }
  void arm(Node& n, Timer t, SimTime at);
  void disarm(Node& n, Timer t) { ++n.generation[static_cast<std::size_t>(t)]; }
  void spend(Node& n, EnergyState s, SimTime d) { n.busy[static_cast<std::size_t>(s)] += d; }

  void trace(const char* kind, std::optional<NodeId> src, std::optional<NodeId> dst, const std::string& detail);
  void log_detection(const Node& detector, NodeId suspect, const ChecksumPair& check, const char* action);

  bool lost_in_air(const Node& from, const Node& to, SimTime start, SimTime end);
  void broadcast(Node& from, std::shared_ptr<Packet> pkt);
  void unicast(Node& from, NodeId to, std::shared_ptr<Packet> pkt);

  void dispatch(const Event& e);
  void on_receive(Node& self, NodeId from, const Packet& pkt);
  void on_delivery_failed(Node& self, NodeId to, const Packet& pkt);
  void on_timer(Node& self, Timer t);
  void on_mobility();
  void on_app_send(NodeId destination);

  void handle_dio(Node& self, NodeId from, const Packet& pkt);
  void handle_dis(Node& self, NodeId from, const Packet& pkt);
  void forward_downward(Node& self, NodeId from, const Packet& pkt);
  void forward_upward(Node& self, const Packet& pkt);
  void deliver_at_root(const Packet& pkt);
  void handle_dao_ack(Node& self, const Packet& pkt);
  void handle_forward_failure(Node& self, NodeId from, const Packet& pkt, const ChecksumPair& check,
                              const IcmpError& err);
  void react_to_blacklist(Node& self, NodeId suspect, const ChecksumPair& check);

  void send_dio(Node& self, std::optional<NodeId> to, Rank rank);
  void send_dis(Node& self, std::optional<NodeId> to = std::nullopt);
  void send_dao(Node& self);
  void send_upward(Node& self, std::shared_ptr<Packet> pkt);
  bool send_downward(NodeId destination, PacketKind kind, std::optional<ControlMessage> control,
                     std::size_t payload, std::uint64_t data_id);

  void joined(Node& self);
  void parent_changed(Node& self, bool rank_changed);
  void detached(Node& self);
  void lose_neighbor(Node& self, NodeId neighbor);
  void reset_trickle(Node& self);

  void record_first_round();
  void enable_attacker(NodeId id);
  NeighborSet neighbor_addresses(const Node& n) const;
  Node& node(NodeId id) { return nodes_.at(id.value); }
  std::shared_ptr<Packet> control_packet(PacketKind kind, NodeId origin, ControlMessage msg, std::size_t octets);

  const ScenarioConfig cfg_;
  const SimTime end_;
  const SimTime lifetime_;
  std::vector<Node> nodes_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t next_seq_ = 0;
  SimTime now_{};
  RootRoutingTable table_;
  std::mt19937_64 loss_rng_;
  std::vector<Airframe> air_;
  bool first_round_done_ = false;
  RunResult result_;
};

Engine::Engine(const ScenarioConfig& config)
    : cfg_(config),
      end_(seconds(config.sim_end_s)),
      lifetime_(seconds(config.route_lifetime())),
      loss_rng_(make_stream(config.seed, kLossStream)) {
  result_.config = cfg_;
  result_.initial_positions = place_nodes(cfg_);
  const auto total = result_.initial_positions.size();
  result_.hops_at_first_round.assign(total, -1);
  result_.hops_at_first_round[0] = 0;

  const MobilityBounds bounds{cfg_.grid, cfg_.speed_min, cfg_.speed_max};
  nodes_.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    Node& n = nodes_[i];
    n.id = NodeId{static_cast<std::uint16_t>(i)};
    n.address = node_address(n.id);
    n.position = result_.initial_positions[i];
    n.rpl = i == 0 ? make_root(n.id) : make_sensor(n.id);
    n.detection.self = n.id;
    n.detection.initial = cfg_.payoff;
    if (i != 0 && cfg_.mobility == MobilityMode::RandomWaypoint) {
      n.mobility.mode = MobilityMode::RandomWaypoint;
      n.mobility_rng = make_stream(cfg_.seed, kMobilityStream + (std::uint64_t{n.id.value} << 16));
      next_waypoint(n.mobility, bounds, n.mobility_rng);
    }
  }
  std::string header = "# hatchetsim trace\n";
  const std::string text = to_text(cfg_);
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    header += "# " + text.substr(start, nl - start) + "\n";
    start = nl + 1;
  }
  header += "# time_s\tkind\tsrc\tdst\tdetail\n";
  result_.trace = header;
  result_.detection_log = "# time_s\tdetector\tsuspect\tch_i\tch_n\taction\n";
  table_.root = kRootId;
  for (NodeId id : cfg_.attacker.attacker_ids) enable_attacker(id);
  if (cfg_.attacker.hop_selector) {
    if (auto id = select_hop_attacker(result_.initial_positions, cfg_.link, *cfg_.attacker.hop_selector)) {
      enable_attacker(*id);
    }
  }
}

void Engine::arm(Node& n, Timer t, SimTime at) {
  const auto k = static_cast<std::size_t>(t);
  ++n.generation[k];
  Event e;
  e.time = at;
  e.kind = EventKind::TimerFire;
  e.node = n.id;
  e.timer = t;
  e.generation = n.generation[k];
  schedule(std::move(e));
}

void Engine::trace(const char* kind, std::optional<NodeId> src, std::optional<NodeId> dst,
                   const std::string& detail) {
  auto& out = result_.trace;
  out += format_time(now_);
  out += '\t';
  out += kind;
  out += '\t';
  out += src ? to_string(*src) : "-";
  out += '\t';
  out += dst ? to_string(*dst) : "-";
  out += '\t';
  out += detail;
  out += '\n';
}

void Engine::log_detection(const Node& detector, NodeId suspect, const ChecksumPair& check, const char* action) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s\t%u\t%u\t0x%04x\t0x%04x\t%s\n", format_time(now_).c_str(),
                static_cast<unsigned>(detector.id.value), static_cast<unsigned>(suspect.value),
                static_cast<unsigned>(check.ch_i), static_cast<unsigned>(check.ch_n), action);
  result_.detection_log += buf;
  result_.ledger.detections.push_back({now_, detector.id, suspect, check.ch_i, check.ch_n, action});
  trace("Detect", detector.id, suspect, action);
}

// --- radio -------------------------------------------------------------------

bool Engine::lost_in_air(const Node& from, const Node& to, SimTime start, SimTime end) {
  if (cfg_.link.loss_probability > 0 && uniform01(loss_rng_) < cfg_.link.loss_probability) return true;
  if (cfg_.link.interference_loss <= 0) return false;
  bool lost = false;
  for (const Airframe& f : air_) {
    if (f.sender == from.id || f.sender == to.id || f.end <= start || f.start >= end) continue;
    if (distance(node(f.sender).position, to.position) > cfg_.link.interference_range) continue;
    if (uniform01(loss_rng_) < cfg_.link.interference_loss) lost = true;
  }
  return lost;
}

void Engine::broadcast(Node& from, std::shared_ptr<Packet> pkt) {
  const SimTime air = hop_latency(pkt->octets);
  ++result_.ledger.transmissions[static_cast<std::size_t>(pkt->kind)];
  spend(from, EnergyState::RadioTx, air);
  spend(from, EnergyState::CpuActive, kCpuPerFrame);
  trace("Transmit", from.id, std::nullopt, describe(*pkt) + " attempt=1 result=broadcast");
  std::shared_ptr<const Packet> shared = std::move(pkt);
  for (Node& n : nodes_) {
    if (n.id == from.id || connectivity(from.position, n.position, cfg_.link) != Link::Connected) continue;
    spend(n, EnergyState::RadioRx, air);
    if (lost_in_air(from, n, now_, now_ + air)) continue;
    Event e;
    e.time = now_ + air;
    e.kind = EventKind::RadioDeliver;
    e.node = n.id;
    e.peer = from.id;
    e.packet = shared;
    schedule(std::move(e));
  }
  if (cfg_.link.interference_loss > 0) air_.push_back({from.id, now_, now_ + air});
}

void Engine::unicast(Node& from, NodeId to, std::shared_ptr<Packet> pkt) {
  const SimTime air = hop_latency(pkt->octets);
  Node& dst = node(to);
  spend(from, EnergyState::CpuActive, kCpuPerFrame);
  std::shared_ptr<const Packet> shared = std::move(pkt);
  const int attempts = cfg_.unicast_retries + 1;
  for (int k = 0; k < attempts; ++k) {
    const SimTime start = now_ + air * k;
    ++result_.ledger.transmissions[static_cast<std::size_t>(shared->kind)];
    spend(from, EnergyState::RadioTx, air);
    if (cfg_.link.interference_loss > 0) air_.push_back({from.id, start, start + air});
    const std::string attempt = " attempt=" + std::to_string(k + 1);
    if (connectivity(from.position, dst.position, cfg_.link) != Link::Connected) {
      trace("Transmit", from.id, to, describe(*shared) + attempt + " result=no-link");
      continue;
    }
    spend(dst, EnergyState::RadioRx, air);
    if (lost_in_air(from, dst, start, start + air)) {
      trace("Transmit", from.id, to, describe(*shared) + attempt + " result=lost");
      continue;
    }
    trace("Transmit", from.id, to, describe(*shared) + attempt + " result=ok");
    Event e;
    e.time = start + air;
    e.kind = EventKind::RadioDeliver;
    e.node = to;
    e.peer = from.id;
    e.packet = shared;
    schedule(std::move(e));
    return;
  }
  Event e;
  e.time = now_ + air * attempts;
  e.kind = EventKind::DeliveryFailed;
  e.node = from.id;
  e.peer = to;
  e.packet = shared;
  schedule(std::move(e));
}

NeighborSet Engine::neighbor_addresses(const Node& n) const {
  NeighborSet out;
  for (const auto& [id, info] : n.rpl.neighbors) out.insert(node_address(id));
  return out;
}

// --- event handling ----------------------------------------------------------

void Engine::dispatch(const Event& e) {
  switch (e.kind) {
    case EventKind::RadioDeliver:
      trace("RadioDeliver", e.peer, e.node, describe(*e.packet));
      on_receive(node(e.node), e.peer, *e.packet);
      break;
    case EventKind::DeliveryFailed:
      trace("DeliveryFailed", e.node, e.peer, describe(*e.packet));
      on_delivery_failed(node(e.node), e.peer, *e.packet);
      break;
    case EventKind::TimerFire: {
      Node& n = node(e.node);
      if (n.generation[static_cast<std::size_t>(e.timer)] != e.generation) return;
      trace("TimerFire", n.id, std::nullopt, to_string(e.timer));
      on_timer(n, e.timer);
      break;
    }
    case EventKind::MobilityUpdate:
      trace("MobilityUpdate", std::nullopt, std::nullopt, "step");
      on_mobility();
      break;
    case EventKind::AppSend:
      on_app_send(e.node);
      break;
  }
}

void Engine::on_receive(Node& self, NodeId from, const Packet& pkt) {
  self.rpl.neighbors[from].last_heard = now_;
  spend(self, EnergyState::CpuActive, kCpuPerFrame);
  switch (pkt.kind) {
    case PacketKind::Dio: handle_dio(self, from, pkt); break;
    case PacketKind::Dis: handle_dis(self, from, pkt); break;
    case PacketKind::Data:
    case PacketKind::DaoAck: forward_downward(self, from, pkt); break;
    case PacketKind::Dao:
    case PacketKind::IcmpError:
    case PacketKind::FakeNeighbor: forward_upward(self, pkt); break;
  }
}

void Engine::on_delivery_failed(Node& self, NodeId to, const Packet& pkt) {
  if (pkt.kind == PacketKind::Data) trace("Drop", self.id, to, describe(pkt) + " reason=delivery-failed");
  lose_neighbor(self, to);
}

void Engine::on_timer(Node& self, Timer t) {
  switch (t) {
    case Timer::Trickle:
      if (!self.rpl.joined()) return;
      if (trickle_tick(self.rpl.trickle, now_)) send_dio(self, std::nullopt, self.rpl.rank);
      arm(self, Timer::Trickle, self.rpl.trickle.next_fire);
      break;
    case Timer::Dis:
      if (self.rpl.joined()) return;
      send_dis(self);
      arm(self, Timer::Dis, now_ + secs(cfg_.dis_interval_s));
      break;
    case Timer::Dao:
      if (!self.rpl.joined() || self.rpl.is_root) return;
      ++self.dao_sequence;
      self.awaiting_ack = true;
      self.dao_retries_left = 2;
      send_dao(self);
      arm(self, Timer::DaoAckTimeout, now_ + secs(cfg_.dao_ack_timeout_s));
      arm(self, Timer::DaoRefresh, now_ + lifetime_ / 2);
      break;
    case Timer::DaoAckTimeout:
      if (!self.awaiting_ack || !self.rpl.joined()) return;
      if (self.dao_retries_left == 0) {
        self.awaiting_ack = false;
        trace("DaoGiveUp", self.id, kRootId, "seq=" + std::to_string(self.dao_sequence));
        return;
      }
      --self.dao_retries_left;
      send_dao(self);
      arm(self, Timer::DaoAckTimeout, now_ + secs(cfg_.dao_ack_timeout_s));
      break;
    case Timer::DaoRefresh:
      on_timer(self, Timer::Dao);
      break;
    case Timer::Probe:
      if (!self.rpl.parent) return;
      send_dis(self, self.rpl.parent);
      arm(self, Timer::Probe, now_ + secs(cfg_.probe_interval_s));
      break;
  }
}

void Engine::on_mobility() {
  const MobilityBounds bounds{cfg_.grid, cfg_.speed_min, cfg_.speed_max};
  for (Node& n : nodes_) {
    if (n.mobility.mode != MobilityMode::RandomWaypoint) continue;
    n.position = random_waypoint_update(n.position, n.mobility, cfg_.mobility_step_s, bounds, n.mobility_rng);
  }
  Event e;
  e.time = now_ + secs(cfg_.mobility_step_s);
  e.kind = EventKind::MobilityUpdate;
  schedule(std::move(e));
  if (!air_.empty()) {
    std::erase_if(air_, [&](const Airframe& f) { return f.end <= now_; });
  }
}

void Engine::on_app_send(NodeId destination) {
  if (!first_round_done_) record_first_round();
  const auto id = static_cast<std::uint64_t>(result_.ledger.packets.size());
  result_.ledger.record_send(id, destination, now_);
  trace("AppSend", kRootId, destination, "id=" + std::to_string(id));
  send_downward(destination, PacketKind::Data, std::nullopt, static_cast<std::size_t>(cfg_.payload_octets), id);
}

// --- RPL control -------------------------------------------------------------

std::shared_ptr<Packet> Engine::control_packet(PacketKind kind, NodeId origin, ControlMessage msg,
                                               std::size_t octets) {
  auto pkt = std::make_shared<Packet>();
  pkt->kind = kind;
  pkt->origin = origin;
  pkt->final_destination = kRootId;
  pkt->created = now_;
  pkt->octets = octets;
  pkt->control = std::move(msg);
  return pkt;
}

void Engine::send_dio(Node& self, std::optional<NodeId> to, Rank rank) {
  auto pkt = control_packet(PacketKind::Dio, self.id, ControlMessage{self.id, DioBody{rank}}, kDioOctets);
  if (to) {
    pkt->final_destination = *to;
    unicast(self, *to, std::move(pkt));
  } else {
    broadcast(self, std::move(pkt));
  }
}

void Engine::send_dis(Node& self, std::optional<NodeId> to) {
  auto pkt = control_packet(PacketKind::Dis, self.id, ControlMessage{self.id, DisBody{to.has_value()}}, kDisOctets);
  if (to) {
    pkt->final_destination = *to;
    unicast(self, *to, std::move(pkt));
  } else {
    broadcast(self, std::move(pkt));
  }
}

void Engine::send_dao(Node& self) {
  DaoBody body{self.id, *self.rpl.parent, self.dao_sequence, {}};
  for (const auto& [id, when] : self.detection.blacklist.entries()) body.blacklist.push_back(id);
  const std::size_t octets = kDaoOctets + 16 * body.blacklist.size();
  send_upward(self, control_packet(PacketKind::Dao, self.id, ControlMessage{self.id, std::move(body)}, octets));
}

void Engine::send_upward(Node& self, std::shared_ptr<Packet> pkt) {
  if (self.rpl.is_root) {
    deliver_at_root(*pkt);
    return;
  }
  if (!self.rpl.parent) {
    trace("Drop", self.id, std::nullopt, describe(*pkt) + " reason=no-parent");
    return;
  }
  unicast(self, *self.rpl.parent, std::move(pkt));
}

void Engine::forward_upward(Node& self, const Packet& pkt) {
  if (self.rpl.is_root) {
    deliver_at_root(pkt);
    return;
  }
  if (pkt.hop_limit <= 1) {
    trace("Drop", self.id, std::nullopt, describe(pkt) + " reason=hop-limit");
    return;
  }
  auto copy = std::make_shared<Packet>(pkt);
  --copy->hop_limit;
  send_upward(self, std::move(copy));
}

void Engine::deliver_at_root(const Packet& pkt) {
  auto& ledger = result_.ledger;
  switch (pkt.kind) {
    case PacketKind::Dao: {
      const auto& body = std::get<DaoBody>(pkt.control->body);
      const auto res = on_dao(table_, *pkt.control, now_);
      trace("DaoReceived", body.child, body.parent,
            std::string("seq=") + std::to_string(body.sequence) +
                (res.status == DaoStatus::Accepted ? " accepted" : " rejected") +
                " blacklist=" + std::to_string(body.blacklist.size()));
      if (res.status == DaoStatus::Accepted) {
        send_downward(body.child, PacketKind::DaoAck, res.ack, kDaoAckPayload, 0);
      }
      break;
    }
    case PacketKind::IcmpError:
      ++ledger.icmp_received_at_root;
      trace("IcmpReceived", pkt.origin, kRootId, to_string(*pkt.icmp));
      break;
    case PacketKind::FakeNeighbor:
      ++ledger.fake_neighbor_received_at_root;
      trace("FakeNeighborReceived", pkt.origin, kRootId,
            to_string(std::get<FakeNeighborBody>(pkt.control->body).advertised));
      break;
    default:
      break;
  }
}

void Engine::handle_dio(Node& self, NodeId from, const Packet& pkt) {
  const auto out = on_dio(self.rpl, *pkt.control, self.detection.blacklist, now_);
  switch (out.change) {
    case DioChange::Joined: joined(self); break;
    case DioChange::SwitchedParent: parent_changed(self, out.reset_trickle); break;
    case DioChange::RankChanged:
      trace("Rank", self.id, self.rpl.parent, "rank=" + std::to_string(self.rpl.rank.value));
      reset_trickle(self);
      break;
    case DioChange::Detached: detached(self); break;
    case DioChange::Ignored:
    case DioChange::NoChange: break;
  }
  (void)from;
}

void Engine::handle_dis(Node& self, NodeId from, const Packet& pkt) {
  switch (on_dis(self.rpl, *pkt.control, now_)) {
    case DisResponse::Ignore: break;
    case DisResponse::UnicastDio: send_dio(self, from, self.rpl.rank); break;
    case DisResponse::TrickleReset: arm(self, Timer::Trickle, self.rpl.trickle.next_fire); break;
  }
}

void Engine::reset_trickle(Node& self) {
  const SimTime before = self.rpl.trickle.next_fire;
  trickle_reset(self.rpl.trickle, now_);
  if (self.rpl.trickle.next_fire != before) arm(self, Timer::Trickle, self.rpl.trickle.next_fire);
}

void Engine::joined(Node& self) {
  trace("Join", self.id, self.rpl.parent, "rank=" + std::to_string(self.rpl.rank.value));
  disarm(self, Timer::Dis);
  self.rpl.trickle = trickle_start(secs(cfg_.trickle_imin_s), secs(cfg_.trickle_imax_s), now_);
  arm(self, Timer::Trickle, self.rpl.trickle.next_fire);
  arm(self, Timer::Dao, now_ + secs(cfg_.dao_delay_s));
  if (cfg_.probe_interval_s > 0) arm(self, Timer::Probe, now_ + secs(cfg_.probe_interval_s));
}

void Engine::parent_changed(Node& self, bool rank_changed) {
  trace("Parent", self.id, self.rpl.parent, "rank=" + std::to_string(self.rpl.rank.value));
  if (rank_changed) reset_trickle(self);
  arm(self, Timer::Dao, now_ + secs(cfg_.dao_delay_s));
}

void Engine::detached(Node& self) {
  trace("Detach", self.id, std::nullopt, "rank=infinite");
  disarm(self, Timer::Trickle);
  disarm(self, Timer::Dao);
  disarm(self, Timer::DaoAckTimeout);
  disarm(self, Timer::DaoRefresh);
  disarm(self, Timer::Probe);
  self.awaiting_ack = false;
  send_dio(self, std::nullopt, kInfiniteRank);
  send_dis(self);
  arm(self, Timer::Dis, now_ + secs(cfg_.dis_interval_s));
}

void Engine::lose_neighbor(Node& self, NodeId neighbor) {
  self.rpl.neighbors.erase(neighbor);
  if (self.rpl.is_root || self.rpl.parent != neighbor) return;
  const Rank old = self.rpl.rank;
  self.rpl.parent.reset();
  if (auto alt = select_parent(self.rpl, self.detection.blacklist, old)) {
    const bool changed = adopt_parent(self.rpl, *alt, *self.rpl.neighbors.at(*alt).rank);
    parent_changed(self, changed);
    return;
  }
  detach(self.rpl);
  detached(self);
}

// --- downward forwarding and detection ----------------------------------------

bool Engine::send_downward(NodeId destination, PacketKind kind, std::optional<ControlMessage> control,
                           std::size_t payload, std::uint64_t data_id) {
  DownwardPacket dp;
  try {
    dp = build_downward_packet(table_, destination, payload, now_, lifetime_);
  } catch (const RouteError& e) {
    trace("RouteError", kRootId, destination, std::string(to_string(kind)) + " " + e.what());
    return false;
  }
  Packet pkt;
  pkt.id = data_id;
  pkt.kind = kind;
  pkt.origin = kRootId;
  pkt.final_destination = destination;
  pkt.created = now_;
  pkt.octets = dp.total_octets;
  pkt.srh = std::move(dp.srh);
  pkt.ip_destination = node_address(kRootId);
  pkt.control = std::move(control);
  // The root processes its own header first, exactly like a relay.
  forward_downward(node(kRootId), kRootId, pkt);
  return true;
}

void Engine::forward_downward(Node& self, NodeId from, const Packet& pkt) {
  const SourceRoutingHeader& srh = *pkt.srh;
  const ChecksumPair check = verify_srh(srh, pkt.ip_destination);
  const NeighborSet neighbors = neighbor_addresses(self);

  ForwardAction action;
  bool tampered_here = false;
  if (self.attacker.enabled() && pkt.kind == PacketKind::Data) {
    const auto before = self.attacker.corrupted();
    action = self.attacker.process(srh, pkt.ip_destination, pkt.hop_limit, neighbors);
    tampered_here = self.attacker.corrupted() != before;
  } else {
    action = forward_step(srh, pkt.ip_destination, pkt.hop_limit, neighbors);
  }

  if (std::holds_alternative<Deliver>(action)) {
    if (pkt.kind == PacketKind::Data) {
      result_.ledger.record_delivery(pkt.id, now_);
      trace("Delivered", kRootId, self.id,
            "id=" + std::to_string(pkt.id) + " delay=" + format_time(now_ - pkt.created));
    } else {
      handle_dao_ack(self, pkt);
    }
    return;
  }

  if (const auto* fwd = std::get_if<Forward>(&action)) {
    const NodeId next = *node_of(fwd->next_destination);
    auto copy = std::make_shared<Packet>(pkt);
    copy->octets = pkt.octets - srh.wire_size() + fwd->updated_header.wire_size();
    copy->srh = fwd->updated_header;
    copy->ip_destination = fwd->next_destination;
    copy->hop_limit = fwd->hop_limit;
    if (tampered_here) {
      ++result_.ledger.corrupted_packets;
      result_.ledger.packets.at(pkt.id).tampered = true;
      copy->tampered = true;
      trace("Tamper", self.id, next, "id=" + std::to_string(pkt.id));
    }
    unicast(self, next, std::move(copy));
    return;
  }

  handle_forward_failure(self, from, pkt, check, std::get<IcmpError>(action));
}

void Engine::handle_forward_failure(Node& self, NodeId from, const Packet& pkt, const ChecksumPair& check,
                                    const IcmpError& err) {
  trace("ForwardError", self.id, from, std::string(to_string(err.kind)) + " " + describe(pkt));

  auto icmp = std::make_shared<Packet>();
  icmp->kind = PacketKind::IcmpError;
  icmp->origin = self.id;
  icmp->final_destination = pkt.origin;
  icmp->created = now_;
  icmp->octets = std::min(kIcmpErrorBaseOctets + pkt.octets, kIcmpMaxOctets);
  icmp->icmp = err.kind;
  ++result_.ledger.icmp_generated;
  send_upward(self, std::move(icmp));

  if (err.kind != IcmpKind::NextHopUnreachable || check.matches()) return;

  // The node was led to a neighbour that does not exist and reports it.
  std::optional<FailureResponse> response;
  if (cfg_.detection_enabled && !self.rpl.is_root) {
    response = on_forward_failure(self.detection, from, check, err.target, now_);
  }
  ControlMessage fake = response ? response->fake_neighbor : make_fake_neighbor(self.id, err.target);
  ++result_.ledger.fake_neighbor_generated;
  send_upward(self, control_packet(PacketKind::FakeNeighbor, self.id, std::move(fake), kFakeNeighborOctets));

  if (!response) return;
  if (response->marker_set) log_detection(self, from, check, "marker");
  if (response->blacklisted) {
    log_detection(self, *response->blacklisted, check, "blacklist");
    if (!result_.first_blacklist) result_.first_blacklist = now_;
    react_to_blacklist(self, *response->blacklisted, check);
  }
}

void Engine::react_to_blacklist(Node& self, NodeId suspect, const ChecksumPair& check) {
  const MitigationOutcome out = mitigate(self.rpl, self.detection.blacklist);
  switch (out.status) {
    case MitigationStatus::NotNeeded:
      if (self.rpl.joined()) arm(self, Timer::Dao, now_ + secs(cfg_.dao_delay_s));
      break;
    case MitigationStatus::SwitchedParent:
      log_detection(self, suspect, check, to_string(out.status));
      parent_changed(self, out.rank_changed);
      break;
    case MitigationStatus::NoAlternateParent:
      log_detection(self, suspect, check, to_string(out.status));
      arm(self, Timer::Dao, now_ + secs(cfg_.dao_delay_s));
      break;
  }
}

void Engine::handle_dao_ack(Node& self, const Packet& pkt) {
  const auto& body = std::get<DaoAckBody>(pkt.control->body);
  trace("DaoAck", kRootId, self.id, "seq=" + std::to_string(body.sequence));
  if (!self.awaiting_ack || body.sequence != self.dao_sequence) return;
  self.awaiting_ack = false;
  disarm(self, Timer::DaoAckTimeout);
}

// --- attacker placement --------------------------------------------------------

void Engine::enable_attacker(NodeId id) {
  Node& n = node(id);
  if (n.attacker.enabled()) return;
  auto stream = make_stream(cfg_.seed ^ cfg_.attacker.random_address_seed, kAttackerStream + id.value);
  n.attacker = Attacker(stream());
  result_.ledger.attackers.insert(id);
  trace("Attacker", id, std::nullopt, "enabled");
}

void Engine::record_first_round() {
  first_round_done_ = true;
  const std::size_t total = nodes_.size();
  for (std::size_t i = 1; i < total; ++i) {
    NodeId cur{static_cast<std::uint16_t>(i)};
    for (int hops = 1; hops <= static_cast<int>(total); ++hops) {
      auto it = table_.parent_of.find(cur);
      if (it == table_.parent_of.end()) break;
      cur = it->second;
      if (cur == kRootId) {
        result_.hops_at_first_round[i] = hops;
        break;
      }
    }
  }
}

}  // namespace

std::optional<NodeId> select_hop_attacker(const std::vector<Position>& positions, const LinkModel& link, int k) {
  const std::size_t total = positions.size();
  auto bfs = [&](std::size_t from) {
    std::vector<int> dist(total, -1);
    std::vector<std::size_t> frontier{from};
    dist[from] = 0;
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      const std::size_t u = frontier[head];
      for (std::size_t v = 0; v < total; ++v) {
        if (dist[v] < 0 && connectivity(positions[u], positions[v], link) == Link::Connected) {
          dist[v] = dist[u] + 1;
          frontier.push_back(v);
        }
      }
    }
    return dist;
  };
  const auto from_root = bfs(0);
  std::optional<NodeId> best;
  std::tuple<int, int> best_score{-1, -1};
  for (std::size_t c = 1; c < total; ++c) {
    if (from_root[c] != k) continue;
    const auto from_c = bfs(c);
    int deep = 0, through = 0;
    for (std::size_t d = 1; d < total; ++d) {
      if (d == c || from_c[d] < 0 || from_root[d] != k + from_c[d]) continue;
      ++through;
      if (from_root[d] >= k + 2) ++deep;
    }
    const std::tuple<int, int> score{deep, through};
    if (score > best_score) {
      best_score = score;
      best = NodeId{static_cast<std::uint16_t>(c)};
    }
  }
  return best;
}

namespace {

// --- run ---------------------------------------------------------------------

RunResult Engine::run() {
  auto jitter = make_stream(cfg_.seed, kJitterStream);
  Node& root = nodes_[0];
  root.rpl.trickle = trickle_start(secs(cfg_.trickle_imin_s), secs(cfg_.trickle_imax_s), SimTime::zero());
  arm(root, Timer::Trickle, root.rpl.trickle.next_fire);
  for (std::size_t i = 1; i < nodes_.size(); ++i) arm(nodes_[i], Timer::Dis, seconds(uniform01(jitter)));

  if (cfg_.mobility == MobilityMode::RandomWaypoint) {
    Event e;
    e.time = secs(cfg_.mobility_step_s);
    e.kind = EventKind::MobilityUpdate;
    schedule(std::move(e));
  }
  const SimTime interval = secs(cfg_.data_interval_s);
  for (SimTime t = interval; t < end_; t += interval) {
    for (std::size_t d = 1; d < nodes_.size(); ++d) {
      Event e;
      e.time = t;
      e.kind = EventKind::AppSend;
      e.node = NodeId{static_cast<std::uint16_t>(d)};
      schedule(std::move(e));
    }
  }

  while (!queue_.empty() && queue_.top().time < end_) {
    const Event e = queue_.top();
    queue_.pop();
    now_ = e.time;
    ++result_.events;
    dispatch(e);
  }
  now_ = end_;

  auto& ledger = result_.ledger;
  ledger.duration = end_;
  for (Node& n : nodes_) {
    EnergyAccount acc;
    acc.current_ma = cfg_.energy.current_ma;
    acc.tick_rate = cfg_.energy.tick_rate;
    n.busy[static_cast<std::size_t>(EnergyState::CpuIdle)] =
        std::max(SimTime::zero(), end_ - n.busy[static_cast<std::size_t>(EnergyState::CpuActive)]);
    for (std::size_t s = 0; s < kEnergyStateCount; ++s) {
      acc.ticks[s] = static_cast<std::uint64_t>(std::llround(to_seconds(n.busy[s]) * acc.tick_rate));
    }
    ledger.energy.push_back(acc);
    char buf[160];
    std::snprintf(buf, sizeof buf, "cpu_active=%llu cpu_idle=%llu tx=%llu rx=%llu avg_power_mw=%.6f",
                  static_cast<unsigned long long>(acc.ticks[0]), static_cast<unsigned long long>(acc.ticks[1]),
                  static_cast<unsigned long long>(acc.ticks[2]), static_cast<unsigned long long>(acc.ticks[3]),
                  avg_power(acc, cfg_.energy.voltage) / to_seconds(end_));
    trace("NodeEnergy", n.id, std::nullopt, buf);

    result_.final_parent.push_back(n.rpl.parent);
    for (const auto& [id, when] : n.detection.blacklist.entries()) result_.blacklisted.insert(id);
  }
  return std::move(result_);
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config) {
  Engine engine(config);
  return engine.run();
}

}  // namespace hatchet
