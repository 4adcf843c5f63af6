#include "hatchet/game.hpp"

namespace hatchet {

namespace {
constexpr std::array<Strategy, 2> kStrategies{Strategy::Fp, Strategy::Dfp};

Strategy other(Strategy s) { return s == Strategy::Fp ? Strategy::Dfp : Strategy::Fp; }
}  // namespace

const char* to_string(Strategy s) { return s == Strategy::Fp ? "Fp" : "Dfp"; }

const char* to_string(Dominance d) {
  switch (d) {
    case Dominance::FpDominated: return "FpDominated";
    case Dominance::DfpDominated: return "DfpDominated";
    case Dominance::NoDominance: return "NoDominance";
  }
  return "?";
}

PayoffMatrix::PayoffMatrix(Payoff ff, Payoff fd, Payoff df, Payoff dd) {
  at(Strategy::Fp, Strategy::Fp).payoff = ff;
  at(Strategy::Fp, Strategy::Dfp).payoff = fd;
  at(Strategy::Dfp, Strategy::Fp).payoff = df;
  at(Strategy::Dfp, Strategy::Dfp).payoff = dd;
}

PayoffMatrix PayoffMatrix::canonical() { return {{1, 1}, {-1, 2}, {2, -1}, {0, 0}}; }

int PayoffMatrix::utility(Player player, Strategy si, Strategy sj) const {
  const auto& p = at(si, sj).payoff;
  return player == Player::I ? p.u_i : p.u_j;
}

void PayoffMatrix::mark_forward_failure() {
  auto& cell = at(Strategy::Dfp, Strategy::Fp);
  cell.payoff = kMarkerPayoff;
  cell.marked = true;
}

bool PayoffMatrix::has_marker() const {
  for (const auto& c : cells_) {
    if (c.marked && c.payoff == kMarkerPayoff) return true;
  }
  return false;
}

Dominance dominated(const PayoffMatrix& m, Player player) {
  // u(own, opp) with own/opp mapped onto (i, j) according to the player.
  auto u = [&](Strategy own, Strategy opp) {
    return player == Player::I ? m.utility(Player::I, own, opp) : m.utility(Player::J, opp, own);
  };
  auto dominates = [&](Strategy s, Strategy s_prime) {
    bool strict = false;
    for (Strategy t : kStrategies) {
      if (u(s, t) < u(s_prime, t)) return false;
      if (u(s, t) > u(s_prime, t)) strict = true;
    }
    return strict;
  };
  if (dominates(Strategy::Dfp, Strategy::Fp)) return Dominance::FpDominated;
  if (dominates(Strategy::Fp, Strategy::Dfp)) return Dominance::DfpDominated;
  return Dominance::NoDominance;
}

std::vector<Profile> psne(const PayoffMatrix& m) {
  std::vector<Profile> out;
  for (Strategy si : kStrategies) {
    for (Strategy sj : kStrategies) {
      const bool i_best = m.utility(Player::I, si, sj) >= m.utility(Player::I, other(si), sj);
      const bool j_best = m.utility(Player::J, si, sj) >= m.utility(Player::J, si, other(sj));
      if (i_best && j_best) out.push_back({si, sj});
    }
  }
  return out;
}

DominanceResult analyze(const PayoffMatrix& m) {
  return {dominated(m, Player::I), dominated(m, Player::J), psne(m)};
}

bool Blacklist::add(NodeId node, SimTime when) { return entries_.emplace(node, when).second; }

std::optional<NodeId> extract_blacklist(const PayoffMatrix& matrix, NodeId parent) {
  if (matrix.has_marker()) return parent;
  return std::nullopt;
}

}  // namespace hatchet
