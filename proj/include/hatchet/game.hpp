#pragma once

// Two-player forwarding game between a node (player i) and its parent (player j).

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hatchet/types.hpp"

namespace hatchet {

enum class Strategy : std::uint8_t { Fp = 0, Dfp = 1 };  // forward / do not forward

enum class Player : std::uint8_t { I, J };

const char* to_string(Strategy s);

struct Payoff {
  int u_i = 0;
  int u_j = 0;

  friend bool operator==(const Payoff&, const Payoff&) = default;
};

/// Payoff written by a node that could not forward because its parent
/// tampered with the route.
inline constexpr Payoff kMarkerPayoff{0, -1};

struct Profile {
  Strategy i;
  Strategy j;

  friend auto operator<=>(const Profile&, const Profile&) = default;
};

class PayoffMatrix {
 public:
  struct Cell {
    Payoff payoff;
    bool marked = false;
  };

  PayoffMatrix() = default;
  PayoffMatrix(Payoff ff, Payoff fd, Payoff df, Payoff dd);

  /// (Fp,Fp)=(1,1), (Fp,Dfp)=(-1,2), (Dfp,Fp)=(2,-1), (Dfp,Dfp)=(0,0): Dfp strictly dominant for both.
  static PayoffMatrix canonical();

  const Cell& at(Strategy i, Strategy j) const { return cells_[index(i, j)]; }
  Cell& at(Strategy i, Strategy j) { return cells_[index(i, j)]; }

  /// Payoff of `player` when i plays `si` and j plays `sj`.
  int utility(Player player, Strategy si, Strategy sj) const;

  /// Writes the marker payoff into (Dfp, Fp). Idempotent.
  void mark_forward_failure();
  bool has_marker() const;

  friend bool operator==(const PayoffMatrix& a, const PayoffMatrix& b) {
    for (std::size_t k = 0; k < 4; ++k) {
      if (a.cells_[k].payoff != b.cells_[k].payoff || a.cells_[k].marked != b.cells_[k].marked) return false;
    }
    return true;
  }

 private:
  static constexpr std::size_t index(Strategy i, Strategy j) {
    return static_cast<std::size_t>(i) * 2 + static_cast<std::size_t>(j);
  }
  std::array<Cell, 4> cells_{};
};

enum class Dominance { FpDominated, DfpDominated, NoDominance };

const char* to_string(Dominance d);

/// Weak dominance: s' is dominated by s iff u(s, t) >= u(s', t) for every
/// opponent strategy t, strictly for at least one.
Dominance dominated(const PayoffMatrix& matrix, Player player);

/// All pure-strategy profiles in which each player's strategy is a best response.
std::vector<Profile> psne(const PayoffMatrix& matrix);

struct DominanceResult {
  Dominance player_i = Dominance::NoDominance;
  Dominance player_j = Dominance::NoDominance;
  std::vector<Profile> psne_profiles;
};

DominanceResult analyze(const PayoffMatrix& matrix);

/// Nodes detected as attackers, with the time they were added.
class Blacklist {
 public:
  /// Returns false when `node` was already present.
  bool add(NodeId node, SimTime when);
  bool contains(NodeId node) const { return entries_.contains(node); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<NodeId, SimTime>& entries() const { return entries_; }

 private:
  std::map<NodeId, SimTime> entries_;
};

/// Scans the matrix for the marker payoff; when present, `parent` is the attacker.
std::optional<NodeId> extract_blacklist(const PayoffMatrix& matrix, NodeId parent);

}  // namespace hatchet
