#pragma once

// Independent reference computations shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <map>
#include <tuple>
#include <vector>

#include "hatchet/game.hpp"

namespace oracle {

// Every valid RFC 6554 layout, built forward from n addresses:
// n-1 addresses of 16-CmprI octets, one of 16-CmprE, then Pad, all in 8-octet units.
// Key (hdr_ext_len, pad, cmpr_i, cmpr_e) -> n. `unique` turns false if a layout repeats.
inline std::map<std::tuple<int, int, int, int>, int> srh_layouts(bool& unique) {
  std::map<std::tuple<int, int, int, int>, int> layouts;
  unique = true;
  for (int ci = 0; ci < 16; ++ci) {
    for (int ce = 0; ce < 16; ++ce) {
      for (int pad = 0; pad < 8; ++pad) {
        for (int n = 1;; ++n) {
          int octets = 0;
          for (int k = 1; k <= n; ++k) octets += (k == n) ? 16 - ce : 16 - ci;
          octets += pad;
          if (octets > 255 * 8) break;
          if (octets % 8 == 0) unique &= layouts.emplace(std::make_tuple(octets / 8, pad, ci, ce), n).second;
        }
      }
    }
  }
  return layouts;
}

// Payoffs as plain tables indexed [si][sj], 0 = Fp, 1 = Dfp.
struct Table {
  int ui[2][2];
  int uj[2][2];
};

inline constexpr hatchet::Strategy kStrategies[2] = {hatchet::Strategy::Fp, hatchet::Strategy::Dfp};

inline Table table_of(const hatchet::PayoffMatrix& m) {
  Table t{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      t.ui[a][b] = m.at(kStrategies[a], kStrategies[b]).payoff.u_i;
      t.uj[a][b] = m.at(kStrategies[a], kStrategies[b]).payoff.u_j;
    }
  }
  return t;
}

// Pure equilibria by checking every unilateral deviation.
inline std::vector<hatchet::Profile> psne(const Table& t) {
  std::vector<hatchet::Profile> out;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      int best_i = t.ui[0][b], best_j = t.uj[a][0];
      for (int x = 0; x < 2; ++x) {
        best_i = std::max(best_i, t.ui[x][b]);
        best_j = std::max(best_j, t.uj[a][x]);
      }
      if (t.ui[a][b] == best_i && t.uj[a][b] == best_j) out.push_back({kStrategies[a], kStrategies[b]});
    }
  }
  return out;
}

// Which of the player's strategies is weakly dominated, by comparing payoff rows.
inline hatchet::Dominance dominated(const Table& t, hatchet::Player p) {
  int fp[2], dfp[2];
  for (int opp = 0; opp < 2; ++opp) {
    fp[opp] = p == hatchet::Player::I ? t.ui[0][opp] : t.uj[opp][0];
    dfp[opp] = p == hatchet::Player::I ? t.ui[1][opp] : t.uj[opp][1];
  }
  if (fp[0] == dfp[0] && fp[1] == dfp[1]) return hatchet::Dominance::NoDominance;
  if (dfp[0] >= fp[0] && dfp[1] >= fp[1]) return hatchet::Dominance::FpDominated;
  if (fp[0] >= dfp[0] && fp[1] >= dfp[1]) return hatchet::Dominance::DfpDominated;
  return hatchet::Dominance::NoDominance;
}

}  // namespace oracle
