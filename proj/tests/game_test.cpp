#include <gtest/gtest.h>

#include <random>

#include "hatchet/game.hpp"
#include "oracles.hpp"

using namespace hatchet;

TEST(Game, CanonicalMatrix) {
  const auto m = PayoffMatrix::canonical();
  EXPECT_EQ(m.at(Strategy::Fp, Strategy::Fp).payoff, (Payoff{1, 1}));
  EXPECT_EQ(m.at(Strategy::Fp, Strategy::Dfp).payoff, (Payoff{-1, 2}));
  EXPECT_EQ(m.at(Strategy::Dfp, Strategy::Fp).payoff, (Payoff{2, -1}));
  EXPECT_EQ(m.at(Strategy::Dfp, Strategy::Dfp).payoff, (Payoff{0, 0}));
  EXPECT_EQ(dominated(m, Player::I), Dominance::FpDominated);
  EXPECT_EQ(dominated(m, Player::J), Dominance::FpDominated);
  const auto eq = psne(m);
  ASSERT_EQ(eq.size(), 1u);
  EXPECT_EQ(eq[0], (Profile{Strategy::Dfp, Strategy::Dfp}));
}

TEST(Game, AgreesWithEnumerationOnRandomMatrices) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> v(-3, 3);
  int disagreements = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const PayoffMatrix m({v(rng), v(rng)}, {v(rng), v(rng)}, {v(rng), v(rng)}, {v(rng), v(rng)});
    const auto t = oracle::table_of(m);
    if (psne(m) != oracle::psne(t)) ++disagreements;
    if (dominated(m, Player::I) != oracle::dominated(t, Player::I)) ++disagreements;
    if (dominated(m, Player::J) != oracle::dominated(t, Player::J)) ++disagreements;
  }
  EXPECT_EQ(disagreements, 0);
}

TEST(Game, NoPureEquilibrium) {
  // Matching pennies.
  const PayoffMatrix m({1, -1}, {-1, 1}, {-1, 1}, {1, -1});
  EXPECT_TRUE(psne(m).empty());
  EXPECT_EQ(dominated(m, Player::I), Dominance::NoDominance);
}

TEST(Game, MarkerFlagsTheParent) {
  auto m = PayoffMatrix::canonical();
  EXPECT_FALSE(m.has_marker());
  EXPECT_EQ(extract_blacklist(m, NodeId{4}), std::nullopt);
  m.mark_forward_failure();
  EXPECT_TRUE(m.has_marker());
  EXPECT_EQ(m.at(Strategy::Dfp, Strategy::Fp).payoff, kMarkerPayoff);
  EXPECT_EQ(extract_blacklist(m, NodeId{4}), NodeId{4});
}

TEST(Game, UnflaggedCellEqualToMarkerIsNotAMarker) {
  const PayoffMatrix m({0, -1}, {0, -1}, {0, -1}, {0, -1});
  EXPECT_FALSE(m.has_marker());
}

TEST(Blacklist, AddIsIdempotent) {
  Blacklist b;
  EXPECT_TRUE(b.empty());
  EXPECT_TRUE(b.add(NodeId{3}, seconds(1)));
  EXPECT_FALSE(b.add(NodeId{3}, seconds(2)));
  EXPECT_TRUE(b.contains(NodeId{3}));
  EXPECT_EQ(b.entries().at(NodeId{3}), seconds(1));
  EXPECT_EQ(b.size(), 1u);
}
