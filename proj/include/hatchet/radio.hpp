#pragma once

// Unit disk radio model, node placement and random waypoint mobility.

#include <cstdint>
#include <random>
#include <vector>

#include "hatchet/types.hpp"

namespace hatchet {

struct Position {
  double x = 0;
  double y = 0;

  friend bool operator==(const Position&, const Position&) = default;
};

double distance(const Position& a, const Position& b);

struct LinkModel {
  double tx_range = 50.0;
  double interference_range = 100.0;
  double loss_probability = 0.0;
  /// Chance that a frame is lost per other sender transmitting within
  /// interference range of the receiver at the same time. 0 disables.
  double interference_loss = 0.0;

  friend bool operator==(const LinkModel&, const LinkModel&) = default;
};

enum class Link { Connected, InterferenceOnly, OutOfRange };

const char* to_string(Link l);

Link connectivity(const Position& a, const Position& b, const LinkModel& model);

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64& rng);
double uniform(std::mt19937_64& rng, double lo, double hi);

/// Independent deterministic stream for (seed, purpose).
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t purpose);

enum class MobilityMode { Static, RandomWaypoint };

struct MobilityState {
  MobilityMode mode = MobilityMode::Static;
  Position waypoint;
  double speed = 0;  // m/s
};

struct MobilityBounds {
  double grid = 200.0;
  double speed_min = 1.0;
  double speed_max = 2.0;
};

/// Draws a fresh waypoint and speed.
void next_waypoint(MobilityState& state, const MobilityBounds& bounds, std::mt19937_64& rng);

/// Moves toward the waypoint for `dt` seconds; on arrival within the step the
/// node stops on the waypoint and draws the next one (zero pause time).
Position random_waypoint_update(const Position& pos, MobilityState& state, double dt,
                                const MobilityBounds& bounds, std::mt19937_64& rng);

}  // namespace hatchet
