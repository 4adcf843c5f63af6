#include "hatchet/radio.hpp"

#include <cmath>

namespace hatchet {

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

const char* to_string(Link l) {
  switch (l) {
    case Link::Connected: return "Connected";
    case Link::InterferenceOnly: return "InterferenceOnly";
    case Link::OutOfRange: return "OutOfRange";
  }
  return "?";
}

Link connectivity(const Position& a, const Position& b, const LinkModel& model) {
  const double d = distance(a, b);
  if (d <= model.tx_range) return Link::Connected;
  if (d <= model.interference_range) return Link::InterferenceOnly;
  return Link::OutOfRange;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(purpose), static_cast<std::uint32_t>(purpose >> 32)};
  return std::mt19937_64(seq);
}

void next_waypoint(MobilityState& state, const MobilityBounds& bounds, std::mt19937_64& rng) {
  state.waypoint = {uniform(rng, 0, bounds.grid), uniform(rng, 0, bounds.grid)};
  state.speed = uniform(rng, bounds.speed_min, bounds.speed_max);
}

Position random_waypoint_update(const Position& pos, MobilityState& state, double dt,
                                const MobilityBounds& bounds, std::mt19937_64& rng) {
  if (state.mode != MobilityMode::RandomWaypoint) return pos;
  const double remaining = distance(pos, state.waypoint);
  const double step = state.speed * dt;
  if (remaining <= step) {
    const Position arrived = state.waypoint;
    next_waypoint(state, bounds, rng);
    return arrived;
  }
  const double f = step / remaining;
  return {pos.x + (state.waypoint.x - pos.x) * f, pos.y + (state.waypoint.y - pos.y) * f};
}

}  // namespace hatchet
