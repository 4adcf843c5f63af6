#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace hatchet {

/// Simulation clock. Integer nanoseconds keep event ordering exact.
using SimTime = std::chrono::nanoseconds;

constexpr SimTime seconds(double s) {
  return SimTime{static_cast<std::int64_t>(s * 1e9 + (s >= 0 ? 0.5 : -0.5))};
}

constexpr double to_seconds(SimTime t) {
  return static_cast<double>(t.count()) / 1e9;
}

/// Index of a node in a scenario. The gateway (DODAG root) is always 0.
struct NodeId {
  std::uint16_t value{};

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

inline constexpr NodeId kRootId{0};

inline std::string to_string(NodeId id) { return std::to_string(id.value); }

}  // namespace hatchet

template <>
struct std::hash<hatchet::NodeId> {
  std::size_t operator()(hatchet::NodeId id) const noexcept {
    return std::hash<std::uint16_t>{}(id.value);
  }
};
