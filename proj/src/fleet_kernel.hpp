// Internal: per-appliance event kernel and event-to-trace aggregation shared
// by the serial and OpenMP simulation drivers.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tclflex/fleet_sim.hpp"

namespace tclflex::detail {

/// Change of the fleet's ON count and held-at-limit count at one instant.
struct PowerEvent {
  double time;
  std::int32_t on_delta;
  std::int32_t held_delta;
};

struct EventOrder {
  bool operator()(const PowerEvent& a, const PowerEvent& b) const { return a.time < b.time; }
};

/// Appends the events of appliance `index` (in time order) and updates stats.
void run_appliance(const ApplianceParams& params, CyclePhase phase, std::size_t index,
                   const SimOptions& options, std::vector<PowerEvent>& events, SimStats& stats);

/// Events must be sorted by time. Events within kTimeEpsilon of a cluster's
/// first event are applied together at that first time; clusters starting
/// within kTimeEpsilon of the horizon are dropped.
PowerTrace aggregate(std::span<const PowerEvent> events, const ApplianceParams& params,
                     double horizon);

void validate_inputs(std::span<const CyclePhase> fleet, const SimOptions& options);

void accumulate(SimStats& into, const SimStats& from);

}  // namespace tclflex::detail
