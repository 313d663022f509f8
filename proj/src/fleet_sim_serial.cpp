// Serial reference driver.

#include <algorithm>

#include "fleet_kernel.hpp"

namespace tclflex {

SimRun simulate_serial(std::span<const CyclePhase> fleet, const ApplianceParams& params,
                       const SimOptions& options) {
  detail::validate_inputs(fleet, options);
  std::vector<detail::PowerEvent> events;
  events.reserve(fleet.size() * 4);
  SimStats stats;
  for (std::size_t i = 0; i < fleet.size(); ++i)
    detail::run_appliance(params, fleet[i], i, options, events, stats);
  std::stable_sort(events.begin(), events.end(), detail::EventOrder{});
  return {detail::aggregate(events, params, options.horizon), stats};
}

}  // namespace tclflex
