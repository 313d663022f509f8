// OpenMP driver: appliances are split into contiguous index blocks; each block
// generates and sorts its events independently, then blocks are merged
// pairwise in index order. std::merge keeps equal-time events of the lower
// block first, so the final event sequence equals the serial stable sort.

#include <algorithm>

#include <omp.h>

#include "fleet_kernel.hpp"

namespace tclflex {

SimRun simulate(std::span<const CyclePhase> fleet, const ApplianceParams& params,
                const SimOptions& options) {
  detail::validate_inputs(fleet, options);
  const std::size_t n = fleet.size();
  const std::size_t blocks =
      std::clamp<std::size_t>(static_cast<std::size_t>(omp_get_max_threads()) * 4, 1, n);

  std::vector<std::vector<detail::PowerEvent>> parts(blocks);
  std::vector<SimStats> part_stats(blocks);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = n * b / blocks;
    const std::size_t hi = n * (b + 1) / blocks;
    auto& events = parts[b];
    events.reserve((hi - lo) * 4);
    for (std::size_t i = lo; i < hi; ++i)
      detail::run_appliance(params, fleet[i], i, options, events, part_stats[b]);
    std::stable_sort(events.begin(), events.end(), detail::EventOrder{});
  }

  for (std::size_t width = 1; width < blocks; width *= 2) {
    const std::size_t pairs = (blocks + 2 * width - 1) / (2 * width);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t k = 0; k < pairs; ++k) {
      const std::size_t left = 2 * width * k;
      const std::size_t right = left + width;
      if (right >= blocks) continue;
      std::vector<detail::PowerEvent> merged;
      merged.reserve(parts[left].size() + parts[right].size());
      std::merge(parts[left].begin(), parts[left].end(), parts[right].begin(),
                 parts[right].end(), std::back_inserter(merged), detail::EventOrder{});
      parts[left] = std::move(merged);
      parts[right] = {};
    }
  }

  SimStats stats;
  for (const auto& s : part_stats) detail::accumulate(stats, s);
  return {detail::aggregate(parts.front(), params, options.horizon), stats};
}

}  // namespace tclflex
