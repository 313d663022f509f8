#include "tclflex/fleet_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace tclflex {

std::string_view to_string(Sampling sampling) {
  return sampling == Sampling::stratified ? "stratified" : "uniform_random";
}

Sampling parse_sampling(std::string_view text) {
  if (text == "stratified") return Sampling::stratified;
  if (text == "uniform_random") return Sampling::uniform_random;
  throw std::invalid_argument("unknown sampling '" + std::string(text) + "'");
}

std::vector<CyclePhase> build_fleet(const FleetSpec& spec) {
  if (spec.n == 0) throw std::invalid_argument("fleet size must be at least 1");
  const double cycle = spec.params.cycle_length();
  const double n = static_cast<double>(spec.n);
  std::vector<CyclePhase> fleet;
  fleet.reserve(spec.n);
  if (spec.sampling == Sampling::stratified) {
    for (std::size_t i = 0; i < spec.n; ++i)
      fleet.push_back(CyclePhase::wrapped(spec.params, (static_cast<double>(i) + 0.5) * cycle / n));
  } else {
    // std::uniform_real_distribution is implementation-defined; take the top
    // 53 bits directly so phases match across standard libraries.
    std::mt19937_64 gen(spec.seed);
    for (std::size_t i = 0; i < spec.n; ++i) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      fleet.push_back(CyclePhase::wrapped(spec.params, u * cycle));
    }
  }
  return fleet;
}

SimReport report(const SimRun& run, const PowerTrace& baseline, double duration,
                 double promised_watts, double quantum, RequestKind kind) {
  if (!(duration > 0.0)) throw std::invalid_argument("report window must be positive");
  if (!(run.trace.horizon() > duration))
    throw std::invalid_argument("simulation horizon must exceed the request duration");

  // Delivered change, positive in the requested direction.
  const double sign = kind == RequestKind::reduce ? -1.0 : 1.0;
  const PowerTrace delivered = combine(run.trace, sign, baseline, -sign);
  const double horizon = run.trace.horizon();

  SimReport r;
  r.avg_reduction_watts = delivered.mean(0.0, duration);
  r.delivered_min_watts = delivered.ess_min(0.0, duration);
  r.delivered_max_watts = delivered.ess_max(0.0, duration);
  r.sup_deviation_watts = std::max(r.delivered_max_watts - r.avg_reduction_watts,
                                   r.avg_reduction_watts - r.delivered_min_watts);

  const PowerTrace rebound = combine(run.trace, -sign, baseline, sign);
  r.rebound_peak_watts = std::max(0.0, rebound.ess_max(duration, horizon));
  r.rebound_energy_watt_hours = rebound.positive_integral(duration, horizon);

  r.temp_violations = run.stats.temp_violations;
  r.warnings = run.stats.noop_actions;
  r.over_delivery = r.delivered_max_watts > promised_watts + quantum;
  return r;
}

double min_energy_average_reduction(const ApplianceParams& params, std::size_t n, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("duration must be positive");
  const auto fleet = build_fleet({params, n, Sampling::stratified, 0});
  SimOptions normal;
  normal.horizon = t;
  SimOptions policy = normal;
  policy.policy = Policy::min_energy;
  const auto baseline = simulate(fleet, params, normal);
  const auto held = simulate(fleet, params, policy);
  return baseline.trace.mean(0.0, t) - held.trace.mean(0.0, t);
}

}  // namespace tclflex
