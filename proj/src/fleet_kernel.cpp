#include "fleet_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tclflex::detail {

namespace {

void check_temperature(const ApplianceParams& params, double distance, SimStats& stats) {
  const double temp = temperature_at_distance(params, distance);
  const double excursion =
      std::max(params.temp_min() - temp, temp - params.temp_max());
  if (excursion > 0.0) stats.worst_excursion = std::max(stats.worst_excursion, excursion);
  if (excursion > kTemperatureTolerance) ++stats.temp_violations;
}

}  // namespace

void validate_inputs(std::span<const CyclePhase> fleet, const SimOptions& options) {
  if (fleet.empty()) throw std::invalid_argument("fleet must not be empty");
  if (!(options.horizon > 0.0) || !std::isfinite(options.horizon))
    throw std::invalid_argument("simulation horizon must be positive");
}

void accumulate(SimStats& into, const SimStats& from) {
  into.appliances += from.appliances;
  into.acted += from.acted;
  into.noop_actions += from.noop_actions;
  into.temp_violations += from.temp_violations;
  into.worst_excursion = std::max(into.worst_excursion, from.worst_excursion);
  into.events += from.events;
}

void run_appliance(const ApplianceParams& params, CyclePhase phase, std::size_t index,
                   const SimOptions& options, std::vector<PowerEvent>& events, SimStats& stats) {
  const double horizon = options.horizon;
  const double delta = params.delta();
  const double v = params.drive_rate();
  const double w = params.drift_rate();
  const bool holds = options.policy == Policy::min_energy;

  // Distance to the drift-side limit; the only continuous state.
  double distance = distance_to_limit(params, phase);
  bool on = is_on(params, phase);
  bool held = false;
  double clock = 0.0;

  // Forced switch: time (infinity for none) and direction (true = switch ON).
  constexpr double kNever = std::numeric_limits<double>::infinity();
  double forced = kNever;
  bool forced_on = false;
  if (holds) {
    forced = 0.0;
    forced_on = options.policy_kind == RequestKind::increase;
  } else if (options.message) {
    const double draw = participation_draw(options.seed, index);
    forced = interpret(*options.message, params, phase, draw).act_time().value_or(kNever);
    forced_on = options.message->kind() == RequestKind::increase;
  }
  // Once forced, the min-energy policy holds the limit it drifts (or drives) to.
  bool hold_armed = false;

  ++stats.appliances;
  check_temperature(params, distance, stats);
  if (on) events.push_back({0.0, 1, 0});

  auto emit = [&](double t, std::int32_t on_delta, std::int32_t held_delta) {
    events.push_back({t, on_delta, held_delta});
    ++stats.events;
  };

  while (!held) {
    const double to_limit = on ? (delta - distance) / v : distance / w;
    const double natural = clock + to_limit;

    // Forced switches apply before natural toggles at the same instant.
    if (forced <= natural) {
      const double s = forced;
      forced = kNever;
      if (s >= horizon) continue;
      distance += on ? v * (s - clock) : -w * (s - clock);
      clock = s;
      check_temperature(params, distance, stats);
      distance = std::clamp(distance, 0.0, delta);
      if (holds) hold_armed = true;
      if (on == forced_on) {
        // Within rounding of its own toggle the appliance is at phase 0 and
        // the forced episode has zero length; that is not a planner slip.
        if (!holds && natural - s > kTimeEpsilon) ++stats.noop_actions;
      } else {
        on = forced_on;
        ++stats.acted;
        emit(s, on ? 1 : -1, 0);
      }
      continue;
    }

    if (natural >= horizon) break;
    distance += on ? v * to_limit : -w * to_limit;
    clock = natural;
    check_temperature(params, distance, stats);
    distance = on ? delta : 0.0;

    // Reached the limit the policy steers towards: chatter there, modelled
    // as a constant fractional draw.
    if (hold_armed && on == forced_on) {
      held = true;
      emit(clock, on ? -1 : 0, 1);
      break;
    }
    on = !on;
    emit(clock, on ? 1 : -1, 0);
  }
}

PowerTrace aggregate(std::span<const PowerEvent> events, const ApplianceParams& params,
                     double horizon) {
  const double p = params.power();
  const double held_power = p * params.on_fraction();
  std::int64_t on_count = 0;
  std::int64_t held_count = 0;

  auto power = [&] {
    return p * static_cast<double>(on_count) + held_power * static_cast<double>(held_count);
  };

  std::size_t i = 0;
  auto apply_cluster = [&](double start) {
    while (i < events.size() && events[i].time - start <= kTimeEpsilon) {
      on_count += events[i].on_delta;
      held_count += events[i].held_delta;
      ++i;
    }
  };

  apply_cluster(0.0);
  std::vector<Breakpoint> out{{0.0, power()}};
  std::int64_t last_on = on_count;
  std::int64_t last_held = held_count;
  while (i < events.size()) {
    const double start = events[i].time;
    // A cluster this close to the horizon would open a sliver segment whose
    // presence depends on rounding.
    if (start > horizon - kTimeEpsilon) break;
    apply_cluster(start);
    if (on_count != last_on || held_count != last_held) {
      out.push_back({start, power()});
      last_on = on_count;
      last_held = held_count;
    }
  }
  return PowerTrace(std::move(out), horizon);
}

}  // namespace tclflex::detail
