// Exact event-driven simulation of a homogeneous appliance fleet.
//
// Every appliance follows piecewise-linear temperature dynamics, so all
// switching instants are closed-form and the aggregate power is an exact
// step function. The per-appliance kernel is shared by two drivers:
// `simulate_serial` (reference) and `simulate` (OpenMP over index blocks).
// Both return bit-identical traces.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tclflex/analytics.hpp"
#include "tclflex/power_trace.hpp"
#include "tclflex/protocol.hpp"
#include "tclflex/thermo.hpp"

namespace tclflex {

enum class Sampling { stratified, uniform_random };
enum class Policy { normal, min_energy };

std::string_view to_string(Sampling sampling);
Sampling parse_sampling(std::string_view text);

struct FleetSpec {
  ApplianceParams params;
  std::size_t n = 1;
  Sampling sampling = Sampling::stratified;
  std::uint64_t seed = 0;
};

/// stratified: y_i = (i + 0.5) cycle / n. uniform_random: i.i.d. uniform
/// phases from a seeded Mersenne Twister (platform-stable bit extraction).
/// Throws std::invalid_argument for n == 0.
std::vector<CyclePhase> build_fleet(const FleetSpec& spec);

struct SimOptions {
  /// Broadcast at time 0. Ignored by the min_energy policy.
  std::optional<BroadcastMessage> message;
  Policy policy = Policy::normal;
  /// Direction of the min_energy policy (increase holds the drive-side limit).
  RequestKind policy_kind = RequestKind::reduce;
  double horizon = 0.0;
  /// Seed of the per-appliance participation draws.
  std::uint64_t seed = 0;
};

struct SimStats {
  std::size_t appliances = 0;
  /// Appliances whose state was switched by the message or policy.
  std::size_t acted = 0;
  /// Forced switches that found the appliance already in the target state.
  std::size_t noop_actions = 0;
  std::size_t temp_violations = 0;
  /// Largest excursion outside [temp_min, temp_max], degrees.
  double worst_excursion = 0.0;
  std::size_t events = 0;

  bool operator==(const SimStats&) const = default;
};

struct SimRun {
  PowerTrace trace;
  SimStats stats;
};

/// Temperatures may leave the band by at most this much before an event is
/// counted as a violation.
inline constexpr double kTemperatureTolerance = 1e-9;

/// Throws std::invalid_argument for horizon <= 0 or an empty fleet.
SimRun simulate(std::span<const CyclePhase> fleet, const ApplianceParams& params,
                const SimOptions& options);
SimRun simulate_serial(std::span<const CyclePhase> fleet, const ApplianceParams& params,
                       const SimOptions& options);

struct SimReport {
  /// Mean delivered change over [0, t] in the request direction.
  double avg_reduction_watts = 0.0;
  /// Essential sup of |delivered(x) - average| over [0, t).
  double sup_deviation_watts = 0.0;
  /// Largest opposite-direction excursion after t (consumption above baseline
  /// for reductions).
  double rebound_peak_watts = 0.0;
  double rebound_energy_watt_hours = 0.0;
  std::size_t temp_violations = 0;
  /// Delivered change exceeded promised + quantum somewhere in [0, t).
  bool over_delivery = false;
  std::size_t warnings = 0;
  double delivered_min_watts = 0.0;
  double delivered_max_watts = 0.0;
};

/// Compares a run with the no-request baseline over the window [0, duration].
/// Throws std::invalid_argument unless duration > 0 and horizon > duration.
SimReport report(const SimRun& run, const PowerTrace& baseline, double duration,
                 double promised_watts, double quantum,
                 RequestKind kind = RequestKind::reduce);

/// Average reduction over [0, t] of the drift-then-hold policy on a
/// stratified fleet of n appliances.
double min_energy_average_reduction(const ApplianceParams& params, std::size_t n, double t);

}  // namespace tclflex
