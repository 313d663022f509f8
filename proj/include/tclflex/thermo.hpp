// Single-appliance thermostat model.
//
// An appliance keeps its temperature inside [temp_min, temp_max] with an
// ON/OFF temperature modifier. While ON the temperature moves towards the
// drive-side limit at `drive_rate`; while OFF it drifts back towards the
// drift-side limit at `drift_rate`. The modifier switches ON when the
// drift-side limit is reached and OFF at the drive-side limit.
//
// The canonical state of an appliance is its cycle phase y: the time since
// the modifier last switched ON. Temperatures are derived from it.
//
// Units: hours, degrees, watts, watt-hours.

#pragma once

#include <cstddef>
#include <string_view>

namespace tclflex {

enum class ApplianceKind { cooling, heating };

std::string_view to_string(ApplianceKind kind);
ApplianceKind parse_appliance_kind(std::string_view text);

class ApplianceParams {
 public:
  /// Throws std::invalid_argument unless temp_max > temp_min and all rates
  /// and the power are strictly positive and finite.
  ApplianceParams(double temp_min, double temp_max, double drive_rate,
                  double drift_rate, double power,
                  ApplianceKind kind = ApplianceKind::cooling);

  /// Band [temp_min, temp_min + delta].
  static ApplianceParams from_band(double delta, double drive_rate,
                                   double drift_rate, double power,
                                   ApplianceKind kind = ApplianceKind::cooling,
                                   double temp_min = 0.0);

  double temp_min() const { return temp_min_; }
  double temp_max() const { return temp_max_; }
  double delta() const { return delta_; }
  double drive_rate() const { return drive_rate_; }
  double drift_rate() const { return drift_rate_; }
  double power() const { return power_; }
  ApplianceKind kind() const { return kind_; }

  /// Length of the ON part of a nominal cycle, delta / drive_rate.
  double on_duration() const { return delta_ / drive_rate_; }
  double off_duration() const { return delta_ / drift_rate_; }
  double cycle_length() const { return on_duration() + off_duration(); }
  /// Long-run share of time spent ON, w / (v + w).
  double on_fraction() const { return drift_rate_ / (drive_rate_ + drift_rate_); }

  bool operator==(const ApplianceParams&) const = default;

 private:
  double temp_min_;
  double temp_max_;
  double delta_;
  double drive_rate_;
  double drift_rate_;
  double power_;
  ApplianceKind kind_;
};

/// Time since the modifier last switched ON, in [0, cycle_length).
struct CyclePhase {
  double y = 0.0;

  /// Throws std::invalid_argument when y is outside [0, cycle_length).
  static CyclePhase checked(const ApplianceParams& params, double y);
  /// Reduces any finite y modulo the cycle length.
  static CyclePhase wrapped(const ApplianceParams& params, double y);

  bool operator==(const CyclePhase&) const = default;
};

struct ApplianceClass {
  ApplianceParams params;
  std::size_t count;

  /// Throws std::invalid_argument for count == 0.
  ApplianceClass(ApplianceParams params, std::size_t count);
};

double cycle_length(const ApplianceParams& params);

/// ON interval is half-open: ON iff y < delta / drive_rate.
bool is_on(const ApplianceParams& params, CyclePhase phase);

double natural_power(const ApplianceParams& params, CyclePhase phase);

/// Gap between the current temperature and the drift-side limit (the limit
/// at which the modifier switches ON). In [0, delta].
double distance_to_limit(const ApplianceParams& params, CyclePhase phase);

/// Temperature for a given distance to the drift-side limit.
double temperature_at_distance(const ApplianceParams& params, double distance);

double temperature(const ApplianceParams& params, CyclePhase phase);

/// Longest constant reduction the appliance can offer by switching OFF now:
/// min(y v / w, [delta/v - y]^+).
double reduction_capacity(const ApplianceParams& params, CyclePhase phase);

/// Exchanges drive and drift rates and flips the kind. Demand-increase
/// questions on `params` are reduction questions on `mirror(params)`.
ApplianceParams mirror(const ApplianceParams& params);

/// Phase of the same physical state seen in the mirrored cycle: the mirrored
/// ON part starts where the original OFF part starts, so y' = y - delta/v
/// (mod cycle). Inverse of y = y' + delta/v (mod cycle).
CyclePhase mirror_phase(const ApplianceParams& params, CyclePhase phase);

}  // namespace tclflex
