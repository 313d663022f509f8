#include "tclflex/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tclflex {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

std::string_view to_string(ApplianceKind kind) {
  return kind == ApplianceKind::cooling ? "cooling" : "heating";
}

ApplianceKind parse_appliance_kind(std::string_view text) {
  if (text == "cooling") return ApplianceKind::cooling;
  if (text == "heating") return ApplianceKind::heating;
  throw std::invalid_argument("unknown appliance kind '" + std::string(text) + "'");
}

ApplianceParams::ApplianceParams(double temp_min, double temp_max, double drive_rate,
                                 double drift_rate, double power, ApplianceKind kind)
    : temp_min_(temp_min),
      temp_max_(temp_max),
      delta_(temp_max - temp_min),
      drive_rate_(drive_rate),
      drift_rate_(drift_rate),
      power_(power),
      kind_(kind) {
  if (!std::isfinite(temp_min) || !std::isfinite(temp_max) || !positive_finite(delta_))
    throw std::invalid_argument("temperature band must satisfy temp_max > temp_min");
  if (!positive_finite(drive_rate) || !positive_finite(drift_rate))
    throw std::invalid_argument("drive and drift rates must be positive");
  if (!positive_finite(power)) throw std::invalid_argument("power must be positive");
}

ApplianceParams ApplianceParams::from_band(double delta, double drive_rate, double drift_rate,
                                           double power, ApplianceKind kind, double temp_min) {
  return ApplianceParams(temp_min, temp_min + delta, drive_rate, drift_rate, power, kind);
}

CyclePhase CyclePhase::checked(const ApplianceParams& params, double y) {
  if (!(y >= 0.0 && y < params.cycle_length()))
    throw std::invalid_argument("cycle phase outside [0, cycle_length)");
  return CyclePhase{y};
}

CyclePhase CyclePhase::wrapped(const ApplianceParams& params, double y) {
  if (!std::isfinite(y)) throw std::invalid_argument("cycle phase must be finite");
  const double c = params.cycle_length();
  double r = std::fmod(y, c);
  if (r < 0.0) r += c;
  // fmod of a tiny negative value can round back up to c.
  if (r >= c) r = 0.0;
  return CyclePhase{r};
}

ApplianceClass::ApplianceClass(ApplianceParams p, std::size_t n) : params(p), count(n) {
  if (n == 0) throw std::invalid_argument("appliance class count must be at least 1");
}

double cycle_length(const ApplianceParams& params) { return params.cycle_length(); }

bool is_on(const ApplianceParams& params, CyclePhase phase) {
  return phase.y < params.on_duration();
}

double natural_power(const ApplianceParams& params, CyclePhase phase) {
  return is_on(params, phase) ? params.power() : 0.0;
}

double distance_to_limit(const ApplianceParams& params, CyclePhase phase) {
  const double on = params.on_duration();
  const double d = phase.y <= on
                       ? params.drive_rate() * phase.y
                       : params.delta() - params.drift_rate() * (phase.y - on);
  return std::clamp(d, 0.0, params.delta());
}

double temperature_at_distance(const ApplianceParams& params, double distance) {
  // Cooling appliances switch ON at temp_max, heating ones at temp_min.
  return params.kind() == ApplianceKind::cooling ? params.temp_max() - distance
                                                 : params.temp_min() + distance;
}

double temperature(const ApplianceParams& params, CyclePhase phase) {
  return temperature_at_distance(params, distance_to_limit(params, phase));
}

double reduction_capacity(const ApplianceParams& params, CyclePhase phase) {
  const double until_off = params.on_duration() - phase.y;
  if (until_off <= 0.0) return 0.0;
  return std::min(phase.y * params.drive_rate() / params.drift_rate(), until_off);
}

ApplianceParams mirror(const ApplianceParams& params) {
  const auto kind = params.kind() == ApplianceKind::cooling ? ApplianceKind::heating
                                                            : ApplianceKind::cooling;
  return ApplianceParams(params.temp_min(), params.temp_max(), params.drift_rate(),
                         params.drive_rate(), params.power(), kind);
}

CyclePhase mirror_phase(const ApplianceParams& params, CyclePhase phase) {
  return CyclePhase::wrapped(params, phase.y - params.on_duration());
}

}  // namespace tclflex
