// Single-broadcast demand-response protocol.
//
// The aggregator turns a request into one BroadcastMessage (plan); every
// appliance evaluates the message against its own phase (interpret). The
// message carries no appliance parameters: appliances know their own rates
// and recompute the coordinated schedule from the threshold.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "tclflex/analytics.hpp"
#include "tclflex/thermo.hpp"

namespace tclflex {

enum class PlanMode { longest, probabilistic };
enum class SchemePreference { automatic, indiv, coord };
enum class MessageScheme { indiv, coord };

std::string_view to_string(PlanMode mode);
std::string_view to_string(SchemePreference pref);
std::string_view to_string(MessageScheme scheme);
PlanMode parse_plan_mode(std::string_view text);
/// Accepts "auto", "indiv", "coord".
SchemePreference parse_scheme_preference(std::string_view text);
MessageScheme parse_message_scheme(std::string_view text);

/// Requested amplitude exceeds what the fleet can deliver at that duration.
class InfeasibleAmplitude : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct ReductionRequest {
  RequestKind kind = RequestKind::reduce;
  double duration = 0.0;
  /// nullopt requests the maximum achievable amplitude.
  std::optional<double> amplitude_watts;

  /// Throws std::invalid_argument for negative duration or amplitude <= 0.
  void validate() const;
  bool is_max() const { return !amplitude_watts.has_value(); }
  bool operator==(const ReductionRequest&) const = default;
};

class BroadcastMessage {
 public:
  /// "If you can reduce for at least `threshold` hours, do it with
  /// probability `participation`."
  static BroadcastMessage indiv(RequestKind kind, double threshold, double participation);
  /// Two-batch schedule for `schedule.duration` hours.
  static BroadcastMessage coord(RequestKind kind, const CoordSchedule& schedule,
                                double participation);

  MessageScheme scheme() const { return scheme_; }
  RequestKind kind() const { return kind_; }
  /// indiv: the (possibly stretched) duration t'. coord: the request duration.
  double threshold() const { return threshold_; }
  double participation() const { return participation_; }
  const std::optional<CoordSchedule>& schedule() const { return schedule_; }

  bool operator==(const BroadcastMessage&) const;

 private:
  BroadcastMessage(MessageScheme scheme, RequestKind kind, double threshold,
                   double participation, std::optional<CoordSchedule> schedule);

  MessageScheme scheme_;
  RequestKind kind_;
  double threshold_;
  double participation_;
  std::optional<CoordSchedule> schedule_;
};

/// What one appliance does with a message. For increase messages the roles
/// are mirrored: "off" means the appliance switches its modifier ON.
struct ApplianceAction {
  enum class Type { none, off_now, off_at };

  Type type = Type::none;
  /// Hours after receipt; meaningful for off_at only.
  double delay = 0.0;

  static ApplianceAction none() { return {}; }
  static ApplianceAction off_now() { return {Type::off_now, 0.0}; }
  static ApplianceAction off_at(double s) { return {Type::off_at, s}; }
  /// Time at which the appliance acts, or nullopt for none.
  std::optional<double> act_time() const;
  bool operator==(const ApplianceAction&) const = default;
};

/// Largest amplitude (watts) the fleet offers with `scheme` at duration t.
/// Throws InfeasibleDuration where the scheme cannot deliver anything
/// (indiv: t >= delta/(v+w) with t > 0; coord: t > coord_max_duration).
double max_amplitude(const ApplianceParams& params, std::size_t n, double t,
                     MessageScheme scheme, RequestKind kind);

/// Builds the broadcast message for a request.
///
/// `automatic` picks indiv when it can meet the amplitude and coord otherwise;
/// a max-amplitude request goes to the scheme offering more. mode=longest
/// stretches the indiv threshold to t' = delta (1/(v+w) - A/(N P w)) with
/// participation 1; coord has no stretched form and always uses
/// participation p = A / max. Increase requests are planned on mirror(params).
///
/// Throws InfeasibleAmplitude or InfeasibleDuration.
BroadcastMessage plan(const ReductionRequest& request, const ApplianceParams& params,
                      std::size_t n, PlanMode mode, SchemePreference preference);

/// Appliance-side decision. `draw` is the appliance's uniform sample in
/// [0, 1); draws >= participation ignore the message. A coord message whose
/// carried schedule disagrees with the appliance's own recomputation is
/// addressed to another appliance class and is ignored.
ApplianceAction interpret(const BroadcastMessage& message, const ApplianceParams& params,
                          CyclePhase phase, double draw);

/// Deterministic per-appliance uniform sample in [0, 1), identical on every
/// platform (SplitMix64 of seed and index).
double participation_draw(std::uint64_t seed, std::uint64_t appliance_index);

}  // namespace tclflex
