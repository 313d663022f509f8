// Scenario files (JSON) and the flat message record used by the CLI.
//
// {
//   "classes": [{"name": "A", "temp_min": 0, "delta": 1, "drive_rate": 0.4,
//                "drift_rate": 1, "power": 1, "kind": "cooling",
//                "count": 1400, "sampling": "stratified"}],
//   "request": {"kind": "reduce", "duration_hours": 0.35,
//               "amplitude_watts": "max"},          // or null
//   "scheme": "auto",         // auto | indiv | coord | upper
//   "mode": "longest",        // longest | probabilistic
//   "horizon_hours": 7,
//   "seed": 42
// }
//
// Unknown fields anywhere are rejected.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tclflex/fleet_sim.hpp"
#include "tclflex/protocol.hpp"

namespace tclflex {

/// Malformed or inconsistent scenario content.
class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ScenarioClass {
  std::string name;
  ApplianceParams params;
  std::size_t count = 1;
  Sampling sampling = Sampling::stratified;
};

/// Scheme preference plus "upper": run the min-energy policy without a message.
enum class ScenarioScheme { automatic, indiv, coord, upper };

struct Scenario {
  std::vector<ScenarioClass> classes;
  std::optional<ReductionRequest> request;
  ScenarioScheme scheme = ScenarioScheme::automatic;
  PlanMode mode = PlanMode::longest;
  double horizon_hours = 0.0;
  std::uint64_t seed = 0;

  /// Throws ScenarioError on a broken invariant.
  void validate() const;
  /// The single class; throws ScenarioError for multi-class scenarios.
  const ScenarioClass& single_class() const;
  FleetSpec fleet_spec(const ScenarioClass& c) const;
  /// Length of the reporting window: the request duration, or half the
  /// horizon without a request.
  double window_hours() const;
};

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);

/// Flat record: kind, scheme, threshold_hours, participation, and for coord
/// messages t_tilde, y1, y2.
nlohmann::json message_to_json(const BroadcastMessage& m);
/// Appliance-side decoding: the coord schedule is recomputed from the
/// receiver's own parameters and must match the carried fields.
BroadcastMessage message_from_json(const nlohmann::json& j, const ApplianceParams& params);

std::string_view to_string(ScenarioScheme scheme);
ScenarioScheme parse_scenario_scheme(std::string_view text);

}  // namespace tclflex
