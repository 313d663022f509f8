#include "tclflex/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string_view>

namespace tclflex {

using nlohmann::json;

namespace {

void require_object(const json& j, std::string_view what) {
  if (!j.is_object()) throw ScenarioError(std::string(what) + " must be a JSON object");
}

void reject_unknown(const json& j, std::string_view what,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ScenarioError("unknown field '" + key + "' in " + std::string(what));
}

const json& field(const json& j, const char* key, std::string_view what) {
  auto it = j.find(key);
  if (it == j.end())
    throw ScenarioError("missing field '" + std::string(key) + "' in " + std::string(what));
  return *it;
}

double number(const json& j, const char* key, std::string_view what) {
  const auto& v = field(j, key, what);
  if (!v.is_number())
    throw ScenarioError("field '" + std::string(key) + "' in " + std::string(what) +
                        " must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, std::string_view what, double fallback) {
  return j.contains(key) ? number(j, key, what) : fallback;
}

std::string text(const json& j, const char* key, std::string_view what) {
  const auto& v = field(j, key, what);
  if (!v.is_string())
    throw ScenarioError("field '" + std::string(key) + "' in " + std::string(what) +
                        " must be a string");
  return v.get<std::string>();
}

std::uint64_t unsigned_integer(const json& j, const char* key, std::string_view what) {
  const auto& v = field(j, key, what);
  if (!v.is_number_unsigned())
    throw ScenarioError("field '" + std::string(key) + "' in " + std::string(what) +
                        " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

// Parsers of enum-valued fields throw std::invalid_argument; keep the
// diagnostic but report it as a scenario problem.
template <class F>
auto parse_field(F&& f) {
  try {
    return f();
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what());
  }
}

ScenarioClass class_from_json(const json& j, std::size_t index) {
  const std::string what = "classes[" + std::to_string(index) + "]";
  require_object(j, what);
  reject_unknown(j, what, {"name", "temp_min", "delta", "drive_rate", "drift_rate", "power",
                           "kind", "count", "sampling"});
  return parse_field([&] {
    const auto kind = j.contains("kind") ? parse_appliance_kind(text(j, "kind", what))
                                         : ApplianceKind::cooling;
    ScenarioClass c{
        j.contains("name") ? text(j, "name", what) : std::to_string(index),
        ApplianceParams::from_band(number(j, "delta", what), number(j, "drive_rate", what),
                                   number(j, "drift_rate", what), number(j, "power", what), kind,
                                   number_or(j, "temp_min", what, 0.0)),
        static_cast<std::size_t>(unsigned_integer(j, "count", what)),
        j.contains("sampling") ? parse_sampling(text(j, "sampling", what))
                               : Sampling::stratified};
    if (c.count == 0) throw ScenarioError(what + ": count must be at least 1");
    return c;
  });
}

ReductionRequest request_from_json(const json& j) {
  const std::string what = "request";
  require_object(j, what);
  reject_unknown(j, what, {"kind", "duration_hours", "amplitude_watts"});
  return parse_field([&] {
    ReductionRequest r;
    r.kind = j.contains("kind") ? parse_request_kind(text(j, "kind", what)) : RequestKind::reduce;
    r.duration = number(j, "duration_hours", what);
    const auto& a = field(j, "amplitude_watts", what);
    if (a.is_string()) {
      if (a.get<std::string>() != "max")
        throw ScenarioError("amplitude_watts must be a number or \"max\"");
    } else if (a.is_number()) {
      r.amplitude_watts = a.get<double>();
    } else {
      throw ScenarioError("amplitude_watts must be a number or \"max\"");
    }
    r.validate();
    return r;
  });
}

}  // namespace

std::string_view to_string(ScenarioScheme scheme) {
  switch (scheme) {
    case ScenarioScheme::automatic: return "auto";
    case ScenarioScheme::indiv: return "indiv";
    case ScenarioScheme::coord: return "coord";
    case ScenarioScheme::upper: return "upper";
  }
  return "?";
}

ScenarioScheme parse_scenario_scheme(std::string_view s) {
  if (s == "auto") return ScenarioScheme::automatic;
  if (s == "indiv") return ScenarioScheme::indiv;
  if (s == "coord") return ScenarioScheme::coord;
  if (s == "upper") return ScenarioScheme::upper;
  throw std::invalid_argument("unknown scheme '" + std::string(s) + "'");
}

void Scenario::validate() const {
  if (classes.empty()) throw ScenarioError("scenario needs at least one class");
  if (!(horizon_hours > 0.0) || !std::isfinite(horizon_hours))
    throw ScenarioError("horizon_hours must be positive");
  if (request) {
    try {
      request->validate();
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(e.what());
    }
    if (!(horizon_hours > request->duration))
      throw ScenarioError("horizon_hours must exceed the request duration");
  }
}

const ScenarioClass& Scenario::single_class() const {
  if (classes.size() != 1)
    throw ScenarioError("this command needs a single-class scenario");
  return classes.front();
}

FleetSpec Scenario::fleet_spec(const ScenarioClass& c) const {
  return FleetSpec{c.params, c.count, c.sampling, seed};
}

double Scenario::window_hours() const {
  if (request && request->duration > 0.0) return request->duration;
  return 0.5 * horizon_hours;
}

Scenario scenario_from_json(const json& j) {
  const std::string what = "scenario";
  require_object(j, what);
  reject_unknown(j, what, {"classes", "request", "scheme", "mode", "horizon_hours", "seed"});
  Scenario s;
  const auto& classes = field(j, "classes", what);
  if (!classes.is_array()) throw ScenarioError("classes must be an array");
  for (std::size_t i = 0; i < classes.size(); ++i)
    s.classes.push_back(class_from_json(classes[i], i));
  if (j.contains("request") && !j.at("request").is_null())
    s.request = request_from_json(j.at("request"));
  parse_field([&] {
    if (j.contains("scheme")) s.scheme = parse_scenario_scheme(text(j, "scheme", what));
    if (j.contains("mode")) s.mode = parse_plan_mode(text(j, "mode", what));
    return 0;
  });
  s.horizon_hours = number(j, "horizon_hours", what);
  if (j.contains("seed")) s.seed = unsigned_integer(j, "seed", what);
  s.validate();
  return s;
}

json scenario_to_json(const Scenario& s) {
  json classes = json::array();
  for (const auto& c : s.classes) {
    classes.push_back({{"name", c.name},
                       {"temp_min", c.params.temp_min()},
                       {"delta", c.params.delta()},
                       {"drive_rate", c.params.drive_rate()},
                       {"drift_rate", c.params.drift_rate()},
                       {"power", c.params.power()},
                       {"kind", std::string(to_string(c.params.kind()))},
                       {"count", c.count},
                       {"sampling", std::string(to_string(c.sampling))}});
  }
  json j{{"classes", classes},
         {"scheme", std::string(to_string(s.scheme))},
         {"mode", std::string(to_string(s.mode))},
         {"horizon_hours", s.horizon_hours},
         {"seed", s.seed}};
  if (s.request) {
    j["request"] = {{"kind", std::string(to_string(s.request->kind))},
                    {"duration_hours", s.request->duration}};
    if (s.request->amplitude_watts)
      j["request"]["amplitude_watts"] = *s.request->amplitude_watts;
    else
      j["request"]["amplitude_watts"] = "max";
  } else {
    j["request"] = nullptr;
  }
  return j;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError("scenario '" + path + "' is not valid JSON: " + e.what());
  }
  return scenario_from_json(j);
}

json message_to_json(const BroadcastMessage& m) {
  json j{{"kind", std::string(to_string(m.kind()))},
         {"scheme", std::string(to_string(m.scheme()))},
         {"threshold_hours", m.threshold()},
         {"participation", m.participation()}};
  if (m.schedule()) {
    j["t_tilde"] = m.schedule()->t_tilde;
    j["y1"] = m.schedule()->y1;
    j["y2"] = m.schedule()->y2;
  }
  return j;
}

BroadcastMessage message_from_json(const json& j, const ApplianceParams& params) {
  const std::string what = "message";
  require_object(j, what);
  reject_unknown(j, what,
                 {"kind", "scheme", "threshold_hours", "participation", "t_tilde", "y1", "y2"});
  return parse_field([&] {
    const auto kind = parse_request_kind(text(j, "kind", what));
    const auto scheme = parse_message_scheme(text(j, "scheme", what));
    const double threshold = number(j, "threshold_hours", what);
    const double p = number(j, "participation", what);
    if (scheme == MessageScheme::indiv) {
      if (j.contains("t_tilde") || j.contains("y1") || j.contains("y2"))
        throw ScenarioError("indiv message carries no schedule fields");
      return BroadcastMessage::indiv(kind, threshold, p);
    }
    const auto frame = kind == RequestKind::reduce ? params : mirror(params);
    CoordSchedule own = coord_schedule(frame, threshold);
    const double carried[] = {number(j, "t_tilde", what), number(j, "y1", what),
                              number(j, "y2", what)};
    const double mine[] = {own.t_tilde, own.y1, own.y2};
    for (int k = 0; k < 3; ++k)
      if (std::abs(carried[k] - mine[k]) > 1e-9 * (1.0 + std::abs(mine[k])))
        throw ScenarioError("carried coord schedule does not match the receiver's parameters");
    return BroadcastMessage::coord(kind, own, p);
  });
}

}  // namespace tclflex
