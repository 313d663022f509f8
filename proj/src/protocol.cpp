#include "tclflex/protocol.hpp"

#include <cmath>
#include <string>

namespace tclflex {

namespace {

// Relative slack for "amplitude <= maximum" and schedule cross-checks.
constexpr double kRelTol = 1e-9;

bool close(double a, double b) { return std::abs(a - b) <= kRelTol * (1.0 + std::abs(b)); }

ApplianceParams frame_for(const ApplianceParams& params, RequestKind kind) {
  return kind == RequestKind::reduce ? params : mirror(params);
}

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::string_view to_string(PlanMode mode) {
  return mode == PlanMode::longest ? "longest" : "probabilistic";
}

std::string_view to_string(SchemePreference pref) {
  switch (pref) {
    case SchemePreference::automatic: return "auto";
    case SchemePreference::indiv: return "indiv";
    case SchemePreference::coord: return "coord";
  }
  return "?";
}

std::string_view to_string(MessageScheme scheme) {
  return scheme == MessageScheme::indiv ? "indiv" : "coord";
}

PlanMode parse_plan_mode(std::string_view text) {
  if (text == "longest") return PlanMode::longest;
  if (text == "probabilistic") return PlanMode::probabilistic;
  throw std::invalid_argument("unknown plan mode '" + std::string(text) + "'");
}

SchemePreference parse_scheme_preference(std::string_view text) {
  if (text == "auto") return SchemePreference::automatic;
  if (text == "indiv") return SchemePreference::indiv;
  if (text == "coord") return SchemePreference::coord;
  throw std::invalid_argument("unknown scheme preference '" + std::string(text) + "'");
}

MessageScheme parse_message_scheme(std::string_view text) {
  if (text == "indiv") return MessageScheme::indiv;
  if (text == "coord") return MessageScheme::coord;
  throw std::invalid_argument("unknown message scheme '" + std::string(text) + "'");
}

void ReductionRequest::validate() const {
  if (!(duration >= 0.0) || !std::isfinite(duration))
    throw std::invalid_argument("request duration must be finite and non-negative");
  if (amplitude_watts && !(*amplitude_watts > 0.0 && std::isfinite(*amplitude_watts)))
    throw std::invalid_argument("request amplitude must be positive");
}

BroadcastMessage::BroadcastMessage(MessageScheme scheme, RequestKind kind, double threshold,
                                   double participation, std::optional<CoordSchedule> schedule)
    : scheme_(scheme),
      kind_(kind),
      threshold_(threshold),
      participation_(participation),
      schedule_(schedule) {
  if (!(threshold >= 0.0) || !std::isfinite(threshold))
    throw std::invalid_argument("message threshold must be finite and non-negative");
  if (!(participation >= 0.0 && participation <= 1.0))
    throw std::invalid_argument("participation must lie in [0, 1]");
  if (scheme == MessageScheme::coord) {
    if (!schedule) throw std::invalid_argument("coord message needs a schedule");
    const auto& s = *schedule;
    if (!close(s.duration, threshold))
      throw std::invalid_argument("coord schedule duration differs from threshold");
    if (!(s.t_tilde >= 0.0 && s.t_tilde <= s.duration) || !(s.y1 >= 0.0 && s.y1 <= s.y2))
      throw std::invalid_argument("coord schedule is not internally consistent");
  } else if (schedule) {
    throw std::invalid_argument("indiv message carries no schedule");
  }
}

BroadcastMessage BroadcastMessage::indiv(RequestKind kind, double threshold,
                                         double participation) {
  return BroadcastMessage(MessageScheme::indiv, kind, threshold, participation, std::nullopt);
}

BroadcastMessage BroadcastMessage::coord(RequestKind kind, const CoordSchedule& schedule,
                                         double participation) {
  return BroadcastMessage(MessageScheme::coord, kind, schedule.duration, participation,
                          schedule);
}

bool BroadcastMessage::operator==(const BroadcastMessage& o) const {
  if (scheme_ != o.scheme_ || kind_ != o.kind_ || threshold_ != o.threshold_ ||
      participation_ != o.participation_ || schedule_.has_value() != o.schedule_.has_value())
    return false;
  if (!schedule_) return true;
  const auto& a = *schedule_;
  const auto& b = *o.schedule_;
  return a.duration == b.duration && a.t_tilde == b.t_tilde && a.y1 == b.y1 && a.y2 == b.y2 &&
         a.y3 == b.y3 && a.hat_t == b.hat_t && a.fraction == b.fraction;
}

std::optional<double> ApplianceAction::act_time() const {
  switch (type) {
    case Type::none: return std::nullopt;
    case Type::off_now: return 0.0;
    case Type::off_at: return delay;
  }
  return std::nullopt;
}

double max_amplitude(const ApplianceParams& params, std::size_t n, double t,
                     MessageScheme scheme, RequestKind kind) {
  const ApplianceParams frame = frame_for(params, kind);
  if (scheme == MessageScheme::indiv) {
    if (t > 0.0 && t >= indiv_max_duration(frame))
      throw InfeasibleDuration("individual reduction needs t < " +
                               std::to_string(indiv_max_duration(frame)) + " h");
    return indiv_fraction(frame, t) * steady_state_power(frame, n);
  }
  return coord_fraction(frame, t) * steady_state_power(frame, n);
}

BroadcastMessage plan(const ReductionRequest& request, const ApplianceParams& params,
                      std::size_t n, PlanMode mode, SchemePreference preference) {
  request.validate();
  if (n == 0) throw std::invalid_argument("fleet size must be at least 1");
  const double t = request.duration;

  auto try_max = [&](MessageScheme s) -> std::optional<double> {
    try {
      return max_amplitude(params, n, t, s, request.kind);
    } catch (const InfeasibleDuration&) {
      return std::nullopt;
    }
  };
  const auto indiv_max = try_max(MessageScheme::indiv);
  const auto coord_max = try_max(MessageScheme::coord);
  auto meets = [&](const std::optional<double>& max) {
    return max && (request.is_max() || *request.amplitude_watts <= *max * (1.0 + kRelTol));
  };

  MessageScheme scheme = MessageScheme::indiv;
  switch (preference) {
    case SchemePreference::indiv: scheme = MessageScheme::indiv; break;
    case SchemePreference::coord: scheme = MessageScheme::coord; break;
    case SchemePreference::automatic:
      if (request.is_max()) {
        if (!indiv_max && !coord_max)
          throw InfeasibleDuration("no scheme can reduce for " + std::to_string(t) + " h");
        scheme = (!coord_max || (indiv_max && *indiv_max >= *coord_max)) ? MessageScheme::indiv
                                                                         : MessageScheme::coord;
      } else {
        scheme = meets(indiv_max) || !coord_max ? MessageScheme::indiv : MessageScheme::coord;
      }
      break;
  }

  const auto& max = scheme == MessageScheme::indiv ? indiv_max : coord_max;
  if (!max)
    throw InfeasibleDuration(std::string(to_string(scheme)) + " scheme cannot reduce for " +
                             std::to_string(t) + " h");
  if (!meets(max))
    throw InfeasibleAmplitude("amplitude " + std::to_string(*request.amplitude_watts) +
                              " W exceeds the " + std::string(to_string(scheme)) +
                              " maximum of " + std::to_string(*max) + " W at t = " +
                              std::to_string(t) + " h");

  const double participation =
      request.is_max() ? 1.0 : std::min(1.0, *request.amplitude_watts / *max);
  const ApplianceParams frame = frame_for(params, request.kind);

  if (scheme == MessageScheme::coord)
    return BroadcastMessage::coord(request.kind, coord_schedule(frame, t), participation);

  if (mode == PlanMode::longest && !request.is_max()) {
    const double v = frame.drive_rate();
    const double w = frame.drift_rate();
    const double a = *request.amplitude_watts;
    const double stretched =
        frame.delta() * (1.0 / (v + w) - a / (static_cast<double>(n) * frame.power() * w));
    return BroadcastMessage::indiv(request.kind, std::max(stretched, t), 1.0);
  }
  return BroadcastMessage::indiv(request.kind, t, participation);
}

ApplianceAction interpret(const BroadcastMessage& message, const ApplianceParams& params,
                          CyclePhase phase, double draw) {
  if (draw >= message.participation()) return ApplianceAction::none();

  const ApplianceParams frame = frame_for(params, message.kind());
  const CyclePhase y = message.kind() == RequestKind::reduce ? phase : mirror_phase(params, phase);

  if (message.scheme() == MessageScheme::indiv) {
    if (is_on(frame, y) && reduction_capacity(frame, y) >= message.threshold())
      return ApplianceAction::off_now();
    return ApplianceAction::none();
  }

  CoordSchedule own;
  try {
    own = coord_schedule(frame, message.threshold());
  } catch (const InfeasibleDuration&) {
    return ApplianceAction::none();
  }
  const auto& carried = *message.schedule();
  if (!close(carried.t_tilde, own.t_tilde) || !close(carried.y1, own.y1) ||
      !close(carried.y2, own.y2))
    return ApplianceAction::none();

  if (y.y >= own.y1 && y.y <= own.y2) return ApplianceAction::off_now();

  const double rate = 1.0 + frame.drift_rate() / frame.drive_rate();
  const double back = CyclePhase::wrapped(frame, own.y1 - y.y).y;
  const double x = back / rate;
  if (x <= own.duration - own.t_tilde) return ApplianceAction::off_at(own.t_tilde + x);
  return ApplianceAction::none();
}

double participation_draw(std::uint64_t seed, std::uint64_t appliance_index) {
  const std::uint64_t bits =
      splitmix64(splitmix64(seed) + 0x9E3779B97F4A7C15ULL * (appliance_index + 1));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace tclflex
