#include "tclflex/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tclflex {

namespace {

void require_duration(double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("duration must be finite and non-negative");
}

double clamp_fraction(double f) { return std::clamp(f, 0.0, 1.0); }

}  // namespace

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::upper_bound: return "upper";
    case Scheme::indiv: return "indiv";
    case Scheme::coord: return "coord";
    case Scheme::min_energy_policy: return "min_energy_policy";
  }
  return "?";
}

std::string_view to_string(RequestKind kind) {
  return kind == RequestKind::reduce ? "reduce" : "increase";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "upper" || text == "upper_bound") return Scheme::upper_bound;
  if (text == "indiv") return Scheme::indiv;
  if (text == "coord") return Scheme::coord;
  if (text == "min_energy_policy") return Scheme::min_energy_policy;
  throw std::invalid_argument("unknown scheme '" + std::string(text) + "'");
}

RequestKind parse_request_kind(std::string_view text) {
  if (text == "reduce") return RequestKind::reduce;
  if (text == "increase") return RequestKind::increase;
  throw std::invalid_argument("unknown request kind '" + std::string(text) + "'");
}

double CoordConstraintSlack::min() const {
  return std::min({batches_disjoint, second_batch_on_late, second_batch_on_early,
                   second_batch_can_wait});
}

Portfolio::Portfolio(std::vector<ApplianceClass> c) : classes(std::move(c)) {
  if (classes.empty()) throw std::invalid_argument("portfolio needs at least one class");
}

double steady_state_power(const ApplianceParams& params, std::size_t n) {
  return static_cast<double>(n) * params.power() * params.on_fraction();
}

double reference_power(const ApplianceParams& params, std::size_t n, RequestKind kind) {
  return kind == RequestKind::reduce ? steady_state_power(params, n)
                                     : steady_state_power(mirror(params), n);
}

double survival(const ApplianceParams& params, double t) {
  return params.on_fraction() * indiv_fraction(params, t);
}

double indiv_fraction(const ApplianceParams& params, double t) {
  require_duration(t);
  const double rates = params.drive_rate() + params.drift_rate();
  return clamp_fraction(1.0 - t * rates / params.delta());
}

double indiv_max_duration(const ApplianceParams& params) {
  return params.delta() / (params.drive_rate() + params.drift_rate());
}

double upper_bound_fraction(const ApplianceParams& params, double t) {
  require_duration(t);
  const double w = params.drift_rate();
  const double delta = params.delta();
  if (t <= delta / w) return clamp_fraction(1.0 - w * t / (2.0 * delta));
  return clamp_fraction(delta / (2.0 * w * t));
}

double min_energy_per_appliance(const ApplianceParams& params, double t) {
  require_duration(t);
  const double v = params.drive_rate();
  const double w = params.drift_rate();
  const double delta = params.delta();
  const double p = params.power();
  // Quadratic while some appliances are still drifting, linear once all hold.
  if (w * t <= delta) return p / (v + w) * (w * t) * (w * t) / (2.0 * delta);
  return p * w / (v + w) * (t - delta / (2.0 * w));
}

double coord_max_duration(const ApplianceParams& params) {
  const double v = params.drive_rate();
  const double w = params.drift_rate();
  return params.delta() * (v + 2.0 * w) / ((v + w) * (v + w));
}

namespace {

// Durations computed as t_max * k / k may land an ulp above t_max.
bool beyond_coord_range(const ApplianceParams& params, double t) {
  return t > coord_max_duration(params) * (1.0 + 1e-12);
}

}  // namespace

CoordSchedule coord_schedule(const ApplianceParams& params, double t) {
  require_duration(t);
  const double t_max = coord_max_duration(params);
  if (beyond_coord_range(params, t))
    throw InfeasibleDuration("coordinated reduction needs t <= " + std::to_string(t_max) +
                             " h, got " + std::to_string(t));
  const double v = params.drive_rate();
  const double w = params.drift_rate();
  const double on = params.on_duration();

  CoordSchedule s;
  s.duration = t;
  s.t_tilde = w * t / (v + 2.0 * w);
  s.y1 = s.t_tilde * w / v;
  s.y2 = on - s.t_tilde;
  s.y3 = params.cycle_length() + s.t_tilde * w / v - (1.0 + w / v) * (t - s.t_tilde);
  s.hat_t = std::min(on - s.y1, s.y2 * v / w);
  s.fraction = clamp_fraction(1.0 - (v + w) * s.t_tilde / params.delta());
  return s;
}

CoordConstraintSlack coord_constraint_slack(const ApplianceParams& params,
                                            const CoordSchedule& s) {
  const double v = params.drive_rate();
  const double w = params.drift_rate();
  const double t = s.duration;
  CoordConstraintSlack slack;
  slack.batches_disjoint = s.y3 - s.y2;
  slack.second_batch_on_late = s.y3 - (params.cycle_length() - t);
  slack.second_batch_on_early = (params.on_duration() - t) - s.y1;
  slack.second_batch_can_wait = v / w * (s.t_tilde + s.y1) - (t - s.t_tilde);
  return slack;
}

double coord_fraction(const ApplianceParams& params, double t) {
  require_duration(t);
  if (beyond_coord_range(params, t))
    throw InfeasibleDuration("coordinated reduction infeasible for t = " + std::to_string(t));
  const double v = params.drive_rate();
  const double w = params.drift_rate();
  return clamp_fraction(1.0 - t * (v + w) / (v + 2.0 * w) * w / params.delta());
}

double scheme_fraction(const ApplianceParams& params, double t, Scheme scheme) {
  switch (scheme) {
    case Scheme::upper_bound:
    case Scheme::min_energy_policy: return upper_bound_fraction(params, t);
    case Scheme::indiv: return indiv_fraction(params, t);
    case Scheme::coord: return coord_fraction(params, t);
  }
  throw std::invalid_argument("unknown scheme");
}

ReductionQuote quote(const ApplianceParams& params, std::size_t n, double t, Scheme scheme,
                     RequestKind kind) {
  if (n == 0) throw std::invalid_argument("fleet size must be at least 1");
  const ApplianceParams frame = kind == RequestKind::reduce ? params : mirror(params);
  ReductionQuote q;
  q.fraction = scheme_fraction(frame, t, scheme);
  q.watts = q.fraction * steady_state_power(frame, n);
  q.scheme = scheme;
  q.duration = t;
  q.kind = kind;
  return q;
}

PortfolioQuote portfolio_quote(const Portfolio& portfolio, double t, Scheme scheme,
                               RequestKind kind) {
  PortfolioQuote out;
  out.per_class.reserve(portfolio.classes.size());
  for (const auto& c : portfolio.classes) {
    try {
      auto q = quote(c.params, c.count, t, scheme, kind);
      out.watts += q.watts;
      out.per_class.emplace_back(q);
    } catch (const InfeasibleDuration&) {
      out.per_class.emplace_back(std::nullopt);
    }
  }
  return out;
}

}  // namespace tclflex
