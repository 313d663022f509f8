// Closed-form flexibility formulas for a homogeneous fleet of thermostat
// appliances whose cycle phases are uniformly spread over the cycle.
//
// Fractions are relative to a reference power: the steady-state consumption
// N P w/(v+w) for reductions, the steady-state non-consumption N P v/(v+w)
// for increases. Increase answers are the reduction formulas evaluated on
// mirror(params). All fractions are clamped to [0, 1].

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "tclflex/thermo.hpp"

namespace tclflex {

enum class Scheme { upper_bound, indiv, coord, min_energy_policy };
enum class RequestKind { reduce, increase };

std::string_view to_string(Scheme scheme);
std::string_view to_string(RequestKind kind);
/// Accepts "upper", "upper_bound", "indiv", "coord", "min_energy_policy".
Scheme parse_scheme(std::string_view text);
RequestKind parse_request_kind(std::string_view text);

/// Requested duration lies outside a scheme's feasible range.
class InfeasibleDuration : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct ReductionQuote {
  double fraction = 0.0;
  double watts = 0.0;
  Scheme scheme = Scheme::indiv;
  double duration = 0.0;
  RequestKind kind = RequestKind::reduce;
};

/// Two-batch coordinated plan for a duration t. The first batch holds phases
/// [y1, y2] and switches OFF at once; from t_tilde onwards the second batch
/// (phases just below y1, modulo the cycle, down to y3) joins at rate 1 + w/v.
struct CoordSchedule {
  double duration = 0.0;
  double t_tilde = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;
  double y3 = 0.0;
  /// min(delta/v - y1, y2 v/w): end of the constant-rate first-batch exit.
  double hat_t = 0.0;
  double fraction = 0.0;
};

/// Slack of the four feasibility inequalities of a CoordSchedule; every entry
/// is >= 0 for a feasible schedule.
struct CoordConstraintSlack {
  double batches_disjoint = 0.0;       // y3 - y2
  double second_batch_on_late = 0.0;   // y3 - (cycle - t)
  double second_batch_on_early = 0.0;  // (delta/v - t) - y1
  double second_batch_can_wait = 0.0;  // (v/w)(t_tilde + y1) - (t - t_tilde)

  double min() const;
};

struct Portfolio {
  std::vector<ApplianceClass> classes;

  /// Throws std::invalid_argument for an empty class list.
  explicit Portfolio(std::vector<ApplianceClass> classes);
};

struct PortfolioQuote {
  double watts = 0.0;
  /// One entry per class, in portfolio order; nullopt where the duration is
  /// infeasible for that class (contributes 0 W).
  std::vector<std::optional<ReductionQuote>> per_class;
};

/// N P w/(v+w).
double steady_state_power(const ApplianceParams& params, std::size_t n);

/// Power the fractions of `kind` are relative to.
double reference_power(const ApplianceParams& params, std::size_t n, RequestKind kind);

/// Probability that a uniformly placed appliance can reduce for longer than t.
double survival(const ApplianceParams& params, double t);

/// [1 - t (v+w)/delta]^+.
double indiv_fraction(const ApplianceParams& params, double t);

/// delta / (v+w): longest individual reduction, where indiv_fraction hits 0.
double indiv_max_duration(const ApplianceParams& params);

/// Best average reduction over t when constancy is not required:
/// 1 - w t/(2 delta) for t <= delta/w, delta/(2 w t) beyond.
double upper_bound_fraction(const ApplianceParams& params, double t);

/// Expected energy drawn per appliance over t by the drift-then-hold policy.
double min_energy_per_appliance(const ApplianceParams& params, double t);

/// delta (v + 2w) / (v + w)^2.
double coord_max_duration(const ApplianceParams& params);

/// Throws InfeasibleDuration when t > coord_max_duration(params),
/// std::invalid_argument for negative t.
CoordSchedule coord_schedule(const ApplianceParams& params, double t);

CoordConstraintSlack coord_constraint_slack(const ApplianceParams& params,
                                            const CoordSchedule& schedule);

double coord_fraction(const ApplianceParams& params, double t);

/// Reduction fraction of `scheme` at t (reduction frame). min_energy_policy
/// shares the upper bound.
double scheme_fraction(const ApplianceParams& params, double t, Scheme scheme);

ReductionQuote quote(const ApplianceParams& params, std::size_t n, double t, Scheme scheme,
                     RequestKind kind);

/// Per-class sum. Classes for which t exceeds their coord range contribute 0.
PortfolioQuote portfolio_quote(const Portfolio& portfolio, double t, Scheme scheme,
                               RequestKind kind);

}  // namespace tclflex
