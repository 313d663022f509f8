// tclflex: analytic quotes, message planning, fleet simulation and
// self-verification for thermostat-appliance demand response.
//
// Exit codes: 0 success, 1 verification mismatch, 2 invalid or infeasible
// input, 3 I/O error.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "tclflex/analytics.hpp"
#include "tclflex/fleet_sim.hpp"
#include "tclflex/power_trace.hpp"
#include "tclflex/protocol.hpp"
#include "tclflex/scenario.hpp"

namespace {

using namespace tclflex;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string g6(double x) { return fmt::format("{:.6g}", x); }

/// Flags shared by every command that builds a scenario.
struct ScenarioFlags {
  std::string scenario_path;
  double temp_min = 0.0;
  double delta = 1.0;
  double v = 0.0;
  double w = 0.0;
  double p = 1.0;
  std::size_t n = 1;
  std::string kind = "reduce";
  std::string appliance = "cooling";
  std::optional<double> t;
  std::string amplitude = "max";
  std::string scheme = "auto";
  std::string mode = "longest";
  std::string sampling = "stratified";
  double horizon = 0.0;
  std::uint64_t seed = 0;
  std::string emit_scenario;

  void add_params(CLI::App* app) {
    app->add_option("--delta", delta, "Temperature band width (degrees)");
    app->add_option("--v", v, "Drive rate while ON (degrees/hour)");
    app->add_option("--w", w, "Drift rate while OFF (degrees/hour)");
    app->add_option("--p", p, "Power while ON (watts)");
    app->add_option("--n", n, "Number of appliances");
    app->add_option("--temp-min", temp_min, "Lower temperature limit");
    app->add_option("--appliance", appliance, "cooling | heating");
    app->add_option("--kind", kind, "reduce | increase");
  }

  void add_scenario(CLI::App* app) {
    add_params(app);
    app->add_option("--scenario", scenario_path, "Scenario JSON file (overrides other flags)");
    app->add_option("--t", t, "Request duration (hours)");
    app->add_option("--amplitude", amplitude, "Requested amplitude in watts, or 'max'");
    app->add_option("--scheme", scheme, "auto | indiv | coord | upper");
    app->add_option("--mode", mode, "longest | probabilistic");
    app->add_option("--sampling", sampling, "stratified | uniform_random");
    app->add_option("--horizon", horizon, "Simulation horizon (hours)");
    app->add_option("--seed", seed, "Seed for fleet sampling and participation draws");
    app->add_option("--emit-scenario", emit_scenario, "Write the effective scenario JSON here");
  }

  ApplianceParams params() const {
    return ApplianceParams::from_band(delta, v, w, p, parse_appliance_kind(appliance), temp_min);
  }

  Scenario build() const {
    Scenario s;
    if (!scenario_path.empty()) {
      s = load_scenario(scenario_path);
    } else {
      ScenarioClass c{"fleet", params(), n, parse_sampling(sampling)};
      if (n == 0) throw ScenarioError("--n must be at least 1");
      s.classes.push_back(c);
      if (t) {
        ReductionRequest r;
        r.kind = parse_request_kind(kind);
        r.duration = *t;
        if (amplitude != "max") {
          try {
            r.amplitude_watts = std::stod(amplitude);
          } catch (const std::exception&) {
            throw ScenarioError("--amplitude must be a number or 'max'");
          }
        }
        s.request = r;
      }
      s.scheme = parse_scenario_scheme(scheme);
      s.mode = parse_plan_mode(mode);
      s.seed = seed;
      s.horizon_hours = horizon > 0.0 ? horizon : default_horizon(s);
      s.validate();
    }
    if (!emit_scenario.empty()) {
      std::ofstream out(emit_scenario);
      if (!out) throw IoError("cannot write scenario to '" + emit_scenario + "'");
      out << scenario_to_json(s).dump(2) << "\n";
      if (!out) throw IoError("failed writing '" + emit_scenario + "'");
    }
    return s;
  }

  static double default_horizon(const Scenario& s) {
    // Two full cycles past the request covers the rebound.
    const double cycle = s.classes.front().params.cycle_length();
    return (s.request ? s.request->duration : 0.0) + 2.0 * cycle;
  }
};

SchemePreference preference_of(ScenarioScheme s) {
  switch (s) {
    case ScenarioScheme::indiv: return SchemePreference::indiv;
    case ScenarioScheme::coord: return SchemePreference::coord;
    default: return SchemePreference::automatic;
  }
}

/// Everything a simulate/verify run produces.
struct ScenarioRun {
  std::optional<BroadcastMessage> message;
  Policy policy = Policy::normal;
  double promised_watts = 0.0;
  SimRun run;
  PowerTrace baseline;
  SimReport report;
};

ScenarioRun run_scenario(const Scenario& s) {
  const auto& cls = s.single_class();
  const auto fleet = build_fleet(s.fleet_spec(cls));
  const RequestKind kind = s.request ? s.request->kind : RequestKind::reduce;

  SimOptions options;
  options.horizon = s.horizon_hours;
  options.seed = s.seed;
  const auto baseline = simulate(fleet, cls.params, options);

  std::optional<BroadcastMessage> message;
  double promised = 0.0;
  if (s.request && s.scheme == ScenarioScheme::upper) {
    options.policy = Policy::min_energy;
    options.policy_kind = kind;
    promised = quote(cls.params, cls.count, s.request->duration, Scheme::upper_bound, kind).watts;
  } else if (s.request) {
    message = plan(*s.request, cls.params, cls.count, s.mode, preference_of(s.scheme));
    const auto scheme = message->scheme() == MessageScheme::indiv ? Scheme::indiv : Scheme::coord;
    promised = s.request->amplitude_watts
                   ? *s.request->amplitude_watts
                   : quote(cls.params, cls.count, s.request->duration, scheme, kind).watts;
    options.message = message;
  }
  auto run = simulate(fleet, cls.params, options);
  auto rep = report(run, baseline.trace, s.window_hours(), promised, cls.params.power(), kind);
  return {message, options.policy, promised, std::move(run), baseline.trace, rep};
}

void print_message(const BroadcastMessage& m) {
  const auto record = message_to_json(m);
  for (const auto& [key, value] : record.items()) {
    if (value.is_string())
      fmt::print("{}={}\n", key, value.get<std::string>());
    else
      fmt::print("{}={}\n", key, g6(value.get<double>()));
  }
}

void print_report(const SimReport& r) {
  fmt::print("avg_reduction_watts={}\n", g6(r.avg_reduction_watts));
  fmt::print("sup_deviation_watts={}\n", g6(r.sup_deviation_watts));
  fmt::print("rebound_peak_watts={}\n", g6(r.rebound_peak_watts));
  fmt::print("rebound_energy_watt_hours={}\n", g6(r.rebound_energy_watt_hours));
  fmt::print("temp_violations={}\n", r.temp_violations);
  fmt::print("over_delivery={}\n", r.over_delivery ? "true" : "false");
  fmt::print("warnings={}\n", r.warnings);
}

void write_trace(const std::string& path, const PowerTrace& trace) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_csv(out, trace);
  if (!out) throw IoError("failed writing '" + path + "'");
}

int cmd_analytic(const ScenarioFlags& f, double t, const std::string& scheme_text) {
  const auto scheme = parse_scheme(scheme_text);
  const auto kind = parse_request_kind(f.kind);
  if (!f.scenario_path.empty()) {
    const auto s = load_scenario(f.scenario_path);
    std::vector<ApplianceClass> classes;
    for (const auto& c : s.classes) classes.emplace_back(c.params, c.count);
    const auto q = portfolio_quote(Portfolio(std::move(classes)), t, scheme, kind);
    for (std::size_t i = 0; i < s.classes.size(); ++i) {
      if (q.per_class[i])
        fmt::print("class {}: fraction {}, {} W\n", s.classes[i].name, g6(q.per_class[i]->fraction),
                   g6(q.per_class[i]->watts));
      else
        fmt::print("class {}: infeasible duration, 0 W\n", s.classes[i].name);
    }
    fmt::print("total {} W\n", g6(q.watts));
    return kExitOk;
  }
  const auto q = quote(f.params(), f.n, t, scheme, kind);
  fmt::print("fraction {}, {} W\n", g6(q.fraction), g6(q.watts));
  return kExitOk;
}

int cmd_sweep(const ScenarioFlags& f, double t_end, double step, bool knots,
              const std::string& out_path) {
  if (!(step > 0.0) || !(t_end >= 0.0)) throw std::invalid_argument("invalid sweep grid");
  const auto kind = parse_request_kind(f.kind);
  const auto params = kind == RequestKind::reduce ? f.params() : mirror(f.params());
  std::vector<double> grid;
  for (std::size_t k = 0; k * step <= t_end * (1.0 + 1e-12); ++k) grid.push_back(k * step);
  if (knots) {
    for (double t : {params.off_duration(), indiv_max_duration(params), coord_max_duration(params)})
      if (t <= t_end) grid.push_back(t);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(), [](double a, double b) {
                 return std::abs(a - b) <= kTimeEpsilon;
               }),
               grid.end());
  }
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw IoError("cannot open '" + out_path + "' for writing");
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  out << "t_hours,upper,indiv,coord\n";
  for (double t : grid) {
    out << fmt::format("{:.17g},{:.17g},{:.17g},", t, upper_bound_fraction(params, t),
                       indiv_fraction(params, t));
    if (t <= coord_max_duration(params)) out << fmt::format("{:.17g}", coord_fraction(params, t));
    out << "\n";
  }
  if (!out) throw IoError("failed writing sweep output");
  return kExitOk;
}

int cmd_plan(const ScenarioFlags& f) {
  const auto s = f.build();
  if (!s.request) throw ScenarioError("plan needs a request (--t or scenario request)");
  if (s.scheme == ScenarioScheme::upper)
    throw ScenarioError("the upper bound is not a broadcast scheme");
  const auto& cls = s.single_class();
  print_message(plan(*s.request, cls.params, cls.count, s.mode, preference_of(s.scheme)));
  return kExitOk;
}

int cmd_simulate(const ScenarioFlags& f, const std::string& out, const std::string& baseline_out) {
  const auto s = f.build();
  const auto r = run_scenario(s);
  if (!out.empty()) write_trace(out, r.run.trace);
  if (!baseline_out.empty()) write_trace(baseline_out, r.baseline);
  if (r.message) print_message(*r.message);
  print_report(r.report);
  return kExitOk;
}

int cmd_verify(const ScenarioFlags& f, double tolerance) {
  const auto s = f.build();
  const auto r = run_scenario(s);
  const auto& rep = r.report;
  const bool amplitude_ok = std::abs(rep.avg_reduction_watts - r.promised_watts) <= tolerance;
  // Constancy applies to the broadcast schemes only.
  const bool constancy_ok = r.policy == Policy::min_energy ||
                            (rep.sup_deviation_watts <= tolerance && !rep.over_delivery);
  const bool safe = rep.temp_violations == 0;
  fmt::print("analytic_watts={}\n", g6(r.promised_watts));
  fmt::print("simulated_watts={}\n", g6(rep.avg_reduction_watts));
  fmt::print("sup_deviation_watts={}\n", g6(rep.sup_deviation_watts));
  fmt::print("over_delivery={}\n", rep.over_delivery ? "true" : "false");
  fmt::print("temp_violations={}\n", rep.temp_violations);
  const bool ok = amplitude_ok && constancy_ok && safe;
  fmt::print("result={}\n", ok ? "PASS" : "FAIL");
  return ok ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Demand-response flexibility engine for thermostat appliance fleets"};
  app.require_subcommand(1);

  ScenarioFlags flags;
  double t = 0.0;
  std::string scheme = "indiv";
  auto* analytic = app.add_subcommand("analytic", "Closed-form quote for one class or a portfolio");
  flags.add_params(analytic);
  analytic->add_option("--t", t, "Duration (hours)")->required();
  analytic->add_option("--scheme", scheme, "upper | indiv | coord");
  analytic->add_option("--scenario", flags.scenario_path, "Portfolio: sum over scenario classes");

  double t_end = 2.0;
  double step = 0.05;
  bool knots = true;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "CSV of fractions versus duration");
  flags.add_params(sweep);
  sweep->add_option("--t-end", t_end, "Last duration of the grid (hours)");
  sweep->add_option("--step", step, "Grid step (hours)");
  sweep->add_flag("!--no-knots", knots, "Do not insert the curves' knot durations");
  sweep->add_option("--out", sweep_out, "Output CSV (default: stdout)");

  auto* plan_cmd = app.add_subcommand("plan", "Plan the broadcast message for a request");
  flags.add_scenario(plan_cmd);

  std::string out;
  std::string baseline_out;
  auto* sim = app.add_subcommand("simulate", "Simulate a scenario and report");
  flags.add_scenario(sim);
  sim->add_option("--out", out, "Trace CSV");
  sim->add_option("--baseline-out", baseline_out, "Baseline trace CSV");

  double tolerance = 5.0;
  auto* verify = app.add_subcommand("verify", "Check simulation against the analytic quote");
  flags.add_scenario(verify);
  verify->add_option("--tolerance", tolerance, "Allowed mismatch (watts)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*analytic) return cmd_analytic(flags, t, scheme);
    if (*sweep) return cmd_sweep(flags, t_end, step, knots, sweep_out);
    if (*plan_cmd) return cmd_plan(flags);
    if (*sim) return cmd_simulate(flags, out, baseline_out);
    if (*verify) return cmd_verify(flags, tolerance);
  } catch (const IoError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitIo;
  } catch (const InfeasibleDuration& e) {
    fmt::print(std::cerr, "infeasible duration: {}\n", e.what());
    return kExitInvalid;
  } catch (const InfeasibleAmplitude& e) {
    fmt::print(std::cerr, "infeasible amplitude: {}\n", e.what());
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    fmt::print(std::cerr, "invalid input: {}\n", e.what());
    return kExitInvalid;
  } catch (const std::runtime_error& e) {
    // Unreadable scenario files.
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitIo;
  }
  return kExitInvalid;
}
