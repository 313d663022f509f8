// Piecewise-constant power over [0, horizon).

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace tclflex {

/// Breakpoints closer than this (hours) are treated as simultaneous, and
/// segments shorter than this are ignored by the essential extrema below.
inline constexpr double kTimeEpsilon = 1e-9;

struct Breakpoint {
  double time = 0.0;
  double power = 0.0;
  bool operator==(const Breakpoint&) const = default;
};

/// Power holds on [time_i, time_{i+1}); the last value holds up to the horizon.
/// Invariants: at least one breakpoint, first time 0, times strictly
/// increasing and below the horizon. Values may be negative (differences).
class PowerTrace {
 public:
  /// Throws std::invalid_argument on a broken invariant.
  PowerTrace(std::vector<Breakpoint> breakpoints, double horizon);

  static PowerTrace constant(double power, double horizon);

  std::span<const Breakpoint> breakpoints() const { return breakpoints_; }
  double horizon() const { return horizon_; }
  std::size_t size() const { return breakpoints_.size(); }

  /// Value on the segment containing t (t in [0, horizon)).
  double value_at(double t) const;
  /// Integral over [a, b], clipped to [0, horizon].
  double integral(double a, double b) const;
  double mean(double a, double b) const;
  /// Essential minimum/maximum over [a, b): segments shorter than
  /// kTimeEpsilon inside the window are skipped.
  double ess_min(double a, double b) const;
  double ess_max(double a, double b) const;
  /// Integral of max(value, 0) over [a, b].
  double positive_integral(double a, double b) const;

  bool operator==(const PowerTrace&) const = default;

 private:
  template <class F>
  void for_each_segment(double a, double b, F&& f) const;

  std::vector<Breakpoint> breakpoints_;
  double horizon_;
};

/// Pointwise `trace - baseline` on the merged breakpoint grid; breakpoints
/// within kTimeEpsilon of each other are merged. Throws std::invalid_argument
/// when the horizons differ.
PowerTrace baseline_delta(const PowerTrace& trace, const PowerTrace& baseline);

/// Pointwise `a * scale_a + b * scale_b` on the merged grid (same rules).
PowerTrace combine(const PowerTrace& a, double scale_a, const PowerTrace& b, double scale_b);

/// CSV with header `time_hours,power_watts`, one row per breakpoint, values
/// in round-trip precision.
void write_csv(std::ostream& out, const PowerTrace& trace);
std::string to_csv(const PowerTrace& trace);

}  // namespace tclflex
