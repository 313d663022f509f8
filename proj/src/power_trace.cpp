#include "tclflex/power_trace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace tclflex {

PowerTrace::PowerTrace(std::vector<Breakpoint> breakpoints, double horizon)
    : breakpoints_(std::move(breakpoints)), horizon_(horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("trace horizon must be positive");
  if (breakpoints_.empty() || breakpoints_.front().time != 0.0)
    throw std::invalid_argument("trace must start with a breakpoint at time 0");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i)
    if (!(breakpoints_[i].time > breakpoints_[i - 1].time))
      throw std::invalid_argument("trace times must be strictly increasing");
  if (!(breakpoints_.back().time < horizon))
    throw std::invalid_argument("trace breakpoints must lie before the horizon");
}

PowerTrace PowerTrace::constant(double power, double horizon) {
  return PowerTrace({{0.0, power}}, horizon);
}

double PowerTrace::value_at(double t) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t,
                             [](double x, const Breakpoint& b) { return x < b.time; });
  if (it == breakpoints_.begin()) return breakpoints_.front().power;
  return std::prev(it)->power;
}

template <class F>
void PowerTrace::for_each_segment(double a, double b, F&& f) const {
  a = std::max(a, 0.0);
  b = std::min(b, horizon_);
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const double start = std::max(breakpoints_[i].time, a);
    const double end = std::min(i + 1 < breakpoints_.size() ? breakpoints_[i + 1].time : horizon_, b);
    if (end > start) f(start, end, breakpoints_[i].power);
  }
}

double PowerTrace::integral(double a, double b) const {
  double sum = 0.0;
  for_each_segment(a, b, [&](double s, double e, double p) { sum += p * (e - s); });
  return sum;
}

double PowerTrace::mean(double a, double b) const {
  const double lo = std::max(a, 0.0);
  const double hi = std::min(b, horizon_);
  if (!(hi > lo)) throw std::invalid_argument("mean over an empty window");
  return integral(lo, hi) / (hi - lo);
}

double PowerTrace::ess_min(double a, double b) const {
  double m = std::numeric_limits<double>::infinity();
  for_each_segment(a, b, [&](double s, double e, double p) {
    if (e - s > kTimeEpsilon) m = std::min(m, p);
  });
  return m;
}

double PowerTrace::ess_max(double a, double b) const {
  double m = -std::numeric_limits<double>::infinity();
  for_each_segment(a, b, [&](double s, double e, double p) {
    if (e - s > kTimeEpsilon) m = std::max(m, p);
  });
  return m;
}

double PowerTrace::positive_integral(double a, double b) const {
  double sum = 0.0;
  for_each_segment(a, b, [&](double s, double e, double p) {
    if (p > 0.0) sum += p * (e - s);
  });
  return sum;
}

PowerTrace combine(const PowerTrace& a, double scale_a, const PowerTrace& b, double scale_b) {
  if (a.horizon() != b.horizon())
    throw std::invalid_argument("traces cover different horizons");
  std::vector<double> times;
  times.reserve(a.size() + b.size());
  for (const auto& bp : a.breakpoints()) times.push_back(bp.time);
  for (const auto& bp : b.breakpoints()) times.push_back(bp.time);
  std::sort(times.begin(), times.end());

  std::vector<Breakpoint> out;
  out.reserve(times.size());
  std::size_t i = 0;
  while (i < times.size()) {
    const double start = times[i];
    std::size_t j = i;
    while (j + 1 < times.size() && times[j + 1] - start <= kTimeEpsilon) ++j;
    // A merged cluster takes the values in force after its last member.
    const double probe = times[j];
    const double value = scale_a * a.value_at(probe) + scale_b * b.value_at(probe);
    if (out.empty() || out.back().power != value) out.push_back({start, value});
    i = j + 1;
  }
  return PowerTrace(std::move(out), a.horizon());
}

PowerTrace baseline_delta(const PowerTrace& trace, const PowerTrace& baseline) {
  return combine(trace, 1.0, baseline, -1.0);
}

void write_csv(std::ostream& out, const PowerTrace& trace) {
  out << "time_hours,power_watts\n";
  for (const auto& bp : trace.breakpoints()) out << fmt::format("{:.17g},{:.17g}\n", bp.time, bp.power);
}

std::string to_csv(const PowerTrace& trace) {
  std::ostringstream os;
  write_csv(os, trace);
  return os.str();
}

}  // namespace tclflex
