#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "tclflex/analytics.hpp"

using namespace tclflex;

namespace {

const ApplianceParams kSetA = ApplianceParams::from_band(1.0, 0.4, 1.0, 1.0);
const ApplianceParams kSetB = ApplianceParams::from_band(1.0, 2.0, 1.0, 1.0);
constexpr double k6 = 5e-7;  // half a unit in the sixth decimal

oracle::Model model(const ApplianceParams& p) {
  return {p.delta(), p.drive_rate(), p.drift_rate(), p.power()};
}

const std::vector<double> kRates = {0.2, 0.5, 1.0, 2.0, 5.0};

}  // namespace

TEST(Analytics, SteadyStatePowerExamples) {
  EXPECT_DOUBLE_EQ(steady_state_power(kSetA, 1400), 1000.0);
  EXPECT_DOUBLE_EQ(steady_state_power(ApplianceParams::from_band(1, 1, 1, 1), 2), 1.0);
  EXPECT_DOUBLE_EQ(steady_state_power(kSetB, 3000), 1000.0);
  EXPECT_DOUBLE_EQ(reference_power(kSetA, 1400, RequestKind::increase), 400.0);
}

TEST(Analytics, SurvivalExamples) {
  EXPECT_NEAR(survival(kSetA, 0.35), 0.364286, k6);
  EXPECT_EQ(survival(kSetA, 1.0 / 1.4), 0.0);
  EXPECT_EQ(survival(kSetA, 2.0), 0.0);
  EXPECT_NEAR(survival(kSetA, 0.0), 0.714286, k6);
}

TEST(Analytics, SurvivalMatchesPhaseEnumeration) {
  for (double v : {0.4, 2.0}) {
    const auto p = ApplianceParams::from_band(1.0, v, 1.0, 1.0);
    for (double t : {0.0, 0.1, 0.25, 0.35, 0.5, 0.7}) {
      EXPECT_NEAR(survival(p, t), oracle::survival_enumeration(model(p), t), 2e-6)
          << "v=" << v << " t=" << t;
    }
  }
}

TEST(Analytics, IndivFractionExamples) {
  EXPECT_EQ(indiv_fraction(kSetA, 0.0), 1.0);
  EXPECT_NEAR(indiv_fraction(kSetA, 0.35), 0.51, 1e-12);
  EXPECT_NEAR(indiv_fraction(kSetA, 0.714286), 0.0, 1e-6);
  EXPECT_EQ(indiv_fraction(kSetA, 5.0), 0.0);
  EXPECT_NEAR(indiv_max_duration(kSetA), 0.714286, k6);
}

TEST(Analytics, UpperBoundExamples) {
  EXPECT_DOUBLE_EQ(upper_bound_fraction(kSetA, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(upper_bound_fraction(kSetA, 0.5), 0.75);
  EXPECT_DOUBLE_EQ(upper_bound_fraction(kSetA, 2.0), 0.25);
  EXPECT_EQ(upper_bound_fraction(kSetA, 0.0), 1.0);
}

TEST(Analytics, UpperBoundMatchesMinEnergyQuadrature) {
  // R_sup = 1 - E_min / (t * steady consumption per appliance).
  for (const auto& p : {kSetA, kSetB}) {
    const auto m = model(p);
    const double per_app = p.power() * p.on_fraction();
    for (double t : {0.05, 0.25, 0.5, 1.0, 1.5, 2.0, 4.0}) {
      const double e = oracle::min_energy_quadrature(m, t);
      EXPECT_NEAR(min_energy_per_appliance(p, t), e, 1e-10) << t;
      EXPECT_NEAR(upper_bound_fraction(p, t), 1.0 - e / (t * per_app), 1e-9) << t;
    }
  }
}

TEST(Analytics, MinEnergyExamples) {
  EXPECT_NEAR(min_energy_per_appliance(kSetA, 0.5), 0.089286, k6);
  EXPECT_NEAR(min_energy_per_appliance(kSetA, 2.0), 1.071429, k6);
  EXPECT_EQ(min_energy_per_appliance(kSetA, 0.0), 0.0);
  EXPECT_EQ(min_energy_per_appliance(kSetB, 0.0), 0.0);
}

TEST(Analytics, MinEnergySmoothAtKnot) {
  for (const auto& p : {kSetA, kSetB}) {
    const double knot = p.delta() / p.drift_rate();
    const double h = 1e-6;
    const double left = min_energy_per_appliance(p, knot - 0.5 * h);
    const double mid = min_energy_per_appliance(p, knot);
    const double right = min_energy_per_appliance(p, knot + 0.5 * h);
    // Value at the knot from the linear branch's closed form.
    EXPECT_NEAR(mid, p.power() * p.delta() / (2.0 * (p.drive_rate() + p.drift_rate())), 1e-12);
    const double slope_l = (mid - left) / (0.5 * h);
    const double slope_r = (right - mid) / (0.5 * h);
    EXPECT_NEAR(slope_l, slope_r, 1e-5);
    EXPECT_NEAR(slope_r, p.power() * p.on_fraction(), 1e-5);
  }
}

TEST(Analytics, CoordMaxDurationExamples) {
  EXPECT_NEAR(coord_max_duration(kSetA), 1.224490, k6);
  EXPECT_NEAR(coord_max_duration(kSetB), 0.444444, k6);
  EXPECT_DOUBLE_EQ(coord_max_duration(ApplianceParams::from_band(1, 1, 1, 1)), 0.75);
  EXPECT_DOUBLE_EQ(coord_max_duration(ApplianceParams::from_band(1, 3, 3, 1)), 0.25);
}

TEST(Analytics, CoordScheduleExamples) {
  const auto a = coord_schedule(kSetA, 0.8);
  EXPECT_NEAR(a.t_tilde, 0.333333, k6);
  EXPECT_NEAR(a.y1, 0.833333, k6);
  EXPECT_NEAR(a.y2, 2.166667, k6);
  EXPECT_NEAR(a.y3, 2.7, 1e-12);
  EXPECT_NEAR(a.fraction, 0.533333, k6);
  EXPECT_NEAR(a.hat_t, 0.866667, k6);
  EXPECT_NEAR(coord_constraint_slack(kSetA, a).second_batch_on_late, 0.0, 1e-12);

  const auto b = coord_schedule(kSetB, 0.4);
  EXPECT_NEAR(b.t_tilde, 0.1, 1e-12);
  EXPECT_NEAR(b.y1, 0.05, 1e-12);
  EXPECT_NEAR(b.y2, 0.4, 1e-12);
  EXPECT_NEAR(b.y3, 1.1, 1e-12);
  EXPECT_NEAR(b.hat_t, 0.45, 1e-12);
  EXPECT_NEAR(b.fraction, 0.7, 1e-12);

  EXPECT_THROW(coord_schedule(kSetA, 1.3), InfeasibleDuration);
  EXPECT_THROW(coord_schedule(kSetA, -0.1), std::invalid_argument);
}

TEST(Analytics, CoordFractionExamples) {
  EXPECT_NEAR(coord_fraction(kSetA, 0.8), 0.533333, k6);
  EXPECT_NEAR(coord_fraction(kSetB, 0.4), 0.7, 1e-12);
  EXPECT_EQ(coord_fraction(kSetA, 0.0), 1.0);
  EXPECT_THROW(coord_fraction(kSetA, 1.3), InfeasibleDuration);
}

TEST(Analytics, CoordFractionAtMaxDurationIsDriveShare) {
  for (double v : kRates)
    for (double w : kRates) {
      const auto p = ApplianceParams::from_band(1.7, v, w, 1.0);
      EXPECT_NEAR(coord_fraction(p, coord_max_duration(p)), v / (v + w), 1e-12);
    }
}

TEST(Analytics, CoordTTildeIsSmallestFeasible) {
  // Search the first-batch end directly against the four inequalities.
  for (const auto& p : {kSetA, kSetB, ApplianceParams::from_band(1, 1, 1, 1)}) {
    const double tmax = coord_max_duration(p);
    for (double frac : {0.1, 0.5, 0.9, 1.0}) {
      const double t = frac * tmax;
      const auto found = oracle::coord_t_tilde_search(model(p), t);
      ASSERT_TRUE(found.has_value()) << t;
      EXPECT_NEAR(coord_schedule(p, t).t_tilde, *found, 1e-5 * t + 1e-12) << t;
    }
    EXPECT_FALSE(oracle::coord_t_tilde_search(model(p), tmax * 1.01, 200000).has_value());
  }
}

TEST(Analytics, CoordConstraintsHoldAcrossSweep) {
  for (double v : kRates)
    for (double w : kRates) {
      const auto p = ApplianceParams::from_band(1.0, v, w, 1.0);
      const double tmax = coord_max_duration(p);
      for (int k = 0; k <= 40; ++k) {
        const double t = tmax * k / 40.0;
        const auto s = coord_schedule(p, t);
        const auto slack = coord_constraint_slack(p, s);
        EXPECT_GE(slack.min(), -1e-12) << "v=" << v << " w=" << w << " t=" << t;
        // Direct evaluation of the four inequalities, independent of the slack struct.
        const double c = p.cycle_length();
        EXPECT_GE(s.y3, s.y2 - 1e-12);
        EXPECT_GE(s.y3, c - t - 1e-12);
        EXPECT_LE(s.y1, p.on_duration() - t + 1e-12);
        EXPECT_LE(t - s.t_tilde, v / w * (s.t_tilde + s.y1) + 1e-12);
        EXPECT_NEAR(s.fraction, coord_fraction(p, t), 1e-15);
      }
    }
}

TEST(Analytics, DominanceOrdering) {
  for (double v : kRates)
    for (double w : kRates) {
      const auto p = ApplianceParams::from_band(1.0, v, w, 1.0);
      const double tmax = coord_max_duration(p);
      for (int k = 1; k <= 60; ++k) {
        const double t = 3.0 * tmax * k / 60.0;
        const double ind = indiv_fraction(p, t);
        const double up = upper_bound_fraction(p, t);
        if (t <= tmax) {
          const double co = coord_fraction(p, t);
          EXPECT_LE(ind, co + 1e-12) << v << " " << w << " " << t;
          EXPECT_LE(co, up + 1e-12) << v << " " << w << " " << t;
        }
        EXPECT_LE(ind, up + 1e-12);
      }
    }
}

TEST(Analytics, UpperBoundContinuousAndNonIncreasing) {
  for (double w : kRates) {
    const auto p = ApplianceParams::from_band(1.0, 1.0, w, 1.0);
    const double knot = 1.0 / w;
    EXPECT_DOUBLE_EQ(upper_bound_fraction(p, knot), 0.5);
    EXPECT_NEAR(upper_bound_fraction(p, knot * (1 - 1e-9)), 0.5, 1e-8);
    EXPECT_NEAR(upper_bound_fraction(p, knot * (1 + 1e-9)), 0.5, 1e-8);
    double prev = 1.0;
    for (int k = 0; k <= 400; ++k) {
      const double r = upper_bound_fraction(p, knot * 4.0 * k / 400.0);
      EXPECT_LE(r, prev + 1e-15);
      EXPECT_GT(r, 0.0);
      prev = r;
    }
  }
}

TEST(Analytics, SurvivalIsOnShareTimesIndiv) {
  for (double v : kRates)
    for (double w : kRates) {
      const auto p = ApplianceParams::from_band(1.0, v, w, 1.0);
      for (int k = 0; k <= 30; ++k) {
        const double t = k * 0.05;
        EXPECT_NEAR(survival(p, t), w / (v + w) * indiv_fraction(p, t), 1e-15);
      }
    }
}

TEST(Analytics, QuoteExamples) {
  EXPECT_NEAR(quote(kSetA, 1400, 0.35, Scheme::indiv, RequestKind::reduce).watts, 510.0, 1e-9);
  EXPECT_NEAR(quote(kSetA, 1400, 0.35, Scheme::indiv, RequestKind::increase).watts, 204.0, 1e-9);
  EXPECT_NEAR(quote(kSetB, 3000, 0.4, Scheme::coord, RequestKind::reduce).watts, 700.0, 1e-9);
  EXPECT_THROW(quote(kSetA, 1400, 1.3, Scheme::coord, RequestKind::reduce), InfeasibleDuration);
  const auto q = quote(kSetA, 1400, 1.0, Scheme::min_energy_policy, RequestKind::reduce);
  EXPECT_DOUBLE_EQ(q.fraction, 0.5);
  EXPECT_EQ(q.scheme, Scheme::min_energy_policy);
}

TEST(Analytics, QuoteWattsIsFractionTimesReference) {
  for (auto kind : {RequestKind::reduce, RequestKind::increase})
    for (auto s : {Scheme::upper_bound, Scheme::indiv, Scheme::coord})
      for (double t : {0.05, 0.2, 0.4}) {
        const auto q = quote(kSetB, 3000, t, s, kind);
        EXPECT_GE(q.fraction, 0.0);
        EXPECT_LE(q.fraction, 1.0);
        EXPECT_DOUBLE_EQ(q.watts, q.fraction * reference_power(kSetB, 3000, kind));
      }
}

TEST(Analytics, IncreaseIsMirroredReduction) {
  for (const auto& p : {kSetA, kSetB})
    for (auto s : {Scheme::upper_bound, Scheme::indiv, Scheme::coord, Scheme::min_energy_policy})
      for (double t : {0.0, 0.1, 0.2, 0.35}) {
        const auto inc = quote(p, 100, t, s, RequestKind::increase);
        const auto red = quote(mirror(p), 100, t, s, RequestKind::reduce);
        EXPECT_EQ(inc.fraction, red.fraction);
        EXPECT_EQ(inc.watts, red.watts);
      }
}

TEST(Analytics, PortfolioExamples) {
  const Portfolio mixed({ApplianceClass(kSetA, 1400), ApplianceClass(kSetB, 3000)});
  const auto q = portfolio_quote(mixed, 0.35, Scheme::indiv, RequestKind::reduce);
  EXPECT_NEAR(q.watts, 510.0, 1e-9);
  ASSERT_EQ(q.per_class.size(), 2u);

  const Portfolio twice({ApplianceClass(kSetA, 1400), ApplianceClass(kSetA, 1400)});
  EXPECT_NEAR(portfolio_quote(twice, 0.35, Scheme::indiv, RequestKind::reduce).watts, 1020.0,
              1e-9);

  const Portfolio single({ApplianceClass(kSetB, 3000)});
  EXPECT_EQ(portfolio_quote(single, 0.4, Scheme::coord, RequestKind::reduce).watts,
            quote(kSetB, 3000, 0.4, Scheme::coord, RequestKind::reduce).watts);

  // Set B cannot coordinate for 0.8 h; it contributes nothing.
  const auto c = portfolio_quote(mixed, 0.8, Scheme::coord, RequestKind::reduce);
  EXPECT_NEAR(c.watts, quote(kSetA, 1400, 0.8, Scheme::coord, RequestKind::reduce).watts, 1e-9);
  EXPECT_TRUE(c.per_class[0].has_value());
  EXPECT_FALSE(c.per_class[1].has_value());

  EXPECT_THROW(Portfolio({}), std::invalid_argument);
}

TEST(Analytics, ParseNames) {
  EXPECT_EQ(parse_scheme("upper"), Scheme::upper_bound);
  EXPECT_EQ(parse_scheme("coord"), Scheme::coord);
  EXPECT_EQ(parse_request_kind("increase"), RequestKind::increase);
  EXPECT_THROW(parse_scheme("best"), std::invalid_argument);
}
