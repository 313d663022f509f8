#include <gtest/gtest.h>

#include "tclflex/scenario.hpp"

using namespace tclflex;
using nlohmann::json;

namespace {

json set_a_scenario() {
  return json::parse(R"({
    "classes": [{"name": "A", "temp_min": 0, "delta": 1, "drive_rate": 0.4,
                 "drift_rate": 1, "power": 1, "kind": "cooling",
                 "count": 1400, "sampling": "stratified"}],
    "request": {"kind": "reduce", "duration_hours": 0.35, "amplitude_watts": "max"},
    "scheme": "auto",
    "mode": "longest",
    "horizon_hours": 7,
    "seed": 42
  })");
}

}  // namespace

TEST(Scenario, ParsesAllFields) {
  const auto s = scenario_from_json(set_a_scenario());
  ASSERT_EQ(s.classes.size(), 1u);
  EXPECT_EQ(s.classes[0].name, "A");
  EXPECT_EQ(s.classes[0].params, ApplianceParams::from_band(1, 0.4, 1, 1));
  EXPECT_EQ(s.classes[0].count, 1400u);
  ASSERT_TRUE(s.request.has_value());
  EXPECT_TRUE(s.request->is_max());
  EXPECT_EQ(s.request->duration, 0.35);
  EXPECT_EQ(s.scheme, ScenarioScheme::automatic);
  EXPECT_EQ(s.mode, PlanMode::longest);
  EXPECT_EQ(s.horizon_hours, 7.0);
  EXPECT_EQ(s.seed, 42u);
  EXPECT_EQ(s.window_hours(), 0.35);
}

TEST(Scenario, RejectsUnknownFieldsAtEveryLevel) {
  auto top = set_a_scenario();
  top["colour"] = "red";
  EXPECT_THROW(scenario_from_json(top), ScenarioError);
  auto cls = set_a_scenario();
  cls["classes"][0]["volume"] = 3;
  EXPECT_THROW(scenario_from_json(cls), ScenarioError);
  auto req = set_a_scenario();
  req["request"]["priority"] = 1;
  EXPECT_THROW(scenario_from_json(req), ScenarioError);
}

TEST(Scenario, RejectsInconsistentContent) {
  auto short_horizon = set_a_scenario();
  short_horizon["horizon_hours"] = 0.2;
  EXPECT_THROW(scenario_from_json(short_horizon), ScenarioError);
  auto no_classes = set_a_scenario();
  no_classes["classes"] = json::array();
  EXPECT_THROW(scenario_from_json(no_classes), ScenarioError);
  auto bad_scheme = set_a_scenario();
  bad_scheme["scheme"] = "fastest";
  EXPECT_THROW(scenario_from_json(bad_scheme), ScenarioError);
  auto bad_rate = set_a_scenario();
  bad_rate["classes"][0]["drive_rate"] = -1;
  EXPECT_THROW(scenario_from_json(bad_rate), ScenarioError);
  auto wrong_type = set_a_scenario();
  wrong_type["seed"] = "forty-two";
  EXPECT_THROW(scenario_from_json(wrong_type), ScenarioError);
}

TEST(Scenario, JsonRoundTrip) {
  auto j = set_a_scenario();
  j["request"]["amplitude_watts"] = 300.0;
  const auto s = scenario_from_json(j);
  const auto again = scenario_from_json(scenario_to_json(s));
  EXPECT_EQ(scenario_to_json(again), scenario_to_json(s));
  EXPECT_EQ(again.request, s.request);
}

TEST(Scenario, NullRequestUsesHalfHorizonWindow) {
  auto j = set_a_scenario();
  j["request"] = nullptr;
  const auto s = scenario_from_json(j);
  EXPECT_FALSE(s.request.has_value());
  EXPECT_EQ(s.window_hours(), 3.5);
}

TEST(Scenario, MessageRecordRoundTrip) {
  const auto a = ApplianceParams::from_band(1, 0.4, 1, 1);
  const auto b = ApplianceParams::from_band(1, 2, 1, 1);
  const auto coord = BroadcastMessage::coord(RequestKind::reduce, coord_schedule(a, 0.8), 0.7);
  const auto rec = message_to_json(coord);
  EXPECT_EQ(rec["scheme"], "coord");
  EXPECT_TRUE(rec.contains("t_tilde"));
  EXPECT_EQ(message_from_json(rec, a), coord);
  // A receiver with other rates computes another schedule, or none at all.
  const auto shorter = BroadcastMessage::coord(RequestKind::reduce, coord_schedule(a, 0.3), 1.0);
  EXPECT_THROW(message_from_json(message_to_json(shorter), b), std::invalid_argument);
  EXPECT_THROW(message_from_json(rec, b), InfeasibleDuration);

  const auto indiv = BroadcastMessage::indiv(RequestKind::increase, 0.2, 1.0);
  EXPECT_EQ(message_from_json(message_to_json(indiv), a), indiv);
}
