#include <gtest/gtest.h>

#include <filesystem>

#include "rulecbf/scenario.hpp"

using namespace rulecbf;

namespace {

const char* kMinimal = R"({
  "name": "minimal",
  "map": {
    "drivable_area": {"centerline": [[0, 1.75], [100, 1.75]], "width": 7.0},
    "lanes": [{"id": "ego", "centerline": [[0, 0], [100, 0]], "width": 3.5}]
  },
  "ego": {"lane": "ego", "s": 5.0, "v": 4.0}
})";

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  EXPECT_NE(at, std::string::npos) << from;
  return s.replace(at, from.size(), to);
}

}  // namespace

TEST(Scenario, DefaultsAreTheCaseStudyParameters) {
  const ScenarioSpec sc = parse_scenario(kMinimal);
  const Limits& L = sc.limits;
  EXPECT_EQ(L.v_max, 10.0);
  EXPECT_EQ(L.v_min, 0.0);
  EXPECT_EQ(L.a_max, 3.5);
  EXPECT_EQ(L.a_min, -3.5);
  EXPECT_EQ(L.jerk_max, 4.0);
  EXPECT_EQ(L.jerk_min, -4.0);
  EXPECT_EQ(L.delta_max, 1.0);
  EXPECT_EQ(L.delta_min, -1.0);
  EXPECT_EQ(L.omega_max, 0.5);
  EXPECT_EQ(L.omega_min, -0.5);
  EXPECT_EQ(L.steer_max, 2.0);
  EXPECT_EQ(L.steer_min, -2.0);

  const VehicleGeometry& g = sc.ego.geometry;
  EXPECT_EQ(g.width, 1.8);
  EXPECT_EQ(g.length, 4.0);
  EXPECT_EQ(g.l_f, 2.0);
  EXPECT_EQ(g.l_r, 2.0);

  const RuleParams& R = sc.rules;
  EXPECT_EQ(R.r1.d, 1.0);
  EXPECT_EQ(R.r1.eta, 0.067);
  EXPECT_EQ(R.v_max_s, 7.0);
  EXPECT_EQ(R.v_min_s, 3.0);
  EXPECT_EQ(R.a_max_s, 2.5);
  EXPECT_EQ(R.a_lat_m, 3.5);
  EXPECT_EQ(R.a_lat_s, 1.75);
  EXPECT_EQ(R.r7.d, 0.3);
  EXPECT_EQ(R.r7.eta, 0.13);
  EXPECT_EQ(R.r8_left.d, 0.5);
  EXPECT_EQ(R.r8_right.d, 0.5);
  EXPECT_EQ(R.r8_front.d, 1.0);
  EXPECT_EQ(R.r8_left.eta, 0.036);
  EXPECT_EQ(R.r8_right.eta, 0.036);
  EXPECT_EQ(R.r8_front.eta, 2.0);

  EXPECT_EQ(sc.planner.v_desired, 4.0);
  EXPECT_EQ(sc.planner.cover_beta, 2.0);
  EXPECT_EQ(sc.priority.classes, PriorityStructure::case_study().classes);
}

TEST(Scenario, EgoOnTheLane) {
  const ScenarioSpec sc = parse_scenario(kMinimal);
  EXPECT_EQ(sc.ego.lane, "ego");
  EXPECT_EQ(sc.ego.initial.s, 5.0);
  EXPECT_EQ(sc.ego.initial.v, 4.0);
  EXPECT_EQ(sc.ego.initial.d, 0.0);
}

TEST(Scenario, MissingEgoIsNamed) {
  const std::string text = replace(kMinimal, R"(,
  "ego": {"lane": "ego", "s": 5.0, "v": 4.0})", "");
  const std::string err = error_of(text);
  EXPECT_NE(err.find("ego"), std::string::npos) << err;
}

TEST(Scenario, FieldErrorsCarryThePath) {
  const std::string err = error_of(replace(kMinimal, R"("width": 3.5)", R"("width": "wide")"));
  EXPECT_NE(err.find("lanes"), std::string::npos) << err;
  EXPECT_NE(err.find("width"), std::string::npos) << err;
  EXPECT_NE(error_of(replace(kMinimal, R"("lane": "ego")", R"("lane": "nope")")), "");
  EXPECT_NE(error_of("{not json"), "");
  EXPECT_NE(error_of(replace(kMinimal, R"("name": "minimal",)", R"("name": "minimal", "bogus": 1,)")), "");
}

TEST(Scenario, RoundTripIsIdentity) {
  for (const char* f : {"empty_road.json", "scenario1.json", "scenario2.json", "scenario3.json"}) {
    const ScenarioSpec a = load_scenario(std::filesystem::path(RULECBF_SCENARIO_DIR) / f);
    const std::string text = dump_scenario(a);
    const ScenarioSpec b = parse_scenario(text);
    EXPECT_EQ(dump_scenario(b), text) << f;
    EXPECT_EQ(b.instances.size(), a.instances.size());
    EXPECT_EQ(b.planner.class_k_by_rule, a.planner.class_k_by_rule);
    EXPECT_EQ(b.ego.initial.s, a.ego.initial.s);
  }
}

TEST(Scenario, SaveAndLoadFile) {
  const ScenarioSpec a = parse_scenario(kMinimal);
  const auto path = std::filesystem::temp_directory_path() / "rulecbf_roundtrip.json";
  save_scenario(a, path);
  EXPECT_EQ(dump_scenario(load_scenario(path)), dump_scenario(a));
  std::filesystem::remove(path);
  EXPECT_THROW(load_scenario(path), ScenarioError);
}

TEST(Instances, StaticPedestrianNeverMoves) {
  InstanceSpec p;
  p.kind = InstanceKind::kPedestrian;
  p.motion.path = {Vec2(3.0, -1.0)};
  for (double t : {0.0, 1.0, 17.5}) {
    const auto s = instance_state(p, t);
    EXPECT_EQ(s.position, Vec2(3.0, -1.0));
    EXPECT_EQ(s.velocity, Vec2::Zero());
  }
}

TEST(Instances, ConstantSpeedAlongScript) {
  InstanceSpec v;
  v.kind = InstanceKind::kActiveVehicle;
  v.motion.path = {Vec2(0.0, 0.0), Vec2(10.0, 0.0)};
  v.motion.speed = 2.0;
  const auto s = instance_state(v, 3.0);
  EXPECT_NEAR(s.position.x(), 6.0, 1e-12);
  EXPECT_NEAR(s.position.y(), 0.0, 1e-12);
  EXPECT_NEAR(s.velocity.x(), 2.0, 1e-12);
  EXPECT_NEAR(s.heading, 0.0, 1e-12);
}

TEST(Instances, ExhaustedScriptHoldsFinalPose) {
  InstanceSpec v;
  v.kind = InstanceKind::kActiveVehicle;
  v.motion.path = {Vec2(0.0, 0.0), Vec2(0.0, 4.0)};
  v.motion.speed = 2.0;
  const auto s = instance_state(v, 10.0);
  EXPECT_NEAR(s.position.y(), 4.0, 1e-12);
  EXPECT_EQ(s.velocity, Vec2::Zero());
  EXPECT_NEAR(s.heading, M_PI / 2, 1e-12);
}

TEST(Instances, WaitsForStartTime) {
  InstanceSpec p;
  p.kind = InstanceKind::kPedestrian;
  p.motion.path = {Vec2(0.0, 0.0), Vec2(-10.0, 0.0)};
  p.motion.speed = 1.0;
  p.motion.start_time = 2.0;
  EXPECT_EQ(instance_state(p, 1.0).position, Vec2(0.0, 0.0));
  EXPECT_NEAR(instance_state(p, 4.5).position.x(), -2.5, 1e-12);
}

TEST(Candidate, ParsesWaypointsAndProfile) {
  const auto c = parse_candidate(R"({"waypoints": [[0,0],[10,0]], "speed_profile": [[0,1],[10,3]]})");
  ASSERT_EQ(c.waypoints.size(), 2u);
  EXPECT_NEAR(c.speed_at(5.0, 9.0), 2.0, 1e-12);
  EXPECT_EQ(c.speed_at(-1.0, 9.0), 1.0);
  EXPECT_EQ(c.speed_at(50.0, 9.0), 3.0);
  EXPECT_EQ(parse_candidate(R"({"waypoints": [[0,0],[10,0]]})").speed_at(3.0, 9.0), 9.0);
  EXPECT_THROW(parse_candidate(R"({"waypoints": [[0,0]]})"), ScenarioError);
  EXPECT_THROW(parse_candidate(R"({"waypoints": [[0,0],[1,0]], "speed_profile": [[2,1],[1,1]]})"), ScenarioError);
}
