#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "rulecbf/passfail.hpp"

using namespace rulecbf;

namespace {

const std::filesystem::path kDir = RULECBF_SCENARIO_DIR;

ScenarioSpec scenario(const char* file) { return load_scenario(kDir / file); }

CandidateSpec straight(double y, double v) {
  CandidateSpec c;
  c.waypoints = {Vec2(0.0, y), Vec2(200.0, y)};
  c.speed_profile = {{0.0, v}, {200.0, v}};
  return c;
}

bool same_states(const Trajectory& a, const Trajectory& b) {
  if (a.samples.size() != b.samples.size()) return false;
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    const auto& p = a.samples[k];
    const auto& q = b.samples[k];
    if (p.t != q.t || p.pose.x != q.pose.x || p.pose.y != q.pose.y || p.pose.theta != q.pose.theta ||
        p.x.v != q.x.v || p.x.a != q.x.a || p.x.delta != q.x.delta || p.x.omega != q.x.omega)
      return false;
  }
  return true;
}

}  // namespace

TEST(Tracking, CenterlineStaysOnCenterline) {
  const ScenarioSpec sc = scenario("empty_road.json");
  const PlanContext ctx(sc);
  const Trajectory t = track_candidate(ctx, straight(0.0, 4.0));
  ASSERT_EQ(static_cast<int>(t.samples.size()), sc.planner.num_steps() + 1);
  for (const auto& s : t.samples) {
    EXPECT_NEAR(s.x.d, 0.0, 1e-9);
    EXPECT_NEAR(s.x.mu, 0.0, 1e-9);
    EXPECT_NEAR(s.x.v, 4.0, 1e-6);
  }
}

TEST(Tracking, FollowsTheSpeedProfile) {
  const ScenarioSpec sc = scenario("empty_road.json");
  const PlanContext ctx(sc);
  const Trajectory t = track_candidate(ctx, straight(0.0, 6.0));
  EXPECT_NEAR(t.samples.back().x.v, 6.0, 0.05);
  for (const auto& s : t.samples) EXPECT_TRUE(sc.limits.control_within(s.u, 1e-9));
}

TEST(Tracking, KinkIsRoundedAndReturned) {
  const ScenarioSpec sc = scenario("empty_road.json");
  const PlanContext ctx(sc);
  CandidateSpec c;
  c.waypoints = {Vec2(0.0, 0.0), Vec2(40.0, 0.0), Vec2(41.0, 2.0), Vec2(200.0, 2.0)};
  const Trajectory t = track_candidate(ctx, c);
  ASSERT_EQ(static_cast<int>(t.samples.size()), sc.planner.num_steps() + 1);
  double max_d = 0.0;
  for (const auto& s : t.samples) max_d = std::max(max_d, s.x.d);
  EXPECT_NEAR(t.samples.back().x.d, 2.0, 0.05);
  EXPECT_LT(max_d, 2.5);  // no large overshoot
  // the ego cannot jump: the lateral step is spread over several meters
  for (std::size_t k = 1; k < t.samples.size(); ++k) {
    EXPECT_LT(std::abs(t.samples[k].x.d - t.samples[k - 1].x.d), 0.2);
  }
}

TEST(Tracking, DivergenceThrows) {
  const ScenarioSpec sc = scenario("empty_road.json");
  const PlanContext ctx(sc);
  EXPECT_THROW(track_candidate(ctx, straight(20.0, 4.0)), CandidateError);
  CandidateSpec one;
  one.waypoints = {Vec2(0.0, 0.0)};
  EXPECT_THROW(track_candidate(ctx, one), CandidateError);
}

TEST(Replay, PlannerOutputIsReproducedExactly) {
  const ScenarioSpec sc = scenario("scenario1.json");
  const PlanContext ctx(sc);
  const PlanResult res = algorithm1(ctx);
  ASSERT_TRUE(res.feasible());
  const Trajectory r = replay_trajectory(ctx, res.trajectory);
  EXPECT_TRUE(same_states(r, res.trajectory));
  EXPECT_TRUE(same_states(replay_trajectory(ctx, r), r));
}

TEST(Replay, RejectsBadRecordings) {
  const ScenarioSpec sc = scenario("empty_road.json");
  const PlanContext ctx(sc);
  Trajectory t = track_candidate(ctx, straight(0.0, 4.0));
  Trajectory bad = t;
  bad.samples[5].u.jerk = 10.0;
  EXPECT_THROW(replay_trajectory(ctx, bad), CandidateError);
  bad = t;
  bad.samples.resize(1);
  EXPECT_THROW(replay_trajectory(ctx, bad), CandidateError);
  bad = t;
  bad.dt = 0.0;
  EXPECT_THROW(replay_trajectory(ctx, bad), CandidateError);
}

TEST(Verdict, CleanCandidatePasses) {
  const ScenarioSpec sc = scenario("empty_road.json");
  const PlanContext ctx(sc);
  const Verdict v = evaluate(ctx, track_candidate(ctx, straight(0.0, 4.0)));
  EXPECT_EQ(v.outcome, Outcome::kPass);
  EXPECT_EQ(v.highest_priority, 0);
  EXPECT_FALSE(v.alternative.has_value());
  EXPECT_FALSE(v.trace.empty());
}

TEST(Verdict, PlannerOutputPassesAsEquivalent) {
  const ScenarioSpec sc = scenario("scenario1.json");
  const PlanContext ctx(sc);
  const PlanResult res = algorithm1(ctx);
  ASSERT_TRUE(res.feasible());
  const Verdict v = evaluate(ctx, replay_trajectory(ctx, res.trajectory));
  EXPECT_EQ(v.outcome, Outcome::kPass);
  EXPECT_EQ(v.highest_priority, 1);
  ASSERT_TRUE(v.comparison.has_value());
  EXPECT_EQ(*v.comparison, Comparison::kEquivalent);
}

TEST(Verdict, SlowCenterlineFailsWithACounterexample) {
  const ScenarioSpec sc = scenario("scenario1.json");
  const PlanContext ctx(sc);
  const Verdict v = evaluate(ctx, track_candidate(ctx, load_candidate(kDir / "candidates/scenario1_slow_centerline.json")));
  EXPECT_EQ(v.outcome, Outcome::kFail);
  EXPECT_TRUE(v.failed());
  ASSERT_TRUE(v.alternative && v.alternative->feasible());
  ASSERT_TRUE(v.comparison.has_value());
  EXPECT_EQ(*v.comparison, Comparison::kFirstBetter);
  const auto alt = v.alternative->report.totals();
  const auto cand = v.candidate_report.totals();
  EXPECT_LT(alt.at("r5"), cand.at("r5"));
  EXPECT_EQ(compare_trajectories(alt, cand, sc.priority), Comparison::kFirstBetter);
  EXPECT_EQ(v.trace.back(), "alternative vs candidate: " + to_string(Comparison::kFirstBetter));
}

TEST(Verdict, EarlySwerveFailsOnAHigherClass) {
  const ScenarioSpec sc = scenario("scenario3.json");
  const PlanContext ctx(sc);
  const Verdict v = evaluate(ctx, track_candidate(ctx, load_candidate(kDir / "candidates/scenario3_early_swerve.json")));
  EXPECT_TRUE(v.failed());
  const auto cand = v.candidate_report.totals();
  EXPECT_GT(cand.at("r8"), sc.planner.score_eps);
  EXPECT_EQ(v.highest_priority, sc.priority.priority_of("r8"));
  ASSERT_TRUE(v.alternative && v.alternative->feasible());
  EXPECT_LE(v.alternative->report.totals().at("r8"), sc.planner.score_eps);
}

TEST(Verdict, RestrictedSearchStaysBelowTheCandidate) {
  const ScenarioSpec sc = scenario("scenario3.json");
  const PlanContext ctx(sc);
  const Verdict v = evaluate(ctx, track_candidate(ctx, load_candidate(kDir / "candidates/scenario3_early_swerve.json")));
  ASSERT_TRUE(v.alternative.has_value());
  for (int p : v.alternative->relaxed_classes) EXPECT_LE(p, v.highest_priority);
}
