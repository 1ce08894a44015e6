#include "rulecbf/passfail.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace rulecbf {

std::string to_string(Outcome o) { return o == Outcome::kPass ? "PASS" : "FAIL"; }

namespace {

TrajectorySample sample_at(const PlanContext& ctx, const InertialState& s, double t, std::size_t& lane_index) {
  TrajectorySample smp;
  smp.t = t;
  smp.pose = s.pose();
  try {
    smp.x = lane_state(ctx.geo.ego_lane, s, lane_index);
  } catch (const SingularityError& e) {
    throw CandidateError(fmt::format("candidate leaves the ego-lane frame at t = {:.2f}: {}", t, e.what()));
  }
  smp.kappa = ctx.geo.ego_lane.curvature[lane_index];
  return smp;
}

double class_max(const std::map<std::string, double>& totals, const std::vector<std::string>& cls) {
  double m = 0.0;
  for (const auto& r : cls) {
    const auto it = totals.find(r);
    if (it != totals.end()) m = std::max(m, it->second);
  }
  return m;
}

}  // namespace

Trajectory track_candidate(const PlanContext& ctx, const CandidateSpec& cand) {
  const ScenarioSpec& sc = ctx.sc();
  const PlannerConfig& cfg = sc.planner;
  if (cand.waypoints.size() < 2) throw CandidateError("candidate needs at least two waypoints");
  const ReferencePath ref = ReferencePath::from_polyline(cand.waypoints, cfg.path_resolution, cfg.gamma);
  const auto limits = limit_barriers(sc);

  Trajectory traj;
  traj.dt = cfg.dt;
  const int n_steps = cfg.num_steps();
  InertialState s = initial_inertial_state(sc, ctx.geo);
  std::size_t i_lane = nearest_index(ctx.geo.ego_lane, {s.x, s.y});
  std::size_t i_ref = nearest_index(ref, {s.x, s.y});
  QpSolver solver;

  for (int k = 0; k <= n_steps; ++k) {
    const double t = k * cfg.dt;
    TrajectorySample smp = sample_at(ctx, s, t, i_lane);
    VehicleState xc;
    try {
      xc = lane_state(ref, s, i_ref);
    } catch (const SingularityError& e) {
      throw CandidateError(fmt::format("candidate tracking failed at t = {:.2f}: {}", t, e.what()));
    }
    if (std::abs(xc.d) > kMaxTrackingError) {
      throw CandidateError(fmt::format("candidate tracking diverged at t = {:.2f}: lateral error {:.2f} m", t, xc.d));
    }
    if (k == n_steps) {
      traj.samples.push_back(smp);
      break;
    }
    const StepState st{t, xc, smp.pose, i_ref, Anchor::at(ref, i_ref)};
    TrackingTarget target;
    target.v = cand.speed_at(xc.s, cfg.v_desired);
    // Nested saturation through the targets: the CLF sees a clamped lateral
    // error and a clamped heading command. Without it a large transient (a
    // kink in the drawing) drives the steering rate into its limit and the
    // d -> mu -> delta chain winds up into a growing oscillation. The CLF
    // term (e_mu + k_d e_d) then equals the clamped heading command.
    const double e_d = std::clamp(xc.d, -kTrackingErrorClamp, kTrackingErrorClamp);
    const double heading = std::clamp(xc.mu + kTrackingLateralGain * e_d, -kTrackingHeadingClamp, kTrackingHeadingClamp);
    target.d = xc.d - e_d;
    target.mu = xc.mu - (heading - cfg.clf.k_d * e_d);
    const StepProblem sp = build_step_qp(ctx, st, limits, {}, target);
    const QpSolution sol = solver.solve(sp.qp, cfg.qp_tol);
    if (sol.status != QpStatus::kOptimal) {
      throw CandidateError(fmt::format("no admissible control while tracking the candidate at t = {:.2f}", t));
    }
    smp.u = {sol.x(kColJerk), sol.x(kColSteer)};
    smp.delta_e = sol.x(kColDeltaE);
    traj.samples.push_back(smp);
    s = rk4_step_inertial(s, smp.u, cfg.dt, sc.ego.geometry);
  }
  return traj;
}

Trajectory replay_trajectory(const PlanContext& ctx, const Trajectory& recorded) {
  const ScenarioSpec& sc = ctx.sc();
  if (recorded.samples.size() < 2) throw CandidateError("recorded trajectory needs at least two samples");
  if (!(recorded.dt > 0.0)) throw CandidateError("recorded trajectory has a non-positive time step");
  Trajectory traj;
  traj.dt = recorded.dt;
  InertialState s = inertial_of(recorded.samples.front());
  std::size_t i_lane = nearest_index(ctx.geo.ego_lane, {s.x, s.y});
  const double t0 = recorded.samples.front().t;
  for (std::size_t k = 0; k < recorded.samples.size(); ++k) {
    const TrajectorySample& in = recorded.samples[k];
    TrajectorySample smp = sample_at(ctx, s, t0 + static_cast<double>(k) * recorded.dt, i_lane);
    smp.u = in.u;
    smp.delta_e = in.delta_e;
    if (!sc.limits.control_within(in.u, 1e-9)) {
      throw CandidateError(fmt::format("recorded control at t = {:.2f} is outside the control bounds", smp.t));
    }
    traj.samples.push_back(smp);
    if (k + 1 < recorded.samples.size()) s = rk4_step_inertial(s, in.u, recorded.dt, sc.ego.geometry);
  }
  return traj;
}

Verdict evaluate(const PlanContext& ctx, const Trajectory& candidate, int jobs) {
  const ScenarioSpec& sc = ctx.sc();
  const PriorityStructure& ps = sc.priority;
  const double eps = sc.planner.score_eps;

  Verdict v;
  v.candidate = candidate;
  v.candidate_report = score_trajectory(sc, ctx.geo, candidate);
  const auto cand_totals = v.candidate_report.totals();
  v.highest_priority = highest_violated_priority(cand_totals, ps, eps);
  if (v.highest_priority == 0) {
    v.trace.push_back("candidate violates no rule");
    return v;
  }
  v.trace.push_back(fmt::format("candidate: highest violated priority {}", v.highest_priority));

  PlanResult alt = algorithm1(ctx, jobs, v.highest_priority);
  if (!alt.feasible()) {
    v.trace.push_back(fmt::format("no feasible trajectory relaxing only classes <= {}", v.highest_priority));
    v.alternative = std::move(alt);
    return v;
  }
  const auto alt_totals = alt.report.totals();
  v.trace.push_back(fmt::format("alternative: level {}, highest violated priority {}", alt.level,
                                highest_violated_priority(alt_totals, ps, eps)));
  for (int p = ps.num_classes(); p >= 1; --p) {
    const double a = class_max(alt_totals, ps.classes[p - 1]);
    const double c = class_max(cand_totals, ps.classes[p - 1]);
    if (a <= eps && c <= eps) continue;
    v.trace.push_back(fmt::format("priority {}: alternative {:.6f}, candidate {:.6f}", p, a, c));
  }
  v.comparison = compare_trajectories(alt_totals, cand_totals, ps, eps);
  v.trace.push_back("alternative vs candidate: " + to_string(*v.comparison));
  if (*v.comparison == Comparison::kFirstBetter) v.outcome = Outcome::kFail;
  v.alternative = std::move(alt);
  return v;
}

}  // namespace rulecbf
