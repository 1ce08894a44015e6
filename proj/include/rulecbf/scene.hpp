#pragma once

#include <vector>

#include "rulecbf/path.hpp"
#include "rulecbf/rules.hpp"
#include "rulecbf/scenario.hpp"

namespace rulecbf {

struct TrajectorySample {
  double t = 0.0;
  VehicleState x{};  // Frenet state w.r.t. the ego lane
  GlobalPose pose{};
  ControlInput u{};
  double delta_e = 0.0;
  double kappa = 0.0;  // ego-lane curvature at the nearest point
};

struct Trajectory {
  double dt = 0.1;
  std::vector<TrajectorySample> samples;
};

InertialState inertial_of(const TrajectorySample& s);

/// Precomputed map geometry for one scenario.
struct SceneGeometry {
  ReferencePath ego_lane;
  ReferencePath corridor;
  LaneSpec lane;

  SceneGeometry(const ScenarioSpec& sc);
};

/// Inertial start state of the ego vehicle.
InertialState initial_inertial_state(const ScenarioSpec& sc, const SceneGeometry& geo);

/// Rule measurements for ego at `pose` with speed v and acceleration a at time t.
RuleSample measure(const ScenarioSpec& sc, const SceneGeometry& geo, const GlobalPose& pose, double v, double a,
                   double t);

/// Ego-lane curvature at the point nearest to p.
double lane_curvature_at(const SceneGeometry& geo, const Vec2& p);

ViolationReport score_trajectory(const ScenarioSpec& sc, const SceneGeometry& geo, const Trajectory& traj);

}  // namespace rulecbf
