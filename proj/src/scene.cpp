#include "rulecbf/scene.hpp"

#include <algorithm>

namespace rulecbf {

InertialState inertial_of(const TrajectorySample& s) {
  return {s.pose.x, s.pose.y, s.pose.theta, s.x.v, s.x.a, s.x.delta, s.x.omega};
}

SceneGeometry::SceneGeometry(const ScenarioSpec& sc)
    : ego_lane(ReferencePath::from_polyline(sc.map.lane(sc.ego.lane).centerline, sc.planner.path_resolution,
                                            sc.planner.gamma)),
      corridor(ReferencePath::from_polyline(sc.map.drivable_centerline, sc.planner.path_resolution, sc.planner.gamma)),
      lane(sc.map.lane(sc.ego.lane)) {}

InertialState initial_inertial_state(const ScenarioSpec& sc, const SceneGeometry& geo) {
  const auto& arc = geo.ego_lane.arclength;
  // Reference point at or just before s0.
  const auto it = std::upper_bound(arc.begin(), arc.end(), sc.ego.initial.s);
  const std::size_t i = it == arc.begin() ? 0 : static_cast<std::size_t>(it - arc.begin() - 1);
  const auto& x = sc.ego.initial;
  const GlobalPose p = frenet_to_global({x.s, x.d, x.mu}, geo.ego_lane, i);
  return {p.x, p.y, p.theta, x.v, x.a, x.delta, x.omega};
}

double lane_curvature_at(const SceneGeometry& geo, const Vec2& p) {
  return geo.ego_lane.curvature[nearest_index(geo.ego_lane, p)];
}

RuleSample measure(const ScenarioSpec& sc, const SceneGeometry& geo, const GlobalPose& pose, double v, double a,
                   double t) {
  RuleSample s;
  s.v = v;
  s.a = a;
  s.kappa = lane_curvature_at(geo, {pose.x, pose.y});
  const OrientedRectangle ego = footprint_rectangle(pose, sc.ego.footprint());
  s.drivable = infringement_distances(ego, sc.map.drivable_centerline, sc.map.drivable_width, sc.rules.d_max);
  s.lane = infringement_distances(ego, geo.lane.centerline, geo.lane.width, sc.rules.d_max);
  for (const auto& inst : sc.instances) {
    const InstanceState st = instance_state(inst, t);
    const GlobalPose ip{st.position.x(), st.position.y(), st.heading};
    switch (inst.kind) {
      case InstanceKind::kPedestrian:
        s.pedestrian_distance.push_back(std::max(0.0, rect_disk_distance(ego, st.position, inst.radius)));
        break;
      case InstanceKind::kParkedVehicle:
        s.parked_distance.push_back(std::max(0.0, rect_rect_distance(ego, footprint_rectangle(ip, inst.footprint))));
        break;
      case InstanceKind::kActiveVehicle:
        s.active.push_back(directional_distances(ego, footprint_rectangle(ip, inst.footprint)));
        break;
    }
  }
  return s;
}

ViolationReport score_trajectory(const ScenarioSpec& sc, const SceneGeometry& geo, const Trajectory& traj) {
  std::vector<RuleSample> samples;
  samples.reserve(traj.samples.size());
  for (const auto& s : traj.samples) samples.push_back(measure(sc, geo, s.pose, s.x.v, s.x.a, s.t));
  return score_samples(samples, traj.dt, sc.rules);
}

}  // namespace rulecbf
