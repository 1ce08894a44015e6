#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "rulecbf/config.hpp"
#include "rulecbf/geometry.hpp"
#include "rulecbf/rules.hpp"

namespace rulecbf {

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

enum class InstanceKind { kPedestrian, kParkedVehicle, kActiveVehicle };
std::string to_string(InstanceKind k);

/// Open-loop motion: constant speed along a polyline after `start_time`,
/// holding the final pose once the polyline is used up. A single point is a
/// static instance facing `heading`.
struct MotionScript {
  std::vector<Vec2> path;
  double speed = 0.0;
  double start_time = 0.0;
  double heading = 0.0;
};

struct InstanceSpec {
  std::string id;
  InstanceKind kind = InstanceKind::kParkedVehicle;
  Footprint footprint{};
  double radius = 0.3;  // pedestrians are disks
  MotionScript motion;
};

struct InstanceState {
  Vec2 position = Vec2::Zero();
  double heading = 0.0;
  Vec2 velocity = Vec2::Zero();
};

InstanceState instance_state(const InstanceSpec& inst, double t);

struct LaneSpec {
  std::string id;
  std::vector<Vec2> centerline;
  double width = 3.5;
};

struct MapSpec {
  std::vector<Vec2> drivable_centerline;
  double drivable_width = 7.0;
  std::vector<LaneSpec> lanes;
  const LaneSpec& lane(const std::string& id) const;
};

struct EgoSpec {
  std::string lane;
  // s is the arc length along the lane centerline; the rest is as usual.
  VehicleState initial{};
  VehicleGeometry geometry{};
  Footprint footprint() const { return {geometry.length, geometry.width}; }
};

struct ScenarioSpec {
  std::string name;
  MapSpec map;
  EgoSpec ego;
  std::vector<InstanceSpec> instances;
  PriorityStructure priority = PriorityStructure::case_study();
  RuleParams rules{};
  Limits limits{};
  PlannerConfig planner{};

  void validate() const;
};

/// Instance states at time t, in scenario order.
std::vector<InstanceState> propagate_instances(const ScenarioSpec& sc, double t);

ScenarioSpec load_scenario(const std::filesystem::path& path);
ScenarioSpec parse_scenario(const std::string& text);
std::string dump_scenario(const ScenarioSpec& sc);
void save_scenario(const ScenarioSpec& sc, const std::filesystem::path& path);

/// A hand-drawn candidate: waypoints plus an optional speed profile over
/// arc length (pairs of s, v; piecewise linear, clamped at the ends).
struct CandidateSpec {
  std::vector<Vec2> waypoints;
  std::vector<std::pair<double, double>> speed_profile;
  double speed_at(double s, double fallback) const;
};

CandidateSpec parse_candidate(const std::string& text);
CandidateSpec load_candidate(const std::filesystem::path& path);

}  // namespace rulecbf
