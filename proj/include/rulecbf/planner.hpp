#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rulecbf/barrier.hpp"
#include "rulecbf/qp.hpp"
#include "rulecbf/scene.hpp"

namespace rulecbf {

enum class PlanStatus { kFeasible, kInfeasible, kAborted };
std::string to_string(PlanStatus s);

/// Scenario-wide quantities shared by every step and relaxation level.
struct PlanContext {
  const ScenarioSpec* scenario = nullptr;
  SceneGeometry geo;
  int z_r1 = 1, z_r7 = 1, z_r8 = 1;  // ego disk counts per clearance family
  DiskCover bare;                     // bare ego footprint (lane and drivable area)
  std::vector<DiskCover> instance_cover;

  explicit PlanContext(const ScenarioSpec& sc);
  const ScenarioSpec& sc() const { return *scenario; }
};

/// Frame the barrier fields are written in: the osculating arc of a
/// reference path at one of its points.
struct Anchor {
  double px = 0.0, py = 0.0, phi = 0.0, kappa = 0.0, s = 0.0;
  static Anchor at(const ReferencePath& path, std::size_t i);
};

/// Everything frozen at the start of a step.
struct StepState {
  double t = 0.0;
  VehicleState x{};
  GlobalPose pose{};
  std::size_t ref_index = 0;
  Anchor lane;
};

/// Nominal relative degree of each barrier family. Position-type barriers
/// see both controls at the third derivative; the rest follow the chain
/// u_jerk -> a -> v and u_steer -> omega -> delta.
inline constexpr int kDegreeClearance = 3;
inline constexpr int kDegreeLane = 3;
inline constexpr int kDegreeSpeed = 2;
inline constexpr int kDegreeAccel = 1;
inline constexpr int kDegreeSteerAngle = 2;
inline constexpr int kDegreeSteerRate = 1;

/// Rule and state-limit barriers at one step (relaxable flags unset).
std::vector<HocbfSpec> step_barriers(const PlanContext& ctx, const StepState& st);

/// The eight state-limit rows on v, a, delta and omega (owner "limit").
std::vector<HocbfSpec> limit_barriers(const ScenarioSpec& sc);

struct StepProblem {
  QpProblem qp;
  std::vector<LinearConstraintRow> rows;  // HOCBF rows, then the CLF row last
  std::vector<int> relax_column;          // per row, decision index of its δ or -1
  std::vector<std::string> column_owner;  // per δ column
};

inline constexpr int kColJerk = 0;
inline constexpr int kColSteer = 1;
inline constexpr int kColDeltaE = 2;
inline constexpr int kColFirstRelax = 3;

/// Decision z = [u_jerk, u_steer, δ_e, δ_1..δ_n]; one δ column per row
/// owned by a rule in `relaxed`. Cost: |u - u_ff|^2 + p_e δ_e^2 + Σ p_i δ_i^2.
StepProblem build_step_qp(const PlanContext& ctx, const StepState& st, const std::vector<HocbfSpec>& barriers,
                          const std::set<std::string>& relaxed, const TrackingTarget& target,
                          const ControlInput& u_ff = {});

/// Slack weight for a rule: explicit weight or 10^priority.
double slack_weight(const ScenarioSpec& sc, const std::string& rule);

struct PlanResult {
  PlanStatus status = PlanStatus::kInfeasible;
  int level = 0;                          // 1-based index into the sorted sets (0: none)
  std::vector<int> relaxed_classes;       // priorities of the relaxed classes
  std::vector<std::string> relaxed_rules;
  std::set<std::string> r_relax;          // relaxed rules with nonzero slack
  std::map<std::string, std::vector<double>> slack;  // per rule, per sample: δ of largest magnitude
  Trajectory trajectory;
  ViolationReport report;
  std::string message;
  double stop_time = 0.0;                 // time of the failing step when not feasible
  std::vector<int> aborted_levels;
  double runtime_s = 0.0;

  bool feasible() const { return status == PlanStatus::kFeasible; }
};

/// Closed-loop run over [0, T] with the given classes relaxed.
PlanResult simulate_with_relaxation(const PlanContext& ctx, const std::vector<int>& relaxed_classes);

/// Recursive relaxation over the sorted power set of the classes with
/// priority <= max_class (all classes when 0); higher classes stay hard.
/// Levels are evaluated `jobs` at a time; the lowest feasible one wins.
PlanResult algorithm1(const PlanContext& ctx, int jobs = 1, int max_class = 0);

/// Ego-lane Frenet state for a global pose, advancing the reference index.
VehicleState lane_state(const ReferencePath& lane, const InertialState& s, std::size_t& ref_index);

}  // namespace rulecbf
