#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rulecbf/planner.hpp"

namespace rulecbf {

class CandidateError : public std::runtime_error {
 public:
  explicit CandidateError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kMaxTrackingError = 5.0;  // m, lateral
inline constexpr double kTrackingErrorClamp = 1.0;     // m
inline constexpr double kTrackingHeadingClamp = 0.3;   // rad
inline constexpr double kTrackingLateralGain = 0.25;   // 1/m; half the planner's k_d, less overshoot at kinks

/// Dynamically feasible realization of a hand-drawn candidate: the candidate
/// polyline is the reference path, a CLF tracks it (speed from the profile,
/// v_d where none is given) and only control bounds and state limits are
/// enforced. Throws CandidateError when the lateral error exceeds 5 m.
Trajectory track_candidate(const PlanContext& ctx, const CandidateSpec& cand);

/// Re-integrates a recorded trajectory from its first state with its own
/// controls. Bit-identical to the original when it came from the planner.
Trajectory replay_trajectory(const PlanContext& ctx, const Trajectory& recorded);

enum class Outcome { kPass, kFail };
std::string to_string(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::kPass;
  Trajectory candidate;
  ViolationReport candidate_report;
  int highest_priority = 0;                // H; 0 when nothing is violated
  std::optional<PlanResult> alternative;   // best trajectory within classes <= H
  std::optional<Comparison> comparison;    // alternative vs candidate
  std::vector<std::string> trace;

  bool failed() const { return outcome == Outcome::kFail; }
};

/// PASS unless the restricted recursive relaxation finds a strictly better
/// trajectory. The counterexample search uses the ego lane, not the candidate.
Verdict evaluate(const PlanContext& ctx, const Trajectory& candidate, int jobs = 1);

}  // namespace rulecbf
