#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rulecbf/passfail.hpp"

namespace rulecbf {

/// Fixed leading CSV columns; per-rule slack columns `delta_<rule>` follow.
extern const std::vector<std::string> kTrajectoryColumns;

struct RecordedTrajectory {
  Trajectory trajectory;
  std::map<std::string, std::vector<double>> slack;
};

/// Writes every value with 17 significant digits so a read-back is exact.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::map<std::string, std::vector<double>>& slack = {});
/// dt is taken from the first two time stamps.
RecordedTrajectory read_trajectory_csv(std::istream& is);
RecordedTrajectory load_trajectory_csv(const std::filesystem::path& path);

nlohmann::json scores_json(const ScenarioSpec& sc, const ViolationReport& report);
nlohmann::json plan_json(const ScenarioSpec& sc, const PlanResult& res);
nlohmann::json verdict_json(const ScenarioSpec& sc, const Verdict& v);

struct SvgTrack {
  std::string label;
  const Trajectory* trajectory = nullptr;
  const ViolationReport* report = nullptr;  // violating segments are colored per rule
  bool dashed = false;
};

/// Scene plot in map meters (y up): corridor, lanes, instances at t = 0
/// with their scripted paths, and each track with its violating segments.
std::string scene_svg(const ScenarioSpec& sc, const std::vector<SvgTrack>& tracks);

std::string rule_color(const std::string& rule);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace rulecbf
