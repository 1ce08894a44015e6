#include "rulecbf/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace rulecbf {

using nlohmann::json;

const std::vector<std::string> kTrajectoryColumns{"t",     "s",     "d",      "mu",      "v",       "a",
                                                  "delta", "omega", "x",      "y",       "theta",   "u_jerk",
                                                  "u_steer", "delta_e"};

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::map<std::string, std::vector<double>>& slack) {
  std::string line;
  for (const auto& c : kTrajectoryColumns) line += (line.empty() ? "" : ",") + c;
  for (const auto& [rule, _] : slack) line += ",delta_" + rule;
  os << line << '\n';
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const auto& s = traj.samples[k];
    const double row[] = {s.t,      s.x.s,      s.x.d,      s.x.mu,     s.x.v,  s.x.a,     s.x.delta,
                          s.x.omega, s.pose.x, s.pose.y, s.pose.theta, s.u.jerk, s.u.steer, s.delta_e};
    line.clear();
    for (double v : row) line += fmt::format("{}{:.17g}", line.empty() ? "" : ",", v);
    for (const auto& [rule, series] : slack) line += fmt::format(",{:.17g}", k < series.size() ? series[k] : 0.0);
    os << line << '\n';
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ScenarioError(fmt::format("trajectory csv row {}, column {}: not a number '{}'", row, column, cell));
  }
  return v;
}

}  // namespace

RecordedTrajectory read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ScenarioError("trajectory csv is empty");
  const auto header = split(line);
  if (header.size() < kTrajectoryColumns.size() ||
      !std::equal(kTrajectoryColumns.begin(), kTrajectoryColumns.end(), header.begin())) {
    throw ScenarioError("trajectory csv header must start with " + fmt::format("{}", fmt::join(kTrajectoryColumns, ",")));
  }
  std::vector<std::string> slack_rules;
  for (std::size_t c = kTrajectoryColumns.size(); c < header.size(); ++c) {
    if (header[c].rfind("delta_", 0) != 0) throw ScenarioError("unexpected trajectory csv column '" + header[c] + "'");
    slack_rules.push_back(header[c].substr(6));
  }

  RecordedTrajectory out;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw ScenarioError(fmt::format("trajectory csv row {}: expected {} values, got {}", row, header.size(), cells.size()));
    }
    std::vector<double> v(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) v[c] = parse_number(cells[c], row, header[c]);
    TrajectorySample s;
    s.t = v[0];
    s.x = {v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
    s.pose = {v[8], v[9], v[10]};
    s.u = {v[11], v[12]};
    s.delta_e = v[13];
    out.trajectory.samples.push_back(s);
    for (std::size_t j = 0; j < slack_rules.size(); ++j) {
      out.slack[slack_rules[j]].push_back(v[kTrajectoryColumns.size() + j]);
    }
  }
  const auto& smp = out.trajectory.samples;
  if (smp.size() < 2) throw ScenarioError("trajectory csv needs at least two samples");
  out.trajectory.dt = smp[1].t - smp[0].t;
  if (!(out.trajectory.dt > 0.0)) throw ScenarioError("trajectory csv time stamps must increase");
  for (std::size_t k = 1; k < smp.size(); ++k) {
    const double expect = smp[0].t + static_cast<double>(k) * out.trajectory.dt;
    if (std::abs(smp[k].t - expect) > 1e-6 * std::max(1.0, std::abs(expect))) {
      throw ScenarioError(fmt::format("trajectory csv row {}: time stamps are not on a uniform grid", k + 2));
    }
  }
  return out;
}

RecordedTrajectory load_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open " + path.string());
  try {
    return read_trajectory_csv(in);
  } catch (const ScenarioError& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
}

json scores_json(const ScenarioSpec& sc, const ViolationReport& report) {
  json scores = json::object();
  json violated = json::array();
  for (Rule r : kAllRules) {
    const auto& rs = report[r];
    scores[rule_name(r)] = {{"total", rs.total}, {"instances", rs.instance}};
    if (rs.total > sc.planner.score_eps) violated.push_back(rule_name(r));
  }
  return {{"scores", scores}, {"violated", violated}};
}

json plan_json(const ScenarioSpec& sc, const PlanResult& res) {
  json j = {{"scenario", sc.name},
            {"status", to_string(res.status)},
            {"level", res.level},
            {"relaxed_classes", res.relaxed_classes},
            {"relaxed_rules", res.relaxed_rules},
            {"r_relax", res.r_relax},
            {"aborted_levels", res.aborted_levels},
            {"runtime_s", res.runtime_s}};
  if (!res.message.empty()) j["message"] = res.message;
  if (res.feasible()) {
    json max_slack = json::object();
    for (const auto& [rule, series] : res.slack) {
      double m = 0.0;
      for (double d : series) m = std::max(m, std::abs(d));
      max_slack[rule] = m;
    }
    j["max_slack"] = max_slack;
    j.update(scores_json(sc, res.report));
  }
  return j;
}

json verdict_json(const ScenarioSpec& sc, const Verdict& v) {
  json j = {{"verdict", to_string(v.outcome)},
            {"highest_violated_priority", v.highest_priority},
            {"candidate", scores_json(sc, v.candidate_report)},
            {"trace", v.trace}};
  j["alternative"] = v.alternative ? plan_json(sc, *v.alternative) : json(nullptr);
  j["comparison"] = v.comparison ? json(to_string(*v.comparison)) : json(nullptr);
  return j;
}

std::string rule_color(const std::string& rule) {
  static const std::map<std::string, std::string> colors{
      {"r1", "#1f77b4"}, {"r2", "#8c564b"}, {"r3", "#e377c2"}, {"r4", "#ff7f0e"},
      {"r5", "#17becf"}, {"r6", "#bcbd22"}, {"r7", "#9467bd"}, {"r8", "#2ca02c"}};
  const auto it = colors.find(rule);
  return it == colors.end() ? "#000000" : it->second;
}

namespace {

struct Box {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  void add(double x, double y, double pad = 0.0) {
    x0 = std::min(x0, x - pad);
    y0 = std::min(y0, y - pad);
    x1 = std::max(x1, x + pad);
    y1 = std::max(y1, y + pad);
  }
};

// y is flipped so the plot reads with y up.
std::string pts(const std::vector<Vec2>& p) {
  std::string s;
  for (const auto& q : p) s += fmt::format("{}{:.3f},{:.3f}", s.empty() ? "" : " ", q.x(), -q.y());
  return s;
}

std::string polyline(const std::vector<Vec2>& p, const std::string& stroke, double width, const std::string& extra = "") {
  return fmt::format(R"(<polyline points="{}" fill="none" stroke="{}" stroke-width="{:.3f}" {}/>)", pts(p), stroke,
                     width, extra) +
         "\n";
}

std::string rectangle(const OrientedRectangle& r, const std::string& fill, const std::string& stroke) {
  const auto c = r.corners();
  return fmt::format(R"(<polygon points="{}" fill="{}" stroke="{}" stroke-width="0.08"/>)",
                     pts({c.begin(), c.end()}), fill, stroke) +
         "\n";
}

}  // namespace

std::string scene_svg(const ScenarioSpec& sc, const std::vector<SvgTrack>& tracks) {
  Box box;
  for (const auto& p : sc.map.drivable_centerline) box.add(p.x(), p.y(), 0.5 * sc.map.drivable_width + 2.0);
  for (const auto& in : sc.instances) {
    for (const auto& p : in.motion.path) box.add(p.x(), p.y(), 3.0);
  }
  // Crop to the region the tracks visit, when there are tracks.
  Box focus;
  for (const auto& t : tracks) {
    for (const auto& s : t.trajectory->samples) focus.add(s.pose.x, s.pose.y, 15.0);
  }
  if (focus.x0 < focus.x1) {
    box.x0 = std::max(box.x0, focus.x0);
    box.x1 = std::min(box.x1, focus.x1);
  }
  const double w = box.x1 - box.x0, h = box.y1 - box.y0;
  const double px_per_m = 10.0;

  std::string out = fmt::format(
      R"(<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.3f} {:.3f} {:.3f} {:.3f}" width="{:.0f}" height="{:.0f}">)"
      "\n",
      box.x0, -box.y1, w, h + 4.0, w * px_per_m, (h + 4.0) * px_per_m);
  out += fmt::format(R"(<rect x="{:.3f}" y="{:.3f}" width="{:.3f}" height="{:.3f}" fill="#f4f1e8"/>)" "\n", box.x0,
                     -box.y1, w, h + 4.0);
  out += polyline(sc.map.drivable_centerline, "#c8c8c8", sc.map.drivable_width, R"(stroke-linejoin="round")");
  for (const auto& lane : sc.map.lanes) {
    out += polyline(lane.centerline, "#ffffff", 0.08, R"(stroke-dasharray="1 1")");
  }
  for (const auto& lane : sc.map.lanes) {
    if (lane.id == sc.ego.lane) out += polyline(lane.centerline, "#999999", 0.06, R"(stroke-dasharray="0.3 0.6")");
  }

  for (const auto& in : sc.instances) {
    const InstanceState st = instance_state(in, 0.0);
    if (in.motion.path.size() > 1) out += polyline(in.motion.path, "#555555", 0.08, R"(stroke-dasharray="0.6 0.4")");
    if (in.kind == InstanceKind::kPedestrian) {
      out += fmt::format(R"(<circle cx="{:.3f}" cy="{:.3f}" r="{:.3f}" fill="#d62728"/>)" "\n", st.position.x(),
                         -st.position.y(), in.radius);
    } else {
      const GlobalPose p{st.position.x(), st.position.y(), st.heading};
      const bool parked = in.kind == InstanceKind::kParkedVehicle;
      out += rectangle(footprint_rectangle(p, in.footprint), parked ? "#7f7f7f" : "#ffbb78", "#333333");
    }
    out += fmt::format(R"(<text x="{:.3f}" y="{:.3f}" font-size="0.9" fill="#333333">{}</text>)" "\n",
                       st.position.x() + 0.6, -st.position.y() - 1.2, in.id);
  }

  std::vector<std::string> legend;
  for (const auto& t : tracks) {
    const auto& smp = t.trajectory->samples;
    if (smp.empty()) continue;
    std::vector<Vec2> path;
    for (const auto& s : smp) path.emplace_back(s.pose.x, s.pose.y);
    out += polyline(path, "#d62728", 0.15, t.dashed ? R"(stroke-dasharray="0.8 0.5")" : "");
    out += rectangle(footprint_rectangle(smp.front().pose, sc.ego.footprint()), "none", "#d62728");
    legend.push_back(fmt::format("{} ({})", t.label, t.dashed ? "dashed" : "solid"));
    if (!t.report) continue;
    // Lowest priority first so the most important violation is drawn on top.
    for (const auto& cls : sc.priority.classes) {
      for (const auto& name : cls) {
        const auto rule = parse_rule(name);
        if (!rule) continue;
        const auto& series = (*t.report)[*rule].series;
        for (std::size_t k = 0; k + 1 < smp.size(); ++k) {
          double rho = 0.0;
          for (const auto& inst : series) {
            if (k < inst.size()) rho = std::max(rho, inst[k]);
          }
          if (rho <= sc.planner.score_eps) continue;
          out += fmt::format(
              R"(<line x1="{:.3f}" y1="{:.3f}" x2="{:.3f}" y2="{:.3f}" stroke="{}" stroke-width="0.5" stroke-opacity="0.8" class="violation {}"/>)"
              "\n",
              smp[k].pose.x, -smp[k].pose.y, smp[k + 1].pose.x, -smp[k + 1].pose.y, rule_color(name), name);
        }
      }
    }
  }

  double ty = -box.y0 + 1.2;
  double tx = box.x0 + 1.0;
  for (const auto& l : legend) {
    out += fmt::format(R"(<text x="{:.3f}" y="{:.3f}" font-size="1.1" fill="#d62728">{}</text>)" "\n", tx, ty, l);
    tx += 1.0 + 0.6 * static_cast<double>(l.size());
  }
  for (const auto& cls : sc.priority.classes) {
    for (const auto& name : cls) {
      out += fmt::format(R"(<rect x="{:.3f}" y="{:.3f}" width="1.2" height="0.5" fill="{}"/>)" "\n", tx, ty - 0.5,
                         rule_color(name));
      out += fmt::format(R"(<text x="{:.3f}" y="{:.3f}" font-size="1.1">{}</text>)" "\n", tx + 1.4, ty, name);
      tx += 3.4;
    }
  }
  out += "</svg>\n";
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw ScenarioError("cannot write " + path.string());
  os << text;
}

}  // namespace rulecbf
