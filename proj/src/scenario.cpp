#include "rulecbf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rulecbf {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Planner config

int PlannerConfig::num_steps() const {
  if (!(dt > 0.0)) throw std::invalid_argument("planner.dt must be positive");
  const double n = horizon / dt;
  const double r = std::round(n);
  if (r < 1.0 || std::abs(n - r) > 1e-9 * std::max(1.0, n)) {
    throw std::invalid_argument("planner.T must be a positive multiple of planner.dt");
  }
  return static_cast<int>(r);
}

void PlannerConfig::validate() const {
  num_steps();
  clf.validate();
  if (!(v_desired >= 0.0)) throw std::invalid_argument("planner.v_d must be non-negative");
  if (!(p_e > 0.0)) throw std::invalid_argument("planner.p_e must be positive");
  for (const auto& [k, w] : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("planner.weights." + k + " must be positive");
  }
  ClassKChain{class_k}.validate();
  for (const auto& [k, g] : class_k_by_rule) ClassKChain{g}.validate();
  if (!(delta_zero_tol >= 0.0) || !(score_eps >= 0.0)) throw std::invalid_argument("planner tolerances must be >= 0");
  if (!(cover_beta >= 0.0) || cover_z_max < 1) throw std::invalid_argument("planner cover parameters invalid");
  if (!(path_resolution > 0.0) || !(gamma >= 0.0)) throw std::invalid_argument("planner path parameters invalid");
}

ClassKChain PlannerConfig::chain_for(const std::string& owner) const {
  const auto it = class_k_by_rule.find(owner);
  return ClassKChain{it != class_k_by_rule.end() ? it->second : class_k};
}

// ---------------------------------------------------------------------------
// Instances and map

std::string to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::kPedestrian:
      return "pedestrian";
    case InstanceKind::kParkedVehicle:
      return "parked_vehicle";
    case InstanceKind::kActiveVehicle:
      return "active_vehicle";
  }
  return "?";
}

InstanceState instance_state(const InstanceSpec& inst, double t) {
  const auto& pts = inst.motion.path;
  if (pts.empty()) throw ScenarioError("instance '" + inst.id + "' has an empty motion path");
  InstanceState st;
  st.position = pts.front();
  st.heading = inst.motion.heading;
  if (pts.size() == 1) return st;
  const double travelled = inst.motion.speed * std::max(0.0, t - inst.motion.start_time);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const Vec2 seg = pts[k + 1] - pts[k];
    const double len = seg.norm();
    if (len <= 0.0) continue;
    const Vec2 dir = seg / len;
    st.heading = std::atan2(dir.y(), dir.x());
    if (travelled < acc + len) {
      st.position = pts[k] + dir * (travelled - acc);
      if (t >= inst.motion.start_time) st.velocity = dir * inst.motion.speed;
      return st;
    }
    acc += len;
  }
  st.position = pts.back();  // script exhausted: hold the final pose
  return st;
}

const LaneSpec& MapSpec::lane(const std::string& id) const {
  for (const auto& l : lanes) {
    if (l.id == id) return l;
  }
  throw ScenarioError("map.lanes: no lane with id '" + id + "'");
}

std::vector<InstanceState> propagate_instances(const ScenarioSpec& sc, double t) {
  std::vector<InstanceState> out;
  out.reserve(sc.instances.size());
  for (const auto& inst : sc.instances) out.push_back(instance_state(inst, t));
  return out;
}

namespace {

void check_polyline(const std::vector<Vec2>& pts, const std::string& where, std::size_t min_points) {
  if (pts.size() < min_points) {
    throw ScenarioError(where + ": needs at least " + std::to_string(min_points) + " points");
  }
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if ((pts[k] - pts[k - 1]).norm() <= 0.0) throw ScenarioError(where + ": consecutive duplicate points");
  }
}

}  // namespace

void ScenarioSpec::validate() const {
  check_polyline(map.drivable_centerline, "map.drivable_area.centerline", 2);
  if (!(map.drivable_width > 0.0)) throw ScenarioError("map.drivable_area.width must be positive");
  if (map.lanes.empty()) throw ScenarioError("map.lanes: at least one lane is required");
  std::set<std::string> lane_ids;
  for (std::size_t k = 0; k < map.lanes.size(); ++k) {
    const auto& l = map.lanes[k];
    const std::string where = "map.lanes[" + std::to_string(k) + "]";
    if (!lane_ids.insert(l.id).second) throw ScenarioError(where + ".id: duplicate lane id '" + l.id + "'");
    check_polyline(l.centerline, where + ".centerline", 2);
    if (!(l.width > 0.0)) throw ScenarioError(where + ".width must be positive");
  }
  const LaneSpec& lane = map.lane(ego.lane);
  double lane_len = 0.0;
  for (std::size_t k = 1; k < lane.centerline.size(); ++k) lane_len += (lane.centerline[k] - lane.centerline[k - 1]).norm();
  if (ego.initial.s < 0.0 || ego.initial.s > lane_len) throw ScenarioError("ego.s: outside the lane centerline");
  if (std::abs(ego.initial.d) > lane.width) throw ScenarioError("ego.d: ego starts off its lane");
  if (!(ego.geometry.length > 0.0 && ego.geometry.width > 0.0 && ego.geometry.l_f > 0.0 && ego.geometry.l_r > 0.0)) {
    throw ScenarioError("ego: geometry must be positive");
  }
  try {
    limits.validate();
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("limits: ") + e.what());
  }
  const auto& x = ego.initial;
  if (x.v < limits.v_min || x.v > limits.v_max || x.a < limits.a_min || x.a > limits.a_max ||
      x.delta < limits.delta_min || x.delta > limits.delta_max || x.omega < limits.omega_min ||
      x.omega > limits.omega_max) {
    throw ScenarioError("ego: initial state outside the vehicle limits");
  }
  std::set<std::string> ids;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const auto& in = instances[k];
    const std::string where = "instances[" + std::to_string(k) + "]";
    if (in.id.empty()) throw ScenarioError(where + ".id: must not be empty");
    if (!ids.insert(in.id).second) throw ScenarioError(where + ".id: duplicate id '" + in.id + "'");
    if (in.motion.path.empty()) throw ScenarioError(where + ".path: needs at least one point");
    for (std::size_t j = 1; j < in.motion.path.size(); ++j) {
      if ((in.motion.path[j] - in.motion.path[j - 1]).norm() <= 0.0) {
        throw ScenarioError(where + ".path: consecutive duplicate points");
      }
    }
    if (!(in.motion.speed >= 0.0)) throw ScenarioError(where + ".speed must be non-negative");
    if (in.kind == InstanceKind::kPedestrian) {
      if (!(in.radius > 0.0)) throw ScenarioError(where + ".radius must be positive");
    } else if (!(in.footprint.length > 0.0 && in.footprint.width > 0.0)) {
      throw ScenarioError(where + ": footprint must be positive");
    }
    if (in.kind == InstanceKind::kParkedVehicle && in.motion.speed != 0.0 && in.motion.path.size() > 1) {
      throw ScenarioError(where + ": parked vehicles cannot move");
    }
  }
  try {
    priority.validate();
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("priority: ") + e.what());
  }
  for (const auto& r : priority.rules()) {
    if (!parse_rule(r)) throw ScenarioError("priority: unknown rule '" + r + "'");
  }
  try {
    rules.validate();
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("rules: ") + e.what());
  }
  try {
    planner.validate();
  } catch (const std::exception& e) {
    throw ScenarioError(e.what());
  }
  for (const auto& [k, w] : planner.weights) {
    if (!parse_rule(k)) throw ScenarioError("planner.weights: unknown rule '" + k + "'");
  }
  for (const auto& [k, g] : planner.class_k_by_rule) {
    if (!parse_rule(k) && k != "limit" && k != "clf") throw ScenarioError("planner.class_k_by_rule: unknown key '" + k + "'");
  }
}

// ---------------------------------------------------------------------------
// JSON reading with field paths

namespace {

class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return j_; }

  [[noreturn]] void fail(const std::string& msg) const { throw ScenarioError(path_ + ": " + msg); }

  void expect_object(std::initializer_list<const char*> allowed) const {
    if (!j_.is_object()) fail("expected an object");
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; })) {
        throw ScenarioError(child_path(it.key()) + ": unknown field");
      }
    }
  }

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  Node at(const char* key) const {
    if (!has(key)) throw ScenarioError(child_path(key) + ": missing required field");
    return {j_.at(key), child_path(key)};
  }

  Node item(std::size_t k) const { return {j_.at(k), path_ + "[" + std::to_string(k) + "]"}; }

  std::size_t array_size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }

  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

  Vec2 point() const {
    if (array_size() != 2) fail("expected [x, y]");
    return {item(0).number(), item(1).number()};
  }

  std::vector<Vec2> points() const {
    std::vector<Vec2> out;
    const std::size_t n = array_size();
    for (std::size_t k = 0; k < n; ++k) out.push_back(item(k).point());
    return out;
  }

  std::vector<double> numbers() const {
    std::vector<double> out;
    const std::size_t n = array_size();
    for (std::size_t k = 0; k < n; ++k) out.push_back(item(k).number());
    return out;
  }

  void get(const char* key, double& out) const {
    if (has(key)) out = at(key).number();
  }
  void get(const char* key, int& out) const {
    if (!has(key)) return;
    const Node n = at(key);
    if (!n.raw().is_number_integer()) n.fail("expected an integer");
    out = n.raw().get<int>();
  }

 private:
  std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& j_;
  std::string path_;
};

json points_json(const std::vector<Vec2>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back({p.x(), p.y()});
  return a;
}

InstanceKind parse_kind(const Node& n) {
  const std::string s = n.string();
  if (s == "pedestrian") return InstanceKind::kPedestrian;
  if (s == "parked_vehicle") return InstanceKind::kParkedVehicle;
  if (s == "active_vehicle") return InstanceKind::kActiveVehicle;
  n.fail("unknown instance type '" + s + "' (pedestrian | parked_vehicle | active_vehicle)");
}

void read_clearance(const Node& n, const char* d_key, const char* eta_key, Clearance& c) {
  n.get(d_key, c.d);
  n.get(eta_key, c.eta);
}

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ScenarioSpec parse_scenario(const std::string& text) {
  const json j = parse_json(text, "scenario");
  const Node root(j, "");
  if (!j.is_object()) throw ScenarioError("scenario: expected a JSON object");
  root.expect_object({"name", "map", "ego", "instances", "priority", "rules", "limits", "planner"});
  ScenarioSpec sc;
  if (root.has("name")) sc.name = root.at("name").string();

  const Node map = root.at("map");
  map.expect_object({"drivable_area", "lanes"});
  const Node area = map.at("drivable_area");
  area.expect_object({"centerline", "width"});
  sc.map.drivable_centerline = area.at("centerline").points();
  sc.map.drivable_width = area.at("width").number();
  const Node lanes = map.at("lanes");
  for (std::size_t k = 0; k < lanes.array_size(); ++k) {
    const Node l = lanes.item(k);
    l.expect_object({"id", "centerline", "width"});
    LaneSpec lane;
    lane.id = l.at("id").string();
    lane.centerline = l.at("centerline").points();
    l.get("width", lane.width);
    sc.map.lanes.push_back(std::move(lane));
  }

  const Node ego = root.at("ego");
  ego.expect_object({"lane", "s", "d", "mu", "v", "a", "delta", "omega", "length", "width", "l_f", "l_r"});
  sc.ego.lane = ego.at("lane").string();
  auto& x = sc.ego.initial;
  ego.get("s", x.s);
  ego.get("d", x.d);
  ego.get("mu", x.mu);
  x.v = ego.at("v").number();
  ego.get("a", x.a);
  ego.get("delta", x.delta);
  ego.get("omega", x.omega);
  ego.get("length", sc.ego.geometry.length);
  ego.get("width", sc.ego.geometry.width);
  ego.get("l_f", sc.ego.geometry.l_f);
  ego.get("l_r", sc.ego.geometry.l_r);

  if (root.has("instances")) {
    const Node insts = root.at("instances");
    for (std::size_t k = 0; k < insts.array_size(); ++k) {
      const Node n = insts.item(k);
      n.expect_object({"id", "type", "length", "width", "radius", "path", "speed", "start_time", "heading"});
      InstanceSpec in;
      in.id = n.at("id").string();
      in.kind = parse_kind(n.at("type"));
      n.get("length", in.footprint.length);
      n.get("width", in.footprint.width);
      n.get("radius", in.radius);
      in.motion.path = n.at("path").points();
      n.get("speed", in.motion.speed);
      n.get("start_time", in.motion.start_time);
      n.get("heading", in.motion.heading);
      sc.instances.push_back(std::move(in));
    }
  }

  if (root.has("priority")) {
    const Node pr = root.at("priority");
    sc.priority.classes.clear();
    for (std::size_t k = 0; k < pr.array_size(); ++k) {
      const Node c = pr.item(k);
      std::vector<std::string> cls;
      for (std::size_t r = 0; r < c.array_size(); ++r) cls.push_back(c.item(r).string());
      sc.priority.classes.push_back(std::move(cls));
    }
  }

  if (root.has("limits")) {
    const Node n = root.at("limits");
    n.expect_object({"v_min", "v_max", "a_min", "a_max", "jerk_min", "jerk_max", "delta_min", "delta_max", "omega_min",
                     "omega_max", "steer_min", "steer_max"});
    auto& L = sc.limits;
    n.get("v_min", L.v_min);
    n.get("v_max", L.v_max);
    n.get("a_min", L.a_min);
    n.get("a_max", L.a_max);
    n.get("jerk_min", L.jerk_min);
    n.get("jerk_max", L.jerk_max);
    n.get("delta_min", L.delta_min);
    n.get("delta_max", L.delta_max);
    n.get("omega_min", L.omega_min);
    n.get("omega_max", L.omega_max);
    n.get("steer_min", L.steer_min);
    n.get("steer_max", L.steer_max);
  }

  if (root.has("rules")) {
    const Node n = root.at("rules");
    n.expect_object({"v_max_s", "v_min_s", "a_max_s", "a_lat_s", "a_lat_m", "d_max", "d1", "eta1", "d7", "eta7",
                     "d8_left", "eta8_left", "d8_right", "eta8_right", "d8_front", "eta8_front"});
    auto& R = sc.rules;
    n.get("v_max_s", R.v_max_s);
    n.get("v_min_s", R.v_min_s);
    n.get("a_max_s", R.a_max_s);
    n.get("a_lat_s", R.a_lat_s);
    n.get("a_lat_m", R.a_lat_m);
    n.get("d_max", R.d_max);
    read_clearance(n, "d1", "eta1", R.r1);
    read_clearance(n, "d7", "eta7", R.r7);
    read_clearance(n, "d8_left", "eta8_left", R.r8_left);
    read_clearance(n, "d8_right", "eta8_right", R.r8_right);
    read_clearance(n, "d8_front", "eta8_front", R.r8_front);
  }
  // Metric normalizers are the vehicle's own capabilities.
  sc.rules.v_max = sc.limits.v_max;
  sc.rules.v_min = sc.limits.v_min;
  sc.rules.a_max = sc.limits.a_max;

  if (root.has("planner")) {
    const Node n = root.at("planner");
    n.expect_object({"dt", "T", "v_d", "p_e", "weights", "class_k", "class_k_by_rule", "clf", "delta_zero_tol",
                     "score_eps", "beta", "z_max", "path_resolution", "gamma", "qp_tol", "seed"});
    auto& P = sc.planner;
    n.get("dt", P.dt);
    n.get("T", P.horizon);
    n.get("v_d", P.v_desired);
    n.get("p_e", P.p_e);
    if (n.has("weights")) {
      const Node w = n.at("weights");
      if (!w.raw().is_object()) w.fail("expected an object");
      for (auto it = w.raw().begin(); it != w.raw().end(); ++it) {
        P.weights[it.key()] = Node(it.value(), w.path() + "." + it.key()).number();
      }
    }
    if (n.has("class_k")) P.class_k = n.at("class_k").numbers();
    if (n.has("class_k_by_rule")) {
      const Node c = n.at("class_k_by_rule");
      if (!c.raw().is_object()) c.fail("expected an object");
      for (auto it = c.raw().begin(); it != c.raw().end(); ++it) {
        P.class_k_by_rule[it.key()] = Node(it.value(), c.path() + "." + it.key()).numbers();
      }
    }
    if (n.has("clf")) {
      const Node c = n.at("clf");
      c.expect_object({"k1", "c0", "c_lat", "k_d", "k_mu", "k_delta", "epsilon"});
      c.get("k1", P.clf.k1);
      c.get("c0", P.clf.c0);
      c.get("c_lat", P.clf.c_lat);
      c.get("k_d", P.clf.k_d);
      c.get("k_mu", P.clf.k_mu);
      c.get("k_delta", P.clf.k_delta);
      c.get("epsilon", P.clf.epsilon);
    }
    n.get("delta_zero_tol", P.delta_zero_tol);
    n.get("score_eps", P.score_eps);
    n.get("beta", P.cover_beta);
    n.get("z_max", P.cover_z_max);
    n.get("path_resolution", P.path_resolution);
    n.get("gamma", P.gamma);
    n.get("qp_tol", P.qp_tol);
    if (n.has("seed")) {
      const Node s = n.at("seed");
      if (!s.raw().is_number_unsigned()) s.fail("expected a non-negative integer");
      P.seed = s.raw().get<std::uint64_t>();
    }
  }

  sc.validate();
  return sc;
}

std::string dump_scenario(const ScenarioSpec& sc) {
  json j;
  j["name"] = sc.name;
  json lanes = json::array();
  for (const auto& l : sc.map.lanes) lanes.push_back({{"id", l.id}, {"centerline", points_json(l.centerline)}, {"width", l.width}});
  j["map"] = {{"drivable_area", {{"centerline", points_json(sc.map.drivable_centerline)}, {"width", sc.map.drivable_width}}},
              {"lanes", lanes}};
  const auto& x = sc.ego.initial;
  const auto& g = sc.ego.geometry;
  j["ego"] = {{"lane", sc.ego.lane}, {"s", x.s},         {"d", x.d},           {"mu", x.mu},
              {"v", x.v},           {"a", x.a},         {"delta", x.delta},   {"omega", x.omega},
              {"length", g.length}, {"width", g.width}, {"l_f", g.l_f},       {"l_r", g.l_r}};
  json insts = json::array();
  for (const auto& in : sc.instances) {
    json o = {{"id", in.id},
              {"type", to_string(in.kind)},
              {"path", points_json(in.motion.path)},
              {"speed", in.motion.speed},
              {"start_time", in.motion.start_time},
              {"heading", in.motion.heading}};
    if (in.kind == InstanceKind::kPedestrian) {
      o["radius"] = in.radius;
    } else {
      o["length"] = in.footprint.length;
      o["width"] = in.footprint.width;
    }
    insts.push_back(o);
  }
  j["instances"] = insts;
  j["priority"] = sc.priority.classes;
  const auto& L = sc.limits;
  j["limits"] = {{"v_min", L.v_min},         {"v_max", L.v_max},         {"a_min", L.a_min},
                 {"a_max", L.a_max},         {"jerk_min", L.jerk_min},   {"jerk_max", L.jerk_max},
                 {"delta_min", L.delta_min}, {"delta_max", L.delta_max}, {"omega_min", L.omega_min},
                 {"omega_max", L.omega_max}, {"steer_min", L.steer_min}, {"steer_max", L.steer_max}};
  const auto& R = sc.rules;
  j["rules"] = {{"v_max_s", R.v_max_s},       {"v_min_s", R.v_min_s},       {"a_max_s", R.a_max_s},
                {"a_lat_s", R.a_lat_s},       {"a_lat_m", R.a_lat_m},       {"d_max", R.d_max},
                {"d1", R.r1.d},               {"eta1", R.r1.eta},           {"d7", R.r7.d},
                {"eta7", R.r7.eta},           {"d8_left", R.r8_left.d},     {"eta8_left", R.r8_left.eta},
                {"d8_right", R.r8_right.d},   {"eta8_right", R.r8_right.eta}, {"d8_front", R.r8_front.d},
                {"eta8_front", R.r8_front.eta}};
  const auto& P = sc.planner;
  j["planner"] = {{"dt", P.dt},
                  {"T", P.horizon},
                  {"v_d", P.v_desired},
                  {"p_e", P.p_e},
                  {"weights", P.weights},
                  {"class_k", P.class_k},
                  {"class_k_by_rule", P.class_k_by_rule},
                  {"clf",
                   {{"k1", P.clf.k1},
                    {"c0", P.clf.c0},
                    {"c_lat", P.clf.c_lat},
                    {"k_d", P.clf.k_d},
                    {"k_mu", P.clf.k_mu},
                    {"k_delta", P.clf.k_delta},
                    {"epsilon", P.clf.epsilon}}},
                  {"delta_zero_tol", P.delta_zero_tol},
                  {"score_eps", P.score_eps},
                  {"beta", P.cover_beta},
                  {"z_max", P.cover_z_max},
                  {"path_resolution", P.path_resolution},
                  {"gamma", P.gamma},
                  {"qp_tol", P.qp_tol},
                  {"seed", P.seed}};
  return j.dump(2);
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_scenario(text);
  } catch (const ScenarioError& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
}

void save_scenario(const ScenarioSpec& sc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ScenarioError("cannot write '" + path.string() + "'");
  out << dump_scenario(sc) << "\n";
}

// ---------------------------------------------------------------------------
// Candidates

double CandidateSpec::speed_at(double s, double fallback) const {
  if (speed_profile.empty()) return fallback;
  if (s <= speed_profile.front().first) return speed_profile.front().second;
  for (std::size_t k = 1; k < speed_profile.size(); ++k) {
    const auto& [s0, v0] = speed_profile[k - 1];
    const auto& [s1, v1] = speed_profile[k];
    if (s <= s1) return v0 + (v1 - v0) * (s - s0) / (s1 - s0);
  }
  return speed_profile.back().second;
}

CandidateSpec parse_candidate(const std::string& text) {
  const json j = parse_json(text, "candidate");
  const Node root(j, "");
  root.expect_object({"name", "waypoints", "speed_profile"});
  CandidateSpec c;
  c.waypoints = root.at("waypoints").points();
  check_polyline(c.waypoints, "waypoints", 2);
  if (root.has("speed_profile")) {
    const Node sp = root.at("speed_profile");
    for (std::size_t k = 0; k < sp.array_size(); ++k) {
      const Vec2 p = sp.item(k).point();
      if (p.y() < 0.0) sp.item(k).fail("speed must be non-negative");
      if (!c.speed_profile.empty() && p.x() <= c.speed_profile.back().first) {
        sp.item(k).fail("arc lengths must be strictly increasing");
      }
      c.speed_profile.emplace_back(p.x(), p.y());
    }
  }
  return c;
}

CandidateSpec load_candidate(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_candidate(text);
  } catch (const ScenarioError& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
}

}  // namespace rulecbf
