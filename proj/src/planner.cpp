#include "rulecbf/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>

namespace rulecbf {

std::string to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::kFeasible:
      return "feasible";
    case PlanStatus::kInfeasible:
      return "infeasible";
    case PlanStatus::kAborted:
      return "aborted";
  }
  return "?";
}

namespace {

ClearancePads uniform_pads(double p) { return {p, p, p, p}; }

ClearancePads r1_pads(const RuleParams& p, double v) { return uniform_pads(p.r1.at(v)); }
ClearancePads r7_pads(const RuleParams& p, double v) { return uniform_pads(p.r7.at(v)); }
ClearancePads r8_pads(const RuleParams& p, double v) {
  return {p.r8_front.at(v), 0.0, p.r8_left.at(v), p.r8_right.at(v)};
}

PadInterval pad_interval(const Clearance& c, double v_lo, double v_hi) { return {c.at(v_lo), c.at(v_hi)}; }

}  // namespace

PlanContext::PlanContext(const ScenarioSpec& spec) : scenario(&spec), geo(spec) {
  const auto& R = spec.rules;
  const auto& P = spec.planner;
  const Footprint fp = spec.ego.footprint();
  const double lo = spec.limits.v_min, hi = spec.limits.v_max;
  const PadInterval p1 = pad_interval(R.r1, lo, hi), p7 = pad_interval(R.r7, lo, hi);
  z_r1 = optimize_cover(fp, {p1, p1, p1, p1}, P.cover_beta, P.cover_z_max).count;
  z_r7 = optimize_cover(fp, {p7, p7, p7, p7}, P.cover_beta, P.cover_z_max).count;
  z_r8 = optimize_cover(fp,
                        {pad_interval(R.r8_front, lo, hi), {0.0, 0.0}, pad_interval(R.r8_left, lo, hi),
                         pad_interval(R.r8_right, lo, hi)},
                        P.cover_beta, P.cover_z_max)
             .count;
  bare = optimize_cover(fp, PadRanges::fixed({}), P.cover_beta, P.cover_z_max);
  for (const auto& in : spec.instances) {
    if (in.kind == InstanceKind::kPedestrian) {
      instance_cover.push_back({1, in.radius});
    } else {
      instance_cover.push_back(optimize_cover(in.footprint, PadRanges::fixed({}), P.cover_beta, P.cover_z_max));
    }
  }
}

Anchor Anchor::at(const ReferencePath& path, std::size_t i) {
  return {path.points[i].x(), path.points[i].y(), path.tangent[i], path.curvature[i], path.arclength[i]};
}

namespace {

// Ego reference point and heading as functions of the Frenet state.
template <class S>
void ego_pose(const Anchor& an, const AugState<S>& x, S& gx, S& gy, S& th) {
  using std::cos;
  using std::sin;
  const S ds = x[kS] - an.s;
  const auto [xi, eta] = arc_to_local<S>(an.kappa, ds, x[kD]);
  const double c = std::cos(an.phi), s = std::sin(an.phi);
  gx = an.px + c * xi - s * eta;
  gy = an.py + s * xi + c * eta;
  th = an.phi + an.kappa * ds + x[kMu];
}

// Signed lateral offset of a global point from the arc at `an`.
template <class S>
S arc_offset(const Anchor& an, const S& px, const S& py) {
  const double c = std::cos(an.phi), s = std::sin(an.phi);
  const S dx = px - an.px, dy = py - an.py;
  const S xi = c * dx + s * dy;
  const S eta = c * dy - s * dx;
  return local_to_arc<S>(an.kappa, xi, eta).second;
}

FieldPtr disk_clearance(const Anchor& an, double offset, const Vec2& c, const Vec2& vel, double reach) {
  const double cx = c.x(), cy = c.y(), wx = vel.x(), wy = vel.y();
  return make_field([=](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    using std::cos;
    using std::sin;
    using std::sqrt;
    S gx, gy, th;
    ego_pose(an, x, gx, gy, th);
    const S dx = gx + offset * cos(th) - (cx + wx * x[kTau]);
    const S dy = gy + offset * sin(th) - (cy + wy * x[kTau]);
    return S(sqrt(dx * dx + dy * dy) - reach);
  });
}

// side = +1: stay right of the left edge; side = -1: left of the right edge.
FieldPtr corridor_edge(const Anchor& ego, const Anchor& frame, double offset, double half, double side) {
  return make_field([=](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    using std::cos;
    using std::sin;
    S gx, gy, th;
    ego_pose(ego, x, gx, gy, th);
    const S d = arc_offset<S>(frame, gx + offset * cos(th), gy + offset * sin(th));
    return S(half - side * d);
  });
}

FieldPtr state_bound(int index, double bound, double sign) {
  // sign = +1: x[index] - bound >= 0; sign = -1: bound - x[index] >= 0.
  return make_field([=](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    return S(sign * (x[index] - bound));
  });
}

void add(std::vector<HocbfSpec>& out, const PlannerConfig& cfg, FieldPtr b, int m, const std::string& owner) {
  out.push_back({std::move(b), m, cfg.chain_for(owner).resized(m), false, owner});
}

}  // namespace

std::vector<HocbfSpec> step_barriers(const PlanContext& ctx, const StepState& st) {
  const ScenarioSpec& sc = ctx.sc();
  const auto& R = sc.rules;
  const auto& cfg = sc.planner;
  const Footprint fp = sc.ego.footprint();
  const double v = st.x.v;
  std::vector<HocbfSpec> out;
  const std::set<std::string> active_rules = [&] {
    const auto r = sc.priority.rules();
    return std::set<std::string>(r.begin(), r.end());
  }();
  auto uses = [&](Rule r) { return active_rules.count(rule_name(r)) > 0; };

  const std::vector<InstanceState> inst = propagate_instances(sc, st.t);
  auto clearance = [&](Rule rule, InstanceKind kind, const ClearancePads& pads, int z) {
    if (!uses(rule)) return;
    const auto offsets = disk_offsets(fp, pads, z);
    const double r_ego = min_radius(fp, pads, z);
    for (std::size_t k = 0; k < sc.instances.size(); ++k) {
      const auto& spec = sc.instances[k];
      if (spec.kind != kind) continue;
      const DiskCover& cov = ctx.instance_cover[k];
      std::vector<double> other{0.0};
      if (kind != InstanceKind::kPedestrian) other = disk_offsets(spec.footprint, {}, cov.count);
      const Vec2 axis(std::cos(inst[k].heading), std::sin(inst[k].heading));
      for (double oe : offsets) {
        for (double oi : other) {
          add(out, cfg, disk_clearance(st.lane, oe, inst[k].position + oi * axis, inst[k].velocity, r_ego + cov.radius),
              kDegreeClearance, rule_name(rule));
        }
      }
    }
  };
  clearance(Rule::kR1, InstanceKind::kPedestrian, r1_pads(R, v), ctx.z_r1);
  clearance(Rule::kR7, InstanceKind::kParkedVehicle, r7_pads(R, v), ctx.z_r7);
  clearance(Rule::kR8, InstanceKind::kActiveVehicle, r8_pads(R, v), ctx.z_r8);

  const auto bare_offsets = disk_offsets(fp, {}, ctx.bare.count);
  if (uses(Rule::kR2)) {
    const std::size_t j = nearest_index(ctx.geo.corridor, {st.pose.x, st.pose.y});
    const Anchor frame = Anchor::at(ctx.geo.corridor, j);
    const double half = 0.5 * sc.map.drivable_width - ctx.bare.radius;
    for (double o : bare_offsets) {
      for (double side : {1.0, -1.0}) add(out, cfg, corridor_edge(st.lane, frame, o, half, side), kDegreeLane, "r2");
    }
  }
  if (uses(Rule::kR3)) {
    const double half = 0.5 * ctx.geo.lane.width - ctx.bare.radius;
    for (double o : bare_offsets) {
      for (double side : {1.0, -1.0}) add(out, cfg, corridor_edge(st.lane, st.lane, o, half, side), kDegreeLane, "r3");
    }
  }
  if (uses(Rule::kR4)) add(out, cfg, state_bound(kV, R.v_max_s, -1.0), kDegreeSpeed, "r4");
  if (uses(Rule::kR5)) add(out, cfg, state_bound(kV, R.v_min_s, 1.0), kDegreeSpeed, "r5");
  if (uses(Rule::kR6)) {
    add(out, cfg, state_bound(kA, R.a_max_s, -1.0), kDegreeAccel, "r6");
    add(out, cfg, state_bound(kA, -R.a_max_s, 1.0), kDegreeAccel, "r6");
    const double k_abs = std::abs(st.lane.kappa);
    // On straight road the lateral term vanishes identically.
    if (k_abs > 1e-9) {
      const double a_lat = R.a_lat_s;
      add(out, cfg,
          make_field([=](const auto& x) {
            using S = std::decay_t<decltype(x[0])>;
            return S(a_lat - k_abs * x[kV] * x[kV]);
          }),
          kDegreeSpeed, "r6");
    }
  }

  const auto limits = limit_barriers(sc);
  out.insert(out.end(), limits.begin(), limits.end());
  return out;
}

std::vector<HocbfSpec> limit_barriers(const ScenarioSpec& sc) {
  const auto& cfg = sc.planner;
  const Limits& L = sc.limits;
  std::vector<HocbfSpec> out;
  add(out, cfg, state_bound(kV, L.v_min, 1.0), kDegreeSpeed, "limit");
  add(out, cfg, state_bound(kV, L.v_max, -1.0), kDegreeSpeed, "limit");
  add(out, cfg, state_bound(kA, L.a_min, 1.0), kDegreeAccel, "limit");
  add(out, cfg, state_bound(kA, L.a_max, -1.0), kDegreeAccel, "limit");
  add(out, cfg, state_bound(kDelta, L.delta_min, 1.0), kDegreeSteerAngle, "limit");
  add(out, cfg, state_bound(kDelta, L.delta_max, -1.0), kDegreeSteerAngle, "limit");
  add(out, cfg, state_bound(kOmega, L.omega_min, 1.0), kDegreeSteerRate, "limit");
  add(out, cfg, state_bound(kOmega, L.omega_max, -1.0), kDegreeSteerRate, "limit");
  return out;
}

double slack_weight(const ScenarioSpec& sc, const std::string& rule) {
  const auto it = sc.planner.weights.find(rule);
  if (it != sc.planner.weights.end()) return it->second;
  return std::pow(10.0, sc.priority.priority_of(rule));
}

StepProblem build_step_qp(const PlanContext& ctx, const StepState& st, const std::vector<HocbfSpec>& barriers,
                          const std::set<std::string>& relaxed, const TrackingTarget& target,
                          const ControlInput& u_ff) {
  const ScenarioSpec& sc = ctx.sc();
  const DriftModel f{st.lane.kappa, sc.ego.geometry};
  const AugState<double> x = st.x.augmented(0.0);

  StepProblem sp;
  for (HocbfSpec spec : barriers) {
    spec.relaxable = spec.owner != "limit" && relaxed.count(spec.owner) > 0;
    sp.rows.push_back(hocbf_row(spec, f, x));
    if (spec.relaxable) {
      sp.relax_column.push_back(kColFirstRelax + static_cast<int>(sp.column_owner.size()));
      sp.column_owner.push_back(spec.owner);
    } else {
      sp.relax_column.push_back(-1);
    }
  }
  sp.rows.push_back(clf_row(build_tracking_clf(sc.planner.clf, target), f, x));
  sp.relax_column.push_back(-1);

  const int n = kColFirstRelax + static_cast<int>(sp.column_owner.size());
  QpProblem& qp = sp.qp;
  qp = QpProblem::with_size(n);
  qp.H(kColJerk, kColJerk) = 1.0;
  qp.H(kColSteer, kColSteer) = 1.0;
  qp.H(kColDeltaE, kColDeltaE) = sc.planner.p_e;
  for (std::size_t c = 0; c < sp.column_owner.size(); ++c) {
    const int k = kColFirstRelax + static_cast<int>(c);
    qp.H(k, k) = slack_weight(sc, sp.column_owner[c]);
  }
  qp.f(kColJerk) = -u_ff.jerk;
  qp.f(kColSteer) = -u_ff.steer;

  const int m = static_cast<int>(sp.rows.size());
  qp.A = Eigen::MatrixXd::Zero(m, n);
  qp.b = Eigen::VectorXd::Zero(m);
  for (int r = 0; r < m; ++r) {
    const auto& row = sp.rows[r];
    // Rows are stored as A z <= b.
    const double s = row.sense == Sense::kGreaterEqual ? -1.0 : 1.0;
    qp.A(r, kColJerk) = s * row.jerk;
    qp.A(r, kColSteer) = s * row.steer;
    qp.A(r, kColDeltaE) = s * row.delta_e;
    if (sp.relax_column[r] >= 0) qp.A(r, sp.relax_column[r]) = s * row.relax;
    qp.b(r) = -s * row.constant;
  }
  const Limits& L = sc.limits;
  qp.lb(kColJerk) = L.jerk_min;
  qp.ub(kColJerk) = L.jerk_max;
  qp.lb(kColSteer) = L.steer_min;
  qp.ub(kColSteer) = L.steer_max;
  return sp;
}

VehicleState lane_state(const ReferencePath& lane, const InertialState& s, std::size_t& ref_index) {
  ref_index = update_reference_index({s.x, s.y}, lane, ref_index);
  const FrenetCoords f = global_to_frenet(s.pose(), lane, ref_index);
  return {f.s, f.d, f.mu, s.v, s.a, s.delta, s.omega};
}

PlanResult simulate_with_relaxation(const PlanContext& ctx, const std::vector<int>& relaxed_classes) {
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioSpec& sc = ctx.sc();
  const PlannerConfig& cfg = sc.planner;
  const int n_steps = cfg.num_steps();

  PlanResult res;
  res.relaxed_classes = relaxed_classes;
  std::set<std::string> relaxed;
  for (int p : relaxed_classes) {
    if (p < 1 || p > sc.priority.num_classes()) throw std::invalid_argument("relaxed class out of range");
    for (const auto& r : sc.priority.classes[p - 1]) {
      relaxed.insert(r);
      res.relaxed_rules.push_back(r);
    }
  }
  for (const auto& r : relaxed) res.slack[r].assign(n_steps + 1, 0.0);
  res.trajectory.dt = cfg.dt;

  auto finish = [&](PlanStatus status, double t, std::string msg) {
    res.status = status;
    res.stop_time = t;
    res.message = std::move(msg);
    res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  };

  InertialState s = initial_inertial_state(sc, ctx.geo);
  std::size_t i = nearest_index(ctx.geo.ego_lane, {s.x, s.y});
  QpSolver solver;
  TrackingTarget target;
  target.v = cfg.v_desired;

  for (int k = 0; k <= n_steps; ++k) {
    const double t = k * cfg.dt;
    TrajectorySample smp;
    smp.t = t;
    smp.pose = s.pose();
    try {
      smp.x = lane_state(ctx.geo.ego_lane, s, i);
    } catch (const SingularityError& e) {
      return finish(PlanStatus::kInfeasible, t, std::string("singular Frenet state: ") + e.what());
    }
    smp.kappa = ctx.geo.ego_lane.curvature[i];
    if (k == n_steps) {
      res.trajectory.samples.push_back(smp);
      break;
    }
    const StepState st{t, smp.x, smp.pose, i, Anchor::at(ctx.geo.ego_lane, i)};
    StepProblem sp;
    try {
      sp = build_step_qp(ctx, st, step_barriers(ctx, st), relaxed, target);
    } catch (const SingularityError& e) {
      return finish(PlanStatus::kInfeasible, t, std::string("singular Frenet state: ") + e.what());
    }
    const QpSolution sol = solver.solve(sp.qp, cfg.qp_tol);
    if (sol.status == QpStatus::kInfeasible) {
      return finish(PlanStatus::kInfeasible, t, "QP infeasible at t = " + std::to_string(t));
    }
    if (sol.status == QpStatus::kMaxIter) {
      return finish(PlanStatus::kAborted, t, "QP iteration limit at t = " + std::to_string(t));
    }
    smp.u = {sol.x(kColJerk), sol.x(kColSteer)};
    smp.delta_e = sol.x(kColDeltaE);
    for (std::size_t c = 0; c < sp.column_owner.size(); ++c) {
      const double d = sol.x(kColFirstRelax + static_cast<int>(c));
      double& slot = res.slack[sp.column_owner[c]][k];
      if (std::abs(d) > std::abs(slot)) slot = d;
    }
    res.trajectory.samples.push_back(smp);
    s = rk4_step_inertial(s, smp.u, cfg.dt, sc.ego.geometry);
  }

  for (const auto& [rule, series] : res.slack) {
    double mx = 0.0;
    for (double d : series) mx = std::max(mx, std::abs(d));
    if (mx > cfg.delta_zero_tol) res.r_relax.insert(rule);
  }
  res.report = score_trajectory(sc, ctx.geo, res.trajectory);
  return finish(PlanStatus::kFeasible, cfg.horizon, "");
}

PlanResult algorithm1(const PlanContext& ctx, int jobs, int max_class) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = max_class > 0 ? std::min(max_class, ctx.sc().priority.num_classes()) : ctx.sc().priority.num_classes();
  const auto sets = sorted_relaxation_sets(n);
  jobs = std::max(1, jobs);
  std::vector<int> aborted;
  for (std::size_t first = 0; first < sets.size(); first += jobs) {
    const std::size_t last = std::min(sets.size(), first + jobs);
    std::vector<PlanResult> batch;
    if (jobs == 1) {
      batch.push_back(simulate_with_relaxation(ctx, sets[first]));
    } else {
      std::vector<std::future<PlanResult>> fut;
      for (std::size_t k = first; k < last; ++k) {
        fut.push_back(std::async(std::launch::async, [&ctx, &sets, k] { return simulate_with_relaxation(ctx, sets[k]); }));
      }
      for (auto& f : fut) batch.push_back(f.get());
    }
    for (std::size_t k = 0; k < batch.size(); ++k) {
      PlanResult& r = batch[k];
      const int level = static_cast<int>(first + k) + 1;
      if (r.status == PlanStatus::kAborted) aborted.push_back(level);
      if (r.feasible()) {
        r.level = level;
        r.aborted_levels = aborted;
        r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
      }
    }
  }
  PlanResult none;
  none.status = PlanStatus::kInfeasible;
  none.aborted_levels = aborted;
  none.message = "every relaxation level is infeasible";
  none.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return none;
}

}  // namespace rulecbf
