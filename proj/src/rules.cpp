#include "rulecbf/rules.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace rulecbf {

namespace {

double sq(double x) { return x * x; }
double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// max(0, (threshold(v) - dist) / threshold(v_max))^2 with the distance
// floored at 0 (footprints cannot be closer than touching).
double clearance_score(const Clearance& c, double v, double dist, double v_max) {
  const double need = c.at(v);
  const double norm = c.at(v_max);
  if (norm <= 0.0) return 0.0;
  return clamp01(sq(std::max(0.0, (need - std::max(dist, 0.0)) / norm)));
}

double infringement_score(const Infringement& inf, double d_max) {
  return clamp01(sq((inf.left + inf.right) / (2.0 * d_max)));
}

}  // namespace

std::string rule_name(Rule r) { return "r" + std::to_string(static_cast<int>(r) + 1); }

std::optional<Rule> parse_rule(const std::string& name) {
  for (Rule r : kAllRules) {
    if (rule_name(r) == name) return r;
  }
  return std::nullopt;
}

bool is_clearance_rule(Rule r) {
  return r == Rule::kR1 || r == Rule::kR2 || r == Rule::kR3 || r == Rule::kR7 || r == Rule::kR8;
}

void RuleParams::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string("rule parameter must be positive: ") + what);
  };
  positive(v_max, "v_max");
  positive(a_max, "a_max");
  positive(a_lat_m, "a_lat_m");
  positive(v_max_s, "v_max_s");
  positive(v_min_s - v_min, "v_min_s - v_min");
  positive(a_max_s, "a_max_s");
  positive(a_lat_s, "a_lat_s");
  positive(d_max, "d_max");
  for (const Clearance* c : {&r1, &r7, &r8_left, &r8_right, &r8_front}) {
    if (c->d < 0.0 || c->eta < 0.0) throw std::invalid_argument("clearance thresholds must be non-negative");
  }
}

std::vector<double> instantaneous_violation(Rule r, const RuleSample& s, const RuleParams& p) {
  std::vector<double> out;
  switch (r) {
    case Rule::kR1:
      for (double d : s.pedestrian_distance) out.push_back(clearance_score(p.r1, s.v, d, p.v_max));
      break;
    case Rule::kR2:
      out.push_back(infringement_score(s.drivable, p.d_max));
      break;
    case Rule::kR3:
      out.push_back(infringement_score(s.lane, p.d_max));
      break;
    case Rule::kR4:
      out.push_back(clamp01(sq(std::max(0.0, (s.v - p.v_max_s) / p.v_max))));
      break;
    case Rule::kR5:
      out.push_back(clamp01(sq(std::max(0.0, (p.v_min_s - s.v) / (p.v_min_s - p.v_min)))));
      break;
    case Rule::kR6: {
      // Penalizes exceeding the comfort limits; each term is capped at 1.
      const double lon = clamp01((std::abs(s.a) - p.a_max_s) / p.a_max);
      const double lat = clamp01((std::abs(s.kappa) * s.v * s.v - p.a_lat_s) / p.a_lat_m);
      out.push_back(clamp01(sq(lon + lat)));
      break;
    }
    case Rule::kR7:
      for (double d : s.parked_distance) out.push_back(clearance_score(p.r7, s.v, d, p.v_max));
      break;
    case Rule::kR8:
      for (const auto& dd : s.active) {
        out.push_back((clearance_score(p.r8_left, s.v, dd.left, p.v_max) +
                       clearance_score(p.r8_right, s.v, dd.right, p.v_max) +
                       clearance_score(p.r8_front, s.v, dd.front, p.v_max)) /
                      3.0);
      }
      break;
  }
  return out;
}

bool statement_holds(Rule r, const RuleSample& s, const RuleParams& p) {
  switch (r) {
    case Rule::kR1:
      return std::all_of(s.pedestrian_distance.begin(), s.pedestrian_distance.end(),
                         [&](double d) { return d >= p.r1.at(s.v); });
    case Rule::kR2:
      return s.drivable.left + s.drivable.right == 0.0;
    case Rule::kR3:
      return s.lane.left + s.lane.right == 0.0;
    case Rule::kR4:
      return s.v <= p.v_max_s;
    case Rule::kR5:
      return s.v >= p.v_min_s;
    case Rule::kR6:
      return std::abs(s.a) <= p.a_max_s && std::abs(s.kappa) * s.v * s.v <= p.a_lat_s;
    case Rule::kR7:
      return std::all_of(s.parked_distance.begin(), s.parked_distance.end(),
                         [&](double d) { return d >= p.r7.at(s.v); });
    case Rule::kR8:
      return std::all_of(s.active.begin(), s.active.end(), [&](const DirectionalDistances& dd) {
        return dd.left >= p.r8_left.at(s.v) && dd.right >= p.r8_right.at(s.v) && dd.front >= p.r8_front.at(s.v);
      });
  }
  return true;
}

InstanceAggregate instance_aggregate(Rule r) {
  switch (r) {
    case Rule::kR1:
    case Rule::kR7:
      return InstanceAggregate::kMax;
    case Rule::kR8:
      return InstanceAggregate::kMean;
    default:
      return InstanceAggregate::kRms;
  }
}

double instance_violation(InstanceAggregate agg, std::span<const double> series, double dt) {
  if (series.empty()) throw std::invalid_argument("instance_violation: empty series");
  if (agg == InstanceAggregate::kMax) return *std::max_element(series.begin(), series.end());
  double mean = series[0];
  if (series.size() > 1) {
    if (!(dt > 0.0)) throw std::invalid_argument("instance_violation: dt must be positive");
    double acc = 0.0;
    for (std::size_t k = 1; k < series.size(); ++k) acc += 0.5 * (series[k - 1] + series[k]) * dt;
    mean = acc / (dt * static_cast<double>(series.size() - 1));
  }
  mean = std::max(mean, 0.0);
  return agg == InstanceAggregate::kRms ? std::sqrt(mean) : mean;
}

double instance_violation(Rule r, std::span<const double> series, double dt) {
  return instance_violation(instance_aggregate(r), series, dt);
}

double total_violation(Rule r, std::span<const double> instance_scores) {
  if (r == Rule::kR1 || r == Rule::kR7 || r == Rule::kR8) {
    // r8 divides by n_aveh - 1 with ego counted in n_aveh, i.e. the number of
    // other vehicles, which is what we are handed.
    if (instance_scores.empty()) return 0.0;
    const double sum = std::accumulate(instance_scores.begin(), instance_scores.end(), 0.0);
    return std::sqrt(sum / static_cast<double>(instance_scores.size()));
  }
  if (instance_scores.size() != 1) throw std::invalid_argument("total_violation: expected a single instance");
  return instance_scores[0];
}

std::map<std::string, double> ViolationReport::totals() const {
  std::map<std::string, double> out;
  for (Rule r : kAllRules) out[rule_name(r)] = (*this)[r].total;
  return out;
}

std::vector<Rule> ViolationReport::violated(double eps) const {
  std::vector<Rule> out;
  for (Rule r : kAllRules) {
    if ((*this)[r].total > eps) out.push_back(r);
  }
  return out;
}

ViolationReport score_samples(std::span<const RuleSample> samples, double dt, const RuleParams& p) {
  if (samples.empty()) throw std::invalid_argument("score_samples: empty trajectory");
  ViolationReport rep;
  for (Rule r : kAllRules) {
    RuleScores& rs = rep[r];
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const auto inst = instantaneous_violation(r, samples[k], p);
      if (k == 0) rs.series.assign(inst.size(), {});
      if (inst.size() != rs.series.size()) throw std::invalid_argument("score_samples: instance count changed");
      for (std::size_t i = 0; i < inst.size(); ++i) rs.series[i].push_back(inst[i]);
    }
    for (const auto& s : rs.series) rs.instance.push_back(instance_violation(r, s, dt));
    rs.total = total_violation(r, rs.instance);
  }
  return rep;
}

PriorityStructure PriorityStructure::case_study() {
  return {{{"r5"}, {"r3", "r6"}, {"r4"}, {"r2", "r7", "r8"}, {"r1"}}};
}

void PriorityStructure::validate() const {
  if (classes.empty()) throw PriorityError("priority structure has no classes");
  std::set<std::string> seen;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (classes[k].empty()) throw PriorityError("equivalence class " + std::to_string(k + 1) + " is empty");
    for (const auto& r : classes[k]) {
      if (!seen.insert(r).second) throw PriorityError("rule '" + r + "' appears in more than one class");
    }
  }
}

int PriorityStructure::priority_of(const std::string& rule) const {
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (std::find(classes[k].begin(), classes[k].end(), rule) != classes[k].end()) return static_cast<int>(k) + 1;
  }
  return 0;
}

std::vector<std::string> PriorityStructure::rules() const {
  std::vector<std::string> out;
  for (const auto& c : classes) out.insert(out.end(), c.begin(), c.end());
  return out;
}

int highest_violated_priority(const std::map<std::string, double>& totals, const PriorityStructure& ps, double eps) {
  int h = 0;
  for (const auto& [name, score] : totals) {
    if (score > eps) h = std::max(h, ps.priority_of(name));
  }
  return h;
}

std::string to_string(Comparison c) {
  switch (c) {
    case Comparison::kFirstBetter:
      return "first-better";
    case Comparison::kSecondBetter:
      return "second-better";
    case Comparison::kEquivalent:
      return "equivalent";
  }
  return "?";
}

Comparison compare_trajectories(const std::map<std::string, double>& first, const std::map<std::string, double>& second,
                                const PriorityStructure& ps, double eps) {
  const int h1 = highest_violated_priority(first, ps, eps);
  const int h2 = highest_violated_priority(second, ps, eps);
  if (h1 != h2) return h1 < h2 ? Comparison::kFirstBetter : Comparison::kSecondBetter;
  if (h1 == 0) return Comparison::kEquivalent;
  auto top = [&](const std::map<std::string, double>& t) {
    double m = 0.0;
    for (const auto& name : ps.classes[h1 - 1]) {
      const auto it = t.find(name);
      if (it != t.end()) m = std::max(m, it->second);
    }
    return m;
  };
  const double m1 = top(first), m2 = top(second);
  if (std::abs(m1 - m2) <= eps) return Comparison::kEquivalent;
  return m1 < m2 ? Comparison::kFirstBetter : Comparison::kSecondBetter;
}

std::vector<std::vector<int>> sorted_relaxation_sets(int num_classes) {
  if (num_classes < 0 || num_classes > kMaxRelaxationClasses) {
    throw PriorityError("relaxation power set supports 0.." + std::to_string(kMaxRelaxationClasses) + " classes");
  }
  std::vector<std::vector<int>> sets;
  for (unsigned mask = 0; mask < (1u << num_classes); ++mask) {
    std::vector<int> s;
    for (int k = 0; k < num_classes; ++k) {
      if (mask & (1u << k)) s.push_back(k + 1);
    }
    sets.push_back(std::move(s));
  }
  std::sort(sets.begin(), sets.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  });
  return sets;
}

}  // namespace rulecbf
