#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rulecbf/geometry.hpp"

namespace rulecbf {

enum class Rule : int { kR1 = 0, kR2, kR3, kR4, kR5, kR6, kR7, kR8 };
inline constexpr int kNumRules = 8;
inline constexpr std::array<Rule, kNumRules> kAllRules{Rule::kR1, Rule::kR2, Rule::kR3, Rule::kR4,
                                                       Rule::kR5, Rule::kR6, Rule::kR7, Rule::kR8};

std::string rule_name(Rule r);  // "r1".."r8"
std::optional<Rule> parse_rule(const std::string& name);
bool is_clearance_rule(Rule r);

/// Threshold d + eta * v.
struct Clearance {
  double d = 0.0;
  double eta = 0.0;
  double at(double v) const { return d + eta * v; }
};

struct RuleParams {
  // vehicle capabilities used as normalizers
  double v_max = 10.0;
  double v_min = 0.0;
  double a_max = 3.5;
  double a_lat_m = 3.5;
  // scenario limits
  double v_max_s = 7.0;
  double v_min_s = 3.0;
  double a_max_s = 2.5;
  double a_lat_s = 1.75;
  double d_max = 2.0;  // infringement normalizer for r2/r3
  Clearance r1{1.0, 0.067};
  Clearance r7{0.3, 0.13};
  Clearance r8_left{0.5, 0.036};
  Clearance r8_right{0.5, 0.036};
  Clearance r8_front{1.0, 2.0};

  void validate() const;
};

/// Everything the eight metrics need from one time sample.
struct RuleSample {
  double v = 0.0;
  double a = 0.0;
  double kappa = 0.0;  // curvature of the reference the vehicle follows
  Infringement drivable;
  Infringement lane;
  std::vector<double> pedestrian_distance;  // footprint distance per pedestrian
  std::vector<double> parked_distance;      // footprint distance per parked vehicle
  std::vector<DirectionalDistances> active;  // per active vehicle other than ego
};

/// Per-instance instantaneous scores in [0, 1]; single-instance rules return
/// one entry, clearance rules one per instance (possibly none).
std::vector<double> instantaneous_violation(Rule r, const RuleSample& s, const RuleParams& p);

/// True iff the rule's statement holds at the sample.
bool statement_holds(Rule r, const RuleSample& s, const RuleParams& p);

enum class InstanceAggregate { kMax, kRms, kMean };
InstanceAggregate instance_aggregate(Rule r);

/// Aggregates one instance's series sampled on a uniform grid (trapezoid rule
/// for the time integrals).
double instance_violation(InstanceAggregate agg, std::span<const double> series, double dt);
double instance_violation(Rule r, std::span<const double> series, double dt);

/// Total score from instance scores. Clearance rules take the root mean of
/// the instance scores (zero instances give 0); the others pass through.
double total_violation(Rule r, std::span<const double> instance_scores);

struct RuleScores {
  std::vector<std::vector<double>> series;  // [instance][time]
  std::vector<double> instance;
  double total = 0.0;
};

struct ViolationReport {
  std::array<RuleScores, kNumRules> rules;

  const RuleScores& operator[](Rule r) const { return rules[static_cast<int>(r)]; }
  RuleScores& operator[](Rule r) { return rules[static_cast<int>(r)]; }
  std::map<std::string, double> totals() const;
  std::vector<Rule> violated(double eps) const;
};

/// Scores a sampled trajectory. `samples` must be on a uniform grid of step dt.
ViolationReport score_samples(std::span<const RuleSample> samples, double dt, const RuleParams& p);

class PriorityError : public std::invalid_argument {
 public:
  explicit PriorityError(const std::string& what) : std::invalid_argument(what) {}
};

/// Equivalence classes in increasing priority: classes[0] has priority 1.
struct PriorityStructure {
  std::vector<std::vector<std::string>> classes;

  static PriorityStructure case_study();  // {r5} < {r3,r6} < {r4} < {r2,r7,r8} < {r1}

  void validate() const;
  int num_classes() const { return static_cast<int>(classes.size()); }
  int priority_of(const std::string& rule) const;  // 0 when absent
  int priority_of(Rule r) const { return priority_of(rule_name(r)); }
  std::vector<std::string> rules() const;
};

/// Highest priority among rules with total > eps (0 if none).
int highest_violated_priority(const std::map<std::string, double>& totals, const PriorityStructure& ps, double eps);

enum class Comparison { kFirstBetter, kSecondBetter, kEquivalent };
std::string to_string(Comparison c);

Comparison compare_trajectories(const std::map<std::string, double>& first, const std::map<std::string, double>& second,
                                const PriorityStructure& ps, double eps = 1e-6);

inline constexpr int kMaxRelaxationClasses = 12;

/// Subsets of class priorities {1..n}, each listed in increasing order,
/// sorted so that sets with a lower top priority come first; ties are broken
/// on the next-highest member, and a set that is a prefix of another (in
/// descending order) comes first. The first entry is the empty set.
std::vector<std::vector<int>> sorted_relaxation_sets(int num_classes);

}  // namespace rulecbf
