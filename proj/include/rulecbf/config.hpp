#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rulecbf/barrier.hpp"

namespace rulecbf {

struct PlannerConfig {
  double dt = 0.1;
  double horizon = 20.0;  // T
  double v_desired = 4.0;
  ClfGains clf{};
  double p_e = 1.0;
  // Slack weights by rule id; rules without an entry get 10^priority.
  std::map<std::string, double> weights;
  // Class-K gains; `class_k_by_rule` entries (rule id or "limit") override.
  std::vector<double> class_k{1.0};
  std::map<std::string, std::vector<double>> class_k_by_rule;
  double delta_zero_tol = 1e-4;
  double score_eps = 1e-6;
  double cover_beta = 2.0;
  int cover_z_max = 12;
  double path_resolution = 0.25;
  double gamma = 0.1;
  double qp_tol = 1e-8;
  double degree_tol = 1e-8;
  std::uint64_t seed = 0;  // recorded only; planning is deterministic

  int num_steps() const;  // T / dt, rejecting non-multiples
  void validate() const;
  ClassKChain chain_for(const std::string& owner) const;
};

}  // namespace rulecbf
