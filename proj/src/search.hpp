#pragma once

#include <string>
#include <vector>

#include "inequalities.hpp"

namespace bellkcbs {

// Full pipeline at one parameter point: model -> behavior -> marginal ->
// correlators -> (alpha, beta).
InequalityResult evaluate_point(double phi, double theta_u, double theta_v);

struct ScanPoint {
  double phi = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  Region region = Region::neither;
};

// `steps` evenly spaced points, endpoints inclusive (steps >= 2, or exactly
// one point when steps == 1 and the endpoints coincide).
std::vector<ScanPoint> phi_scan(double phi_min, double phi_max, int steps,
                                double theta_u, double theta_v);

std::string scan_to_csv(const std::vector<ScanPoint>& scan);

struct ViolationWindow {
  bool empty = true;
  double lo = 0.0;
  double hi = 0.0;
};

// Largest contiguous phi interval inside [0, pi/2] with alpha > 2 and
// beta > 3 simultaneously; endpoints bisected down to `resolution`.
ViolationWindow joint_violation_window(double theta_u, double theta_v,
                                       double resolution);

struct OptimizationResult {
  std::string objective;      // canonical identifier of the parsed objective
  double theta_u = 0.0;
  double theta_v = 0.0;
  double objective_value = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  bool feasible = true;       // false when a constrained objective found no feasible point
  int iterations = 0;         // simplex iterations summed over restarts
};

// Derivative-free maximization over (theta_u, theta_v) in [0, pi]^2 at fixed
// phi.  Objectives:
//   "max_min_margin"                maximize min(alpha - 2, beta - 3)
//   "weighted_sum(w)"               maximize w*alpha + (1-w)*beta
//   "max_beta_given_alpha_above(d)" maximize beta subject to alpha >= 2 + d
// The point (theta_u, theta_v) = (2.868, 1.449) is always evaluated first and
// acts as a floor: the result never falls below that witness.
OptimizationResult optimize_state_params(double phi, const std::string& objective_id);

}  // namespace bellkcbs
