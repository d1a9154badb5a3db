#pragma once

#include <map>
#include <string>
#include <tuple>
#include <utility>

#include "scenario.hpp"

namespace bellkcbs {

// Expectation values extracted from a behavior and its Bob marginal:
//   ab[(x,y)]      = <A_x B_y>        from singleton joint contexts,
//   abb[(x,y,y')]  = <A_x B_y B_y'>   from two-measurement joint contexts,
//   bb[(y,y')]     = <B_y B_y'>       from marginal edge contexts.
struct CorrelatorSet {
  std::map<std::pair<int, int>, double> ab;
  std::map<std::tuple<int, int, int>, double> abb;
  std::map<std::pair<int, int>, double> bb;
};

CorrelatorSet correlators_from_behavior(const Behavior& behavior,
                                        const MarginalBehavior& marginal);

// Local-hidden-variable witness
//   alpha = <A_0 B_0> + <A_0 B_2 B_3> + <A_1 B_0> - <A_1 B_2 B_3>,  LHV bound 2.
double alpha_chsh(const CorrelatorSet& c);
inline constexpr double kAlphaLocalBound = 2.0;

// Noncontextual witness
//   beta = <B_0 B_1> + <B_1 B_2> + <B_2 B_3> + <B_3 B_4> - <B_4 B_0>,  NCHV bound 3.
double beta_kcbs(const CorrelatorSet& c);
inline constexpr double kBetaNoncontextualBound = 3.0;

enum class Region { neither, contextual_only, nonlocal_only, both };

// Strict-inequality classification against the two bounds.
Region classify(double alpha, double beta);
const char* region_name(Region region);

struct InequalityResult {
  double alpha = 0.0;
  double beta = 0.0;
  Region region = Region::neither;
};

InequalityResult evaluate_inequalities(const Behavior& behavior);

}  // namespace bellkcbs
