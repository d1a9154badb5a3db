#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace bellkcbs {

// A Bob context is the set of compatible measurements performed in one run,
// kept in label order.  Contexts of size 1 and 2 are the only ones used here.
using Context = std::vector<int>;

// (Alice setting x, Bob context) measured jointly.
using JointContext = std::pair<int, Context>;

// Measurement layout: Alice chooses one dichotomic setting, Bob measures one
// context of +-1-valued compatible observables.  The default scenario has two
// Alice settings, five Bob measurements arranged on a pentagon (adjacent ones
// compatible), the five edge contexts, and the singleton context {0}.
struct Scenario {
  std::vector<int> alice_settings;
  std::vector<int> bob_settings;
  std::vector<Context> bob_contexts;          // edges first, then singletons
  std::vector<JointContext> joint_contexts;   // Alice-major order

  static Scenario pentagon();

  // Pentagon-edge contexts in cycle order; empty for non-pentagon layouts.
  std::vector<Context> edge_contexts() const;

  // Throws ErrorKind::structure on an ill-formed layout.
  void validate() const;
};

// Probability table for one joint context, flat in lexicographic outcome
// order: Alice outcome major, then Bob outcomes in context label order, with
// -1 ordered before +1.  Size is 2^(1+|context|).
std::size_t table_size(const Context& ctx);
std::size_t outcome_index(int a, const std::vector<int>& bs);

// p(a, b|x, ctx) for every joint context of a scenario.
struct Behavior {
  std::map<JointContext, std::vector<double>> tables;
};

// Bob-only marginal p(b|ctx), averaged over the Alice settings that measured
// the context; `cross_setting_spread` records the largest per-cell deviation
// between individual settings and is a no-signalling diagnostic.
struct MarginalBehavior {
  std::map<Context, std::vector<double>> tables;
  std::map<Context, double> cross_setting_spread;
};

struct ConsistencyViolation {
  std::string condition;  // human-readable equality that failed
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ConsistencyReport {
  std::vector<ConsistencyViolation> violations;
  double max_violation = 0.0;  // largest |lhs-rhs| seen over all comparisons

  bool passed() const { return violations.empty(); }
};

std::string joint_context_key(const JointContext& jc);
JointContext parse_joint_context_key(const std::string& key);

// Structure checks: table sizes, probabilities >= -1e-12, rows normalized
// within `tol`.  Throws ErrorKind::structure on failure.
void validate_behavior(const Behavior& behavior, double tol = 1e-12);

std::string behavior_to_json(const Behavior& behavior);
Behavior behavior_from_json(const std::string& text);

MarginalBehavior marginalize_bob(const Behavior& behavior);

// No-signalling: Bob's context marginals must not depend on x, Alice's
// marginal must not depend on the Bob context.
ConsistencyReport check_no_signalling(const Behavior& behavior, double tol);

// No-disturbance: the single-measurement marginal p(b|y) must agree between
// every pair of contexts containing y.
ConsistencyReport check_no_disturbance(const MarginalBehavior& marginal, double tol);

// Sum over pentagon measurements of (p_j - p_j')^2 where p_j / p_j' are the
// +1-outcome marginals of measurement j in its first / second edge context
// (cycle order).  Requires every measurement to sit in exactly two edge
// contexts of the marginal.
double disturbance_distance(const MarginalBehavior& marginal);

}  // namespace bellkcbs
