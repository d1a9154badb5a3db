#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <vector>

#include "scenario.hpp"

namespace bellkcbs {

// Deterministic local strategy: one outcome per Alice setting, one outcome
// tuple per Bob context.  Bob's tuples may depend on the whole context
// (context-dependent edges), which is exactly the freedom the local polytope
// has beyond the noncontextual one.
struct LocalDeterministicStrategy {
  std::array<int, 2> alice{};                 // +-1 outcome for x = 0, 1
  std::map<Context, std::vector<int>> bob;    // +-1 tuples in context label order
};

// Deterministic noncontextual strategy: one +-1 outcome per Bob measurement,
// reused in every context containing it.
struct NoncontextualStrategy {
  std::array<int, 5> outcomes{};
};

// All deterministic vertices, Alice assignment major, then context tuples in
// scenario order with the last context varying fastest.  Pentagon scenario:
// 4 * 4^5 * 2 = 8192.
std::vector<LocalDeterministicStrategy> enumerate_local_strategies(const Scenario& scenario);

// All 32 per-measurement assignments, b_0 major, -1 before +1.
std::vector<NoncontextualStrategy> enumerate_noncontextual_strategies();

// The local strategy induced by per-measurement Bob outcomes plus an Alice
// assignment.
LocalDeterministicStrategy product_strategy(const NoncontextualStrategy& nc,
                                            const std::array<int, 2>& alice,
                                            const Scenario& scenario);

// All 4 x 32 = 128 product strategies, Alice assignment major.
std::vector<LocalDeterministicStrategy> enumerate_product_strategies(const Scenario& scenario);

// Deterministic behavior induced by a strategy (probability 1 tables).
Behavior strategy_to_behavior(const LocalDeterministicStrategy& strategy,
                              const Scenario& scenario);

enum class Functional { alpha, beta, alpha_plus_beta };

// Exact +-1 arithmetic; requires the contexts each functional reads
// ({0} and {2,3} for alpha, the five edges for beta).
double evaluate_functional(const LocalDeterministicStrategy& strategy, Functional f);
double beta_noncontextual(const NoncontextualStrategy& strategy);

template <typename Strategy>
struct ExtremeResult {
  double value = 0.0;
  std::size_t index = 0;  // enumeration index of the first extremizer
  Strategy strategy{};
};

ExtremeResult<LocalDeterministicStrategy> max_functional_local(
    const std::vector<LocalDeterministicStrategy>& vertices, Functional f);

ExtremeResult<NoncontextualStrategy> max_beta_noncontextual(
    const std::vector<NoncontextualStrategy>& vertices);
ExtremeResult<NoncontextualStrategy> min_beta_noncontextual(
    const std::vector<NoncontextualStrategy>& vertices);

}  // namespace bellkcbs
