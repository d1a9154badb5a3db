#include "hidden_variables.hpp"

#include <algorithm>

#include "error.hpp"

namespace bellkcbs {
namespace {

std::vector<int> tuple_from_digit(std::size_t digit, std::size_t size) {
  std::vector<int> tuple(size);
  for (std::size_t pos = 0; pos < size; ++pos) {
    tuple[pos] = ((digit >> (size - 1 - pos)) & 1u) ? +1 : -1;
  }
  return tuple;
}

const std::vector<int>& context_tuple(const LocalDeterministicStrategy& s,
                                      const Context& ctx) {
  const auto it = s.bob.find(ctx);
  if (it == s.bob.end()) {
    fail(ErrorKind::structure, "strategy lacks an assignment for a required context");
  }
  return it->second;
}

int product(const std::vector<int>& tuple) {
  int p = 1;
  for (int o : tuple) p *= o;
  return p;
}

}  // namespace

std::vector<LocalDeterministicStrategy> enumerate_local_strategies(const Scenario& scenario) {
  std::size_t bob_count = 1;
  for (const Context& ctx : scenario.bob_contexts) bob_count <<= ctx.size();

  std::vector<LocalDeterministicStrategy> out;
  out.reserve(4 * bob_count);
  for (std::size_t alice_idx = 0; alice_idx < 4; ++alice_idx) {
    const std::array<int, 2> alice{(alice_idx & 2u) ? +1 : -1, (alice_idx & 1u) ? +1 : -1};
    for (std::size_t code = 0; code < bob_count; ++code) {
      LocalDeterministicStrategy s;
      s.alice = alice;
      // Mixed-radix decode, first context most significant.
      std::size_t rest = code;
      for (auto it = scenario.bob_contexts.rbegin(); it != scenario.bob_contexts.rend(); ++it) {
        const std::size_t radix = std::size_t{1} << it->size();
        s.bob[*it] = tuple_from_digit(rest % radix, it->size());
        rest /= radix;
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<NoncontextualStrategy> enumerate_noncontextual_strategies() {
  std::vector<NoncontextualStrategy> out;
  out.reserve(32);
  for (std::size_t code = 0; code < 32; ++code) {
    NoncontextualStrategy s;
    for (std::size_t j = 0; j < 5; ++j) s.outcomes[j] = ((code >> (4 - j)) & 1u) ? +1 : -1;
    out.push_back(s);
  }
  return out;
}

LocalDeterministicStrategy product_strategy(const NoncontextualStrategy& nc,
                                            const std::array<int, 2>& alice,
                                            const Scenario& scenario) {
  LocalDeterministicStrategy s;
  s.alice = alice;
  for (const Context& ctx : scenario.bob_contexts) {
    std::vector<int> tuple;
    tuple.reserve(ctx.size());
    for (int y : ctx) tuple.push_back(nc.outcomes.at(static_cast<std::size_t>(y)));
    s.bob[ctx] = std::move(tuple);
  }
  return s;
}

std::vector<LocalDeterministicStrategy> enumerate_product_strategies(const Scenario& scenario) {
  std::vector<LocalDeterministicStrategy> out;
  out.reserve(128);
  const auto ncs = enumerate_noncontextual_strategies();
  for (std::size_t alice_idx = 0; alice_idx < 4; ++alice_idx) {
    const std::array<int, 2> alice{(alice_idx & 2u) ? +1 : -1, (alice_idx & 1u) ? +1 : -1};
    for (const auto& nc : ncs) out.push_back(product_strategy(nc, alice, scenario));
  }
  return out;
}

Behavior strategy_to_behavior(const LocalDeterministicStrategy& strategy,
                              const Scenario& scenario) {
  Behavior behavior;
  for (const auto& jc : scenario.joint_contexts) {
    const auto& [x, ctx] = jc;
    std::vector<double> table(table_size(ctx), 0.0);
    table[outcome_index(strategy.alice.at(static_cast<std::size_t>(x)),
                        context_tuple(strategy, ctx))] = 1.0;
    behavior.tables.emplace(jc, std::move(table));
  }
  validate_behavior(behavior);
  return behavior;
}

double evaluate_functional(const LocalDeterministicStrategy& s, Functional f) {
  int alpha = 0, beta = 0;
  if (f == Functional::alpha || f == Functional::alpha_plus_beta) {
    const int b0 = context_tuple(s, {0})[0];
    const int b23 = product(context_tuple(s, {2, 3}));
    alpha = s.alice[0] * b0 + s.alice[0] * b23 + s.alice[1] * b0 - s.alice[1] * b23;
  }
  if (f == Functional::beta || f == Functional::alpha_plus_beta) {
    beta = product(context_tuple(s, {0, 1})) + product(context_tuple(s, {1, 2})) +
           product(context_tuple(s, {2, 3})) + product(context_tuple(s, {3, 4})) -
           product(context_tuple(s, {4, 0}));
  }
  switch (f) {
    case Functional::alpha: return alpha;
    case Functional::beta: return beta;
    case Functional::alpha_plus_beta: return alpha + beta;
  }
  fail(ErrorKind::invalid_argument, "unknown functional");
}

double beta_noncontextual(const NoncontextualStrategy& s) {
  const auto& b = s.outcomes;
  return b[0] * b[1] + b[1] * b[2] + b[2] * b[3] + b[3] * b[4] - b[4] * b[0];
}

ExtremeResult<LocalDeterministicStrategy> max_functional_local(
    const std::vector<LocalDeterministicStrategy>& vertices, Functional f) {
  if (vertices.empty()) fail(ErrorKind::invalid_argument, "no vertices to maximize over");
  ExtremeResult<LocalDeterministicStrategy> best{evaluate_functional(vertices[0], f), 0,
                                                 vertices[0]};
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    const double value = evaluate_functional(vertices[i], f);
    if (value > best.value) best = {value, i, vertices[i]};
  }
  return best;
}

namespace {

ExtremeResult<NoncontextualStrategy> extreme_beta(
    const std::vector<NoncontextualStrategy>& vertices, bool maximize) {
  if (vertices.empty()) fail(ErrorKind::invalid_argument, "no vertices to extremize over");
  ExtremeResult<NoncontextualStrategy> best{beta_noncontextual(vertices[0]), 0, vertices[0]};
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    const double value = beta_noncontextual(vertices[i]);
    if (maximize ? value > best.value : value < best.value) best = {value, i, vertices[i]};
  }
  return best;
}

}  // namespace

ExtremeResult<NoncontextualStrategy> max_beta_noncontextual(
    const std::vector<NoncontextualStrategy>& vertices) {
  return extreme_beta(vertices, true);
}

ExtremeResult<NoncontextualStrategy> min_beta_noncontextual(
    const std::vector<NoncontextualStrategy>& vertices) {
  return extreme_beta(vertices, false);
}

}  // namespace bellkcbs
