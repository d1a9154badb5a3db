#include "inequalities.hpp"

#include "error.hpp"

namespace bellkcbs {
namespace {

int sign_of_bit(std::size_t cell, std::size_t width, std::size_t pos) {
  return ((cell >> (width - 1 - pos)) & 1u) ? +1 : -1;
}

double require(const std::map<std::pair<int, int>, double>& m, int a, int b,
               const char* what) {
  const auto it = m.find({a, b});
  if (it == m.end()) {
    fail(ErrorKind::structure, std::string("missing correlator ") + what);
  }
  return it->second;
}

}  // namespace

CorrelatorSet correlators_from_behavior(const Behavior& behavior,
                                        const MarginalBehavior& marginal) {
  CorrelatorSet set;
  for (const auto& [jc, table] : behavior.tables) {
    const auto& [x, ctx] = jc;
    const std::size_t width = 1 + ctx.size();
    double value = 0.0;
    for (std::size_t cell = 0; cell < table.size(); ++cell) {
      int parity = 1;
      for (std::size_t pos = 0; pos < width; ++pos) parity *= sign_of_bit(cell, width, pos);
      value += parity * table[cell];
    }
    if (ctx.size() == 1) {
      set.ab[{x, ctx[0]}] = value;
    } else if (ctx.size() == 2) {
      set.abb[{x, ctx[0], ctx[1]}] = value;
    }
  }
  for (const auto& [ctx, table] : marginal.tables) {
    if (ctx.size() != 2) continue;
    double value = 0.0;
    for (std::size_t cell = 0; cell < table.size(); ++cell) {
      value += sign_of_bit(cell, 2, 0) * sign_of_bit(cell, 2, 1) * table[cell];
    }
    set.bb[{ctx[0], ctx[1]}] = value;
  }
  return set;
}

double alpha_chsh(const CorrelatorSet& c) {
  const auto abb = [&](int x) {
    const auto it = c.abb.find({x, 2, 3});
    if (it == c.abb.end()) {
      fail(ErrorKind::structure,
           "missing correlator <A" + std::to_string(x) + " B2 B3>");
    }
    return it->second;
  };
  return require(c.ab, 0, 0, "<A0 B0>") + abb(0) + require(c.ab, 1, 0, "<A1 B0>") - abb(1);
}

double beta_kcbs(const CorrelatorSet& c) {
  return require(c.bb, 0, 1, "<B0 B1>") + require(c.bb, 1, 2, "<B1 B2>") +
         require(c.bb, 2, 3, "<B2 B3>") + require(c.bb, 3, 4, "<B3 B4>") -
         require(c.bb, 4, 0, "<B4 B0>");
}

Region classify(double alpha, double beta) {
  const bool nonlocal = alpha > kAlphaLocalBound;
  const bool contextual = beta > kBetaNoncontextualBound;
  if (nonlocal && contextual) return Region::both;
  if (nonlocal) return Region::nonlocal_only;
  if (contextual) return Region::contextual_only;
  return Region::neither;
}

const char* region_name(Region region) {
  switch (region) {
    case Region::neither: return "neither";
    case Region::contextual_only: return "contextual_only";
    case Region::nonlocal_only: return "nonlocal_only";
    case Region::both: return "both";
  }
  fail(ErrorKind::invalid_argument, "unknown region");
}

InequalityResult evaluate_inequalities(const Behavior& behavior) {
  const MarginalBehavior marginal = marginalize_bob(behavior);
  const CorrelatorSet set = correlators_from_behavior(behavior, marginal);
  InequalityResult result;
  result.alpha = alpha_chsh(set);
  result.beta = beta_kcbs(set);
  result.region = classify(result.alpha, result.beta);
  return result;
}

}  // namespace bellkcbs
