#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "inequalities.hpp"
#include "quantum.hpp"
#include "scenario.hpp"

namespace bellkcbs {

// Fixed-total multinomial counts for one context (Poissonian coincidence
// counting conditioned on the observed total).
struct CountTable {
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
};

struct NoisyCorrelator {
  double value = 0.0;
  double sigma = 0.0;
};

// Deterministic stream splitting: every sampled context uses the seed derived
// from (run seed, stream index), so parallel contexts never share a stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

CountTable sample_counts(const std::vector<double>& probabilities, std::uint64_t n,
                         std::uint64_t seed);

// One multinomial draw per joint context of the scenario.
std::map<JointContext, CountTable> sample_joint_counts(const QuantumModel& model,
                                                       const Scenario& scenario,
                                                       std::uint64_t n, std::uint64_t seed);

struct BehaviorEstimate {
  Behavior behavior;  // observed frequencies (exactly normalized)
  // Full-parity correlator of each table with its bootstrap sigma.
  std::map<JointContext, NoisyCorrelator> correlators;
};

BehaviorEstimate estimate_from_counts(const std::map<JointContext, CountTable>& counts,
                                      int resamples, std::uint64_t seed);

// Simulation of the nine measured contexts (five Bob edge contexts, plus
// A_x B_0 and A_x B_2 B_3 for both x), with bootstrap sigmas.  The alpha and
// beta sigmas are linear sums of their per-correlator sigmas, matching the
// error model the recorded dataset uses.
struct SimulationResult {
  double phi = 0.0;
  double theta_u = 0.0;
  double theta_v = 0.0;
  std::uint64_t counts_per_context = 0;
  std::uint64_t seed = 0;
  int resamples = 0;
  std::map<std::string, NoisyCorrelator> correlators;  // A0B0 ... B4B0
  NoisyCorrelator alpha;
  NoisyCorrelator beta;
  NoisyCorrelator distance;  // no-disturbance distance of the sampled marginal
  Region region = Region::neither;
};

SimulationResult simulate_experiment(const QuantumModel& model, std::uint64_t n_per_context,
                                     std::uint64_t seed, int resamples);

}  // namespace bellkcbs
