#include "shot_noise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "error.hpp"

namespace bellkcbs {
namespace {

std::vector<std::uint64_t> multinomial(std::mt19937_64& rng, std::uint64_t n,
                                       const std::vector<double>& probs) {
  std::vector<std::uint64_t> counts(probs.size(), 0);
  double mass = std::accumulate(probs.begin(), probs.end(), 0.0);
  std::uint64_t remaining = n;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    if (remaining == 0 || mass <= 0.0) break;
    const double p = std::clamp(probs[i] / mass, 0.0, 1.0);
    if (p >= 1.0) {
      counts[i] = remaining;
    } else if (p > 0.0) {
      std::binomial_distribution<std::uint64_t> bin(remaining, p);
      counts[i] = bin(rng);
    }
    remaining -= counts[i];
    mass -= probs[i];
  }
  counts.back() = remaining;
  return counts;
}

std::vector<double> frequencies(const CountTable& table) {
  std::vector<double> f(table.counts.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = static_cast<double>(table.counts[i]) / static_cast<double>(table.total);
  }
  return f;
}

// Parity-weighted mean of a table whose cells enumerate +-1 outcomes; the
// product of the outcomes is (-1)^(number of -1 outcomes in the cell).
double table_correlator(const std::vector<double>& probs) {
  const int width = std::countr_zero(probs.size());
  double value = 0.0;
  for (std::size_t cell = 0; cell < probs.size(); ++cell) {
    const int minus_ones = width - std::popcount(cell);
    value += ((minus_ones % 2 == 0) ? +1 : -1) * probs[cell];
  }
  return value;
}

double bootstrap_sigma(std::mt19937_64& rng, const std::vector<double>& freq,
                       std::uint64_t n, int resamples,
                       const std::function<double(const std::vector<double>&)>& statistic) {
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < resamples; ++r) {
    const auto counts = multinomial(rng, n, freq);
    std::vector<double> f(counts.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
    }
    const double value = statistic(f);
    sum += value;
    sum_sq += value * value;
  }
  const double mean = sum / resamples;
  return std::sqrt(std::max(0.0, sum_sq / resamples - mean * mean));
}

const Scenario& pentagon_scenario() {
  static const Scenario scenario = Scenario::pentagon();
  return scenario;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 over the combined value; decorrelates consecutive streams.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CountTable sample_counts(const std::vector<double>& probabilities, std::uint64_t n,
                         std::uint64_t seed) {
  if (probabilities.empty()) fail(ErrorKind::invalid_argument, "empty probability table");
  if (n == 0) fail(ErrorKind::invalid_argument, "need a positive number of counts");
  for (double p : probabilities) {
    if (!(p >= -1e-12)) fail(ErrorKind::structure, "negative probability in count sampling");
  }
  std::mt19937_64 rng(seed);
  return {multinomial(rng, n, probabilities), n};
}

std::map<JointContext, CountTable> sample_joint_counts(const QuantumModel& model,
                                                       const Scenario& scenario,
                                                       std::uint64_t n, std::uint64_t seed) {
  const Behavior behavior = quantum_behavior(model, scenario);
  std::map<JointContext, CountTable> out;
  std::uint64_t stream = 0;
  for (const auto& [jc, table] : behavior.tables) {
    out.emplace(jc, sample_counts(table, n, derive_seed(seed, stream++)));
  }
  return out;
}

BehaviorEstimate estimate_from_counts(const std::map<JointContext, CountTable>& counts,
                                      int resamples, std::uint64_t seed) {
  if (resamples < 2) fail(ErrorKind::invalid_argument, "need at least two resamples");
  BehaviorEstimate estimate;
  std::uint64_t stream = 0;
  for (const auto& [jc, table] : counts) {
    const std::vector<double> freq = frequencies(table);
    NoisyCorrelator corr;
    corr.value = table_correlator(freq);
    std::mt19937_64 rng(derive_seed(seed, 0x10000 + stream++));
    corr.sigma = bootstrap_sigma(rng, freq, table.total, resamples, table_correlator);
    estimate.correlators.emplace(jc, corr);
    estimate.behavior.tables.emplace(jc, freq);
  }
  validate_behavior(estimate.behavior);
  return estimate;
}

SimulationResult simulate_experiment(const QuantumModel& model, std::uint64_t n_per_context,
                                     std::uint64_t seed, int resamples) {
  if (resamples < 2) fail(ErrorKind::invalid_argument, "need at least two resamples");
  const Scenario& scenario = pentagon_scenario();
  const Behavior behavior = quantum_behavior(model, scenario);
  const MarginalBehavior marginal = marginalize_bob(behavior);

  SimulationResult result;
  result.phi = model.phi;
  result.theta_u = model.theta_u;
  result.theta_v = model.theta_v;
  result.counts_per_context = n_per_context;
  result.seed = seed;
  result.resamples = resamples;

  struct Measured {
    std::string label;
    std::vector<double> probs;
  };
  std::vector<Measured> measured;
  const std::vector<Context> edges = scenario.edge_contexts();
  for (const Context& edge : edges) {
    measured.push_back({"B" + std::to_string(edge[0]) + "B" + std::to_string(edge[1]),
                        marginal.tables.at(edge)});
  }
  for (int x : {0, 1}) {
    measured.push_back(
        {"A" + std::to_string(x) + "B0", behavior.tables.at({x, Context{0}})});
  }
  for (int x : {0, 1}) {
    measured.push_back(
        {"A" + std::to_string(x) + "B2B3", behavior.tables.at({x, Context{2, 3}})});
  }

  std::map<std::string, std::vector<double>> sampled_freq;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    const CountTable table =
        sample_counts(measured[i].probs, n_per_context, derive_seed(seed, i));
    const std::vector<double> freq = frequencies(table);
    NoisyCorrelator corr;
    corr.value = table_correlator(freq);
    std::mt19937_64 rng(derive_seed(seed, 0x10000 + i));
    corr.sigma = bootstrap_sigma(rng, freq, n_per_context, resamples, table_correlator);
    result.correlators.emplace(measured[i].label, corr);
    sampled_freq.emplace(measured[i].label, freq);
  }

  const auto corr = [&](const std::string& label) { return result.correlators.at(label); };
  result.alpha.value = corr("A0B0").value + corr("A0B2B3").value + corr("A1B0").value -
                       corr("A1B2B3").value;
  result.alpha.sigma = corr("A0B0").sigma + corr("A0B2B3").sigma + corr("A1B0").sigma +
                       corr("A1B2B3").sigma;
  result.beta.value = corr("B0B1").value + corr("B1B2").value + corr("B2B3").value +
                      corr("B3B4").value - corr("B4B0").value;
  result.beta.sigma = corr("B0B1").sigma + corr("B1B2").sigma + corr("B2B3").sigma +
                      corr("B3B4").sigma + corr("B4B0").sigma;
  result.region = classify(result.alpha.value, result.beta.value);

  // Disturbance distance of the sampled edge marginals, bootstrap over all
  // five tables jointly.
  const auto marginal_of = [&](const std::vector<std::vector<double>>& tables) {
    MarginalBehavior m;
    for (std::size_t e = 0; e < edges.size(); ++e) m.tables.emplace(edges[e], tables[e]);
    return m;
  };
  std::vector<std::vector<double>> observed;
  for (const Context& edge : edges) {
    observed.push_back(
        sampled_freq.at("B" + std::to_string(edge[0]) + "B" + std::to_string(edge[1])));
  }
  result.distance.value = disturbance_distance(marginal_of(observed));
  std::mt19937_64 rng(derive_seed(seed, 0x20000));
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < resamples; ++r) {
    std::vector<std::vector<double>> resampled(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto counts = multinomial(rng, n_per_context, observed[e]);
      resampled[e].resize(counts.size());
      for (std::size_t i = 0; i < counts.size(); ++i) {
        resampled[e][i] = static_cast<double>(counts[i]) / static_cast<double>(n_per_context);
      }
    }
    const double value = disturbance_distance(marginal_of(resampled));
    sum += value;
    sum_sq += value * value;
  }
  const double mean = sum / resamples;
  result.distance.sigma = std::sqrt(std::max(0.0, sum_sq / resamples - mean * mean));
  return result;
}

}  // namespace bellkcbs
