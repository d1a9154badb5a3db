#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quantum.hpp"
#include "search.hpp"

namespace bellkcbs {

// One recorded correlator: predicted value, measured value, 1-sigma
// statistical uncertainty (absolute).
struct CorrelatorRecord {
  std::string label;  // A0B0, A1B0, A0B2B3, A1B2B3, B0B1, ..., B4B0
  double theory = 0.0;
  double value = 0.0;
  double sigma = 0.0;
};

struct ValueSigma {
  double value = 0.0;
  double sigma = 0.0;
};

struct ExperimentRecord {
  std::string id;
  double phi = 0.0;
  std::vector<CorrelatorRecord> correlators;  // the nine canonical labels
  double alpha_theory = 0.0;
  double beta_theory = 0.0;
  ValueSigma alpha;     // reported witness totals (summary-table values)
  ValueSigma beta;
  ValueSigma distance;  // reported no-disturbance distance
  // Detail-table totals kept separately when they disagree with the summary.
  std::optional<ValueSigma> detail_alpha;
  std::optional<ValueSigma> detail_beta;
  std::vector<std::string> flags;  // machine-readable known-inconsistency markers
  std::vector<std::string> notes;  // prose explanations of the flags
};

struct Dataset {
  std::vector<ExperimentRecord> records;
};

inline const std::vector<std::string>& canonical_labels() {
  static const std::vector<std::string> labels{"A0B0",  "A1B0", "A0B2B3", "A1B2B3", "B0B1",
                                               "B1B2", "B2B3", "B3B4",   "B4B0"};
  return labels;
}

Dataset parse_dataset(const std::string& json_text);
Dataset load_dataset(const std::string& path);
const Dataset& bundled_dataset();
std::string dataset_to_json(const Dataset& dataset);

// One recomputation check against a recorded value.  `flagged` marks checks
// whose failure is a documented inconsistency of the record itself; flagged
// failures do not fail the report, but a flag with no real discrepancy does.
struct CheckResult {
  std::string state_id;
  std::string check;  // alpha_value, beta_value, alpha_sigma, beta_sigma,
                      // alpha_theory, beta_theory, detail_alpha, detail_beta
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  bool flagged = false;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_passed = false;
  double max_theory_delta = 0.0;  // worst |recomputed - recorded| witness theory gap
};

// Recompute every derivable number in the dataset: witness totals and sigmas
// from the correlator columns (values exact to the printed 4 decimals, sigmas
// to one unit in the last digit, both linear sums), and the theory totals
// from the quantum model at (theta_u, theta_v).
VerificationReport verify_paper(const Dataset& dataset, double theta_u = kDefaultThetaU,
                                double theta_v = kDefaultThetaV);

std::string verification_to_json(const VerificationReport& report);

// Writes curve.csv (model trace over phi), points.csv (recorded witness pairs
// with region classification) and bounds.csv (the two classical bounds) into
// `output_dir`; returns the paths written.
std::vector<std::string> emit_figure_data(const Dataset& dataset, double theta_u,
                                          double theta_v, int curve_steps,
                                          const std::string& output_dir);

}  // namespace bellkcbs
