#include "bellkcbs.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "dataset.hpp"
#include "error.hpp"
#include "hidden_variables.hpp"
#include "inequalities.hpp"
#include "quantum.hpp"
#include "scenario.hpp"
#include "search.hpp"
#include "shot_noise.hpp"

using namespace bellkcbs;

struct bk_model_struct {
  std::uint32_t magic = 0;
  QuantumModel model;
  Behavior behavior;
  InequalityResult result;
};

struct bk_behavior_struct {
  std::uint32_t magic = 0;
  Behavior behavior;
};

struct bk_dataset_struct {
  std::uint32_t magic = 0;
  Dataset dataset;
};

namespace {

constexpr std::uint32_t kModelMagic = 0x424b4d44;     // "BKMD"
constexpr std::uint32_t kBehaviorMagic = 0x424b4256;  // "BKBV"
constexpr std::uint32_t kDatasetMagic = 0x424b4453;   // "BKDS"

thread_local std::string t_last_error;

int status_from_kind(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return BK_ERR_INVALID_ARGUMENT;
    case ErrorKind::domain: return BK_ERR_DOMAIN;
    case ErrorKind::structure: return BK_ERR_STRUCTURE;
    case ErrorKind::numeric: return BK_ERR_NUMERIC;
    case ErrorKind::parse: return BK_ERR_PARSE;
    case ErrorKind::io: return BK_ERR_IO;
  }
  return BK_ERR_INTERNAL;
}

template <typename Fn>
int wrap(Fn&& fn) {
  try {
    fn();
    return BK_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    return status_from_kind(e.kind());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return BK_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown failure";
    return BK_ERR_INTERNAL;
  }
}

template <typename Handle>
void require_handle(const Handle* handle, std::uint32_t magic, const char* what) {
  if (handle == nullptr || handle->magic != magic) {
    fail(ErrorKind::invalid_argument, std::string(what) + " handle is null or destroyed");
  }
}

void require_out(const void* ptr, const char* what) {
  if (ptr == nullptr) {
    fail(ErrorKind::invalid_argument, std::string(what) + " must not be null");
  }
}

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    fail(ErrorKind::invalid_argument, std::string(what) + " must be finite");
  }
}

char* copy_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

const Scenario& scenario() {
  static const Scenario s = Scenario::pentagon();
  return s;
}

nlohmann::json value_sigma_json(const NoisyCorrelator& c) {
  return nlohmann::json{{"value", c.value}, {"sigma", c.sigma}};
}

}  // namespace

extern "C" {

const char* bk_version(void) { return "1.0.0"; }

const char* bk_status_name(int status) {
  switch (status) {
    case BK_OK: return "ok";
    case BK_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case BK_ERR_DOMAIN: return "domain";
    case BK_ERR_STRUCTURE: return "structure";
    case BK_ERR_NUMERIC: return "numeric";
    case BK_ERR_PARSE: return "parse";
    case BK_ERR_IO: return "io";
    case BK_ERR_INTERNAL: return "internal";
    default: return "unknown";
  }
}

const char* bk_last_error(void) { return t_last_error.c_str(); }

void bk_string_free(char* text) { delete[] text; }

int bk_model_create(bk_model_t* out, double phi, double theta_u, double theta_v) {
  return wrap([&] {
    require_out(out, "out");
    require_finite(phi, "phi");
    require_finite(theta_u, "theta_u");
    require_finite(theta_v, "theta_v");
    auto handle = std::make_unique<bk_model_struct>();
    handle->model = make_model(phi, theta_u, theta_v);
    handle->behavior = quantum_behavior(handle->model, scenario());
    handle->result = evaluate_inequalities(handle->behavior);
    handle->magic = kModelMagic;
    *out = handle.release();
  });
}

int bk_model_free(bk_model_t model) {
  return wrap([&] {
    if (model == nullptr) return;  // like free(): releasing nothing is fine
    require_handle(model, kModelMagic, "model");
    model->magic = 0;
    delete model;
  });
}

int bk_model_params(bk_model_t model, double* phi, double* theta_u, double* theta_v) {
  return wrap([&] {
    require_handle(model, kModelMagic, "model");
    if (phi) *phi = model->model.phi;
    if (theta_u) *theta_u = model->model.theta_u;
    if (theta_v) *theta_v = model->model.theta_v;
  });
}

int bk_model_alpha_beta(bk_model_t model, double* alpha, double* beta) {
  return wrap([&] {
    require_handle(model, kModelMagic, "model");
    if (alpha) *alpha = model->result.alpha;
    if (beta) *beta = model->result.beta;
  });
}

int bk_model_region(bk_model_t model, const char** region) {
  return wrap([&] {
    require_handle(model, kModelMagic, "model");
    require_out(region, "region");
    *region = region_name(model->result.region);
  });
}

int bk_model_behavior(bk_model_t model, bk_behavior_t* out) {
  return wrap([&] {
    require_handle(model, kModelMagic, "model");
    require_out(out, "out");
    auto handle = std::make_unique<bk_behavior_struct>();
    handle->behavior = model->behavior;
    handle->magic = kBehaviorMagic;
    *out = handle.release();
  });
}

int bk_model_correlators_json(bk_model_t model, char** json) {
  return wrap([&] {
    require_handle(model, kModelMagic, "model");
    require_out(json, "json");
    const MarginalBehavior marginal = marginalize_bob(model->behavior);
    const CorrelatorSet set = correlators_from_behavior(model->behavior, marginal);
    nlohmann::json correlators;
    correlators["A0B0"] = set.ab.at({0, 0});
    correlators["A1B0"] = set.ab.at({1, 0});
    correlators["A0B2B3"] = set.abb.at({0, 2, 3});
    correlators["A1B2B3"] = set.abb.at({1, 2, 3});
    for (const auto& [edge, value] : set.bb) {
      correlators["B" + std::to_string(edge.first) + "B" + std::to_string(edge.second)] = value;
    }
    const nlohmann::json body{{"phi", model->model.phi},
                              {"theta_u", model->model.theta_u},
                              {"theta_v", model->model.theta_v},
                              {"alpha", model->result.alpha},
                              {"beta", model->result.beta},
                              {"region", region_name(model->result.region)},
                              {"correlators", correlators}};
    *json = copy_string(body.dump(2));
  });
}

int bk_model_simulate_json(bk_model_t model, uint64_t counts_per_context, uint64_t seed,
                           int resamples, char** json) {
  return wrap([&] {
    require_handle(model, kModelMagic, "model");
    require_out(json, "json");
    const SimulationResult r =
        simulate_experiment(model->model, counts_per_context, seed, resamples);
    nlohmann::json correlators;
    for (const auto& [label, corr] : r.correlators) correlators[label] = value_sigma_json(corr);
    const nlohmann::json body{{"phi", r.phi},
                              {"theta_u", r.theta_u},
                              {"theta_v", r.theta_v},
                              {"counts_per_context", r.counts_per_context},
                              {"seed", r.seed},
                              {"resamples", r.resamples},
                              {"correlators", correlators},
                              {"alpha", value_sigma_json(r.alpha)},
                              {"beta", value_sigma_json(r.beta)},
                              {"distance", value_sigma_json(r.distance)},
                              {"region", region_name(r.region)}};
    *json = copy_string(body.dump(2));
  });
}

int bk_behavior_from_json(bk_behavior_t* out, const char* json) {
  return wrap([&] {
    require_out(out, "out");
    require_out(json, "json");
    auto handle = std::make_unique<bk_behavior_struct>();
    handle->behavior = behavior_from_json(json);
    handle->magic = kBehaviorMagic;
    *out = handle.release();
  });
}

int bk_behavior_to_json(bk_behavior_t behavior, char** json) {
  return wrap([&] {
    require_handle(behavior, kBehaviorMagic, "behavior");
    require_out(json, "json");
    *json = copy_string(behavior_to_json(behavior->behavior));
  });
}

int bk_behavior_free(bk_behavior_t behavior) {
  return wrap([&] {
    if (behavior == nullptr) return;
    require_handle(behavior, kBehaviorMagic, "behavior");
    behavior->magic = 0;
    delete behavior;
  });
}

int bk_behavior_alpha_beta(bk_behavior_t behavior, double* alpha, double* beta) {
  return wrap([&] {
    require_handle(behavior, kBehaviorMagic, "behavior");
    const InequalityResult r = evaluate_inequalities(behavior->behavior);
    if (alpha) *alpha = r.alpha;
    if (beta) *beta = r.beta;
  });
}

int bk_behavior_check(bk_behavior_t behavior, double tol, int* passed, char** report_json) {
  return wrap([&] {
    require_handle(behavior, kBehaviorMagic, "behavior");
    require_finite(tol, "tol");
    if (tol < 0.0) fail(ErrorKind::invalid_argument, "tol must be non-negative");

    validate_behavior(behavior->behavior);
    const ConsistencyReport signalling = check_no_signalling(behavior->behavior, tol);
    const MarginalBehavior marginal = marginalize_bob(behavior->behavior);
    const ConsistencyReport disturbance = check_no_disturbance(marginal, tol);

    const auto violations_json = [](const ConsistencyReport& report) {
      nlohmann::json list = nlohmann::json::array();
      for (const ConsistencyViolation& v : report.violations) {
        list.push_back({{"condition", v.condition}, {"lhs", v.lhs}, {"rhs", v.rhs}});
      }
      return list;
    };
    const bool ok = signalling.passed() && disturbance.passed();
    if (passed) *passed = ok ? 1 : 0;
    if (report_json) {
      const nlohmann::json body{
          {"passed", ok},
          {"tolerance", tol},
          {"no_signalling",
           {{"max_violation", signalling.max_violation},
            {"violations", violations_json(signalling)}}},
          {"no_disturbance",
           {{"max_violation", disturbance.max_violation},
            {"violations", violations_json(disturbance)}}}};
      *report_json = copy_string(body.dump(2));
    }
  });
}

int bk_behavior_disturbance_distance(bk_behavior_t behavior, double* distance) {
  return wrap([&] {
    require_handle(behavior, kBehaviorMagic, "behavior");
    require_out(distance, "distance");
    *distance = disturbance_distance(marginalize_bob(behavior->behavior));
  });
}

int bk_scan_csv(double phi_min, double phi_max, int steps, double theta_u, double theta_v,
                char** csv) {
  return wrap([&] {
    require_out(csv, "csv");
    require_finite(phi_min, "phi_min");
    require_finite(phi_max, "phi_max");
    require_finite(theta_u, "theta_u");
    require_finite(theta_v, "theta_v");
    *csv = copy_string(scan_to_csv(phi_scan(phi_min, phi_max, steps, theta_u, theta_v)));
  });
}

int bk_violation_window(double theta_u, double theta_v, double resolution, int* empty,
                        double* lo, double* hi) {
  return wrap([&] {
    require_finite(theta_u, "theta_u");
    require_finite(theta_v, "theta_v");
    require_finite(resolution, "resolution");
    require_out(empty, "empty");
    const ViolationWindow w = joint_violation_window(theta_u, theta_v, resolution);
    *empty = w.empty ? 1 : 0;
    if (lo) *lo = w.lo;
    if (hi) *hi = w.hi;
  });
}

int bk_classical_bounds_json(char** json) {
  return wrap([&] {
    require_out(json, "json");
    const auto local = enumerate_local_strategies(scenario());
    const auto noncontextual = enumerate_noncontextual_strategies();
    const auto product = enumerate_product_strategies(scenario());

    const auto alpha_local = max_functional_local(local, Functional::alpha);
    const auto beta_local = max_functional_local(local, Functional::beta);
    const auto joint_local = max_functional_local(local, Functional::alpha_plus_beta);
    const auto beta_nc_max = max_beta_noncontextual(noncontextual);
    const auto beta_nc_min = min_beta_noncontextual(noncontextual);
    const auto alpha_product = max_functional_local(product, Functional::alpha);
    const auto joint_product = max_functional_local(product, Functional::alpha_plus_beta);

    const nlohmann::json body{
        {"local_vertices", local.size()},
        {"noncontextual_vertices", noncontextual.size()},
        {"product_vertices", product.size()},
        {"alpha_local_max", alpha_local.value},
        {"alpha_local_argmax_index", alpha_local.index},
        {"beta_noncontextual_max", beta_nc_max.value},
        {"beta_noncontextual_min", beta_nc_min.value},
        {"beta_local_max", beta_local.value},
        {"alpha_product_max", alpha_product.value},
        {"alpha_plus_beta_product_max", joint_product.value},
        {"alpha_plus_beta_local_max", joint_local.value}};
    *json = copy_string(body.dump(2));
  });
}

int bk_optimize_json(double phi, const char* objective, char** json) {
  return wrap([&] {
    require_out(json, "json");
    require_out(objective, "objective");
    require_finite(phi, "phi");
    const OptimizationResult r = optimize_state_params(phi, objective);
    const nlohmann::json body{{"objective", r.objective},
                              {"phi", phi},
                              {"theta_u", r.theta_u},
                              {"theta_v", r.theta_v},
                              {"objective_value", r.objective_value},
                              {"alpha", r.alpha},
                              {"beta", r.beta},
                              {"feasible", r.feasible},
                              {"iterations", r.iterations}};
    *json = copy_string(body.dump(2));
  });
}

namespace {

void make_dataset_handle(bk_dataset_t* out, Dataset dataset) {
  auto handle = std::make_unique<bk_dataset_struct>();
  handle->dataset = std::move(dataset);
  handle->magic = kDatasetMagic;
  *out = handle.release();
}

}  // namespace

int bk_dataset_bundled(bk_dataset_t* out) {
  return wrap([&] {
    require_out(out, "out");
    make_dataset_handle(out, bundled_dataset());
  });
}

int bk_dataset_load(bk_dataset_t* out, const char* path) {
  return wrap([&] {
    require_out(out, "out");
    require_out(path, "path");
    make_dataset_handle(out, load_dataset(path));
  });
}

int bk_dataset_parse(bk_dataset_t* out, const char* json) {
  return wrap([&] {
    require_out(out, "out");
    require_out(json, "json");
    make_dataset_handle(out, parse_dataset(json));
  });
}

int bk_dataset_free(bk_dataset_t dataset) {
  return wrap([&] {
    if (dataset == nullptr) return;
    require_handle(dataset, kDatasetMagic, "dataset");
    dataset->magic = 0;
    delete dataset;
  });
}

int bk_dataset_size(bk_dataset_t dataset, size_t* count) {
  return wrap([&] {
    require_handle(dataset, kDatasetMagic, "dataset");
    require_out(count, "count");
    *count = dataset->dataset.records.size();
  });
}

int bk_dataset_to_json(bk_dataset_t dataset, char** json) {
  return wrap([&] {
    require_handle(dataset, kDatasetMagic, "dataset");
    require_out(json, "json");
    *json = copy_string(dataset_to_json(dataset->dataset));
  });
}

int bk_dataset_verify_json(bk_dataset_t dataset, double theta_u, double theta_v,
                           int* all_passed, char** report_json) {
  return wrap([&] {
    require_handle(dataset, kDatasetMagic, "dataset");
    require_finite(theta_u, "theta_u");
    require_finite(theta_v, "theta_v");
    const VerificationReport report = verify_paper(dataset->dataset, theta_u, theta_v);
    if (all_passed) *all_passed = report.all_passed ? 1 : 0;
    if (report_json) *report_json = copy_string(verification_to_json(report));
  });
}

int bk_dataset_emit_figures(bk_dataset_t dataset, double theta_u, double theta_v,
                            int curve_steps, const char* output_dir, char** paths_json) {
  return wrap([&] {
    require_handle(dataset, kDatasetMagic, "dataset");
    require_out(output_dir, "output_dir");
    require_finite(theta_u, "theta_u");
    require_finite(theta_v, "theta_v");
    const auto paths =
        emit_figure_data(dataset->dataset, theta_u, theta_v, curve_steps, output_dir);
    if (paths_json) {
      *paths_json = copy_string(nlohmann::json(paths).dump(2));
    }
  });
}

}  // extern "C"
