// Command-line front end over the public C API.
//
// Exit codes: 0 success (all requested checks passed), 1 a verification or
// consistency check failed, 2 usage errors (bad flags, malformed identifiers,
// unreadable or invalid input files).

#include <bellkcbs.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

using OwnedString = std::unique_ptr<char, decltype(&bk_string_free)>;

OwnedString own(char* text) { return OwnedString(text, &bk_string_free); }

// Any C-API failure driven from the command line traces back to the given
// arguments or input files, so it maps to the usage exit code.
struct UsageFailure {
    std::string message;
};

void check_status(int status) {
    if (status != BK_OK) {
        std::ostringstream os;
        os << bk_status_name(status) << ": " << bk_last_error();
        throw UsageFailure{os.str()};
    }
}

struct ModelHandle {
    bk_model_t handle = nullptr;
    ~ModelHandle() { bk_model_free(handle); }
};

struct DatasetHandle {
    bk_dataset_t handle = nullptr;
    ~DatasetHandle() { bk_dataset_free(handle); }
};

struct BehaviorHandle {
    bk_behavior_t handle = nullptr;
    ~BehaviorHandle() { bk_behavior_free(handle); }
};

void open_dataset(DatasetHandle& dataset, const std::string& path) {
    if (path.empty()) {
        check_status(bk_dataset_bundled(&dataset.handle));
    } else {
        check_status(bk_dataset_load(&dataset.handle, path.c_str()));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pentagon Bell-scenario simulator and verification toolkit"};
    app.require_subcommand(1);

    double theta_u = 2.868;
    double theta_v = 1.449;
    double tol = 1e-10;
    std::uint64_t seed = 12345;
    std::string output_dir = ".";
    app.add_option("--theta-u", theta_u, "State angle theta_u (default 2.868)");
    app.add_option("--theta-v", theta_v, "State angle theta_v (default 1.449)");
    app.add_option("--tol", tol, "Tolerance for consistency checks (default 1e-10)");
    app.add_option("--seed", seed, "Random seed for simulations (default 12345)");
    app.add_option("--output-dir", output_dir, "Directory for generated files (default .)");

    auto* scan = app.add_subcommand("scan", "Sweep phi and print alpha/beta as CSV");
    double phi_min = 0.0;
    double phi_max = std::acos(-1.0) / 2.0;
    int steps = 101;
    scan->add_option("--phi-min", phi_min, "Start of the sweep (default 0)");
    scan->add_option("--phi-max", phi_max, "End of the sweep (default pi/2)");
    scan->add_option("--steps", steps, "Number of grid points (default 101)");

    auto* evaluate = app.add_subcommand("evaluate", "Evaluate both witnesses at one phi");
    double eval_phi = 0.0;
    bool eval_json = false;
    evaluate->add_option("--phi", eval_phi, "Mixing angle phi")->required();
    evaluate->add_flag("--json", eval_json, "Print the full correlator JSON");

    auto* bounds =
        app.add_subcommand("bounds", "Enumerate deterministic strategies and print exact bounds");

    auto* optimize = app.add_subcommand("optimize", "Tune (theta_u, theta_v) at fixed phi");
    double opt_phi = 0.0;
    std::string objective = "max_min_margin";
    optimize->add_option("--phi", opt_phi, "Mixing angle phi")->required();
    optimize->add_option("--objective", objective,
                         "max_min_margin | weighted_sum(w) | max_beta_given_alpha_above(d)");

    auto* simulate =
        app.add_subcommand("simulate", "Sample finite counts and print noisy estimates");
    double sim_phi = 0.0;
    std::uint64_t counts = 5500;
    int resamples = 1000;
    simulate->add_option("--phi", sim_phi, "Mixing angle phi")->required();
    simulate->add_option("--counts", counts, "Counts per measured context (default 5500)");
    simulate->add_option("--resamples", resamples, "Bootstrap resamples (default 1000)");

    auto* ingest =
        app.add_subcommand("ingest", "Check a behavior JSON file for consistency");
    std::string ingest_path;
    ingest->add_option("--input", ingest_path, "Behavior JSON file")->required();

    auto* verify = app.add_subcommand(
        "verify-paper", "Recompute every derivable number of a recorded dataset");
    std::string verify_path;
    bool verify_json = false;
    verify->add_option("--dataset", verify_path, "Dataset JSON file (default: bundled)");
    verify->add_flag("--json", verify_json, "Print the full check report as JSON");

    auto* figure = app.add_subcommand(
        "emit-figure", "Write curve/points/bounds CSV data for the witness-plane figure");
    std::string figure_path;
    int curve_steps = 201;
    figure->add_option("--dataset", figure_path, "Dataset JSON file (default: bundled)");
    figure->add_option("--curve-steps", curve_steps, "Model curve resolution (default 201)");

    // Global options (--theta-u, --seed, --output-dir, ...) are accepted after
    // the subcommand name as well.
    for (CLI::App* sub : {scan, evaluate, bounds, optimize, simulate, ingest, verify, figure}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (scan->parsed()) {
            char* csv = nullptr;
            check_status(bk_scan_csv(phi_min, phi_max, steps, theta_u, theta_v, &csv));
            std::cout << own(csv).get();
            return kExitOk;
        }

        if (evaluate->parsed()) {
            ModelHandle model;
            check_status(bk_model_create(&model.handle, eval_phi, theta_u, theta_v));
            if (eval_json) {
                char* json = nullptr;
                check_status(bk_model_correlators_json(model.handle, &json));
                std::cout << own(json).get() << "\n";
            } else {
                double alpha = 0.0, beta = 0.0;
                const char* region = nullptr;
                check_status(bk_model_alpha_beta(model.handle, &alpha, &beta));
                check_status(bk_model_region(model.handle, &region));
                std::cout << "phi      = " << eval_phi << "\n"
                          << "theta_u  = " << theta_u << "\n"
                          << "theta_v  = " << theta_v << "\n"
                          << "alpha    = " << alpha << "  (local bound 2)\n"
                          << "beta     = " << beta << "  (noncontextual bound 3)\n"
                          << "region   = " << region << "\n";
            }
            return kExitOk;
        }

        if (bounds->parsed()) {
            char* json = nullptr;
            check_status(bk_classical_bounds_json(&json));
            std::cout << own(json).get() << "\n";
            return kExitOk;
        }

        if (optimize->parsed()) {
            char* json = nullptr;
            check_status(bk_optimize_json(opt_phi, objective.c_str(), &json));
            std::cout << own(json).get() << "\n";
            return kExitOk;
        }

        if (simulate->parsed()) {
            ModelHandle model;
            check_status(bk_model_create(&model.handle, sim_phi, theta_u, theta_v));
            char* json = nullptr;
            check_status(
                bk_model_simulate_json(model.handle, counts, seed, resamples, &json));
            std::cout << own(json).get() << "\n";
            return kExitOk;
        }

        if (ingest->parsed()) {
            std::ifstream in(ingest_path, std::ios::binary);
            if (!in) throw UsageFailure{"cannot open behavior file '" + ingest_path + "'"};
            std::ostringstream buffer;
            buffer << in.rdbuf();

            BehaviorHandle behavior;
            check_status(bk_behavior_from_json(&behavior.handle, buffer.str().c_str()));
            int passed = 0;
            char* report = nullptr;
            check_status(bk_behavior_check(behavior.handle, tol, &passed, &report));
            std::cout << own(report).get() << "\n";
            if (passed) {
                double alpha = 0.0, beta = 0.0;
                check_status(bk_behavior_alpha_beta(behavior.handle, &alpha, &beta));
                std::cout << "alpha = " << alpha << ", beta = " << beta << "\n";
            }
            return passed ? kExitOk : kExitCheckFailed;
        }

        if (verify->parsed()) {
            DatasetHandle dataset;
            open_dataset(dataset, verify_path);
            int all_passed = 0;
            char* report_text = nullptr;
            check_status(bk_dataset_verify_json(dataset.handle, theta_u, theta_v,
                                                &all_passed, &report_text));
            const OwnedString report = own(report_text);
            if (verify_json) {
                std::cout << report.get() << "\n";
            } else {
                const auto body = nlohmann::json::parse(report.get());
                int documented = 0, unexpected = 0, stale = 0;
                for (const auto& check : body.at("checks")) {
                    const bool passed = check.at("passed").get<bool>();
                    const bool flagged = check.at("flagged").get<bool>();
                    if (!passed && flagged) ++documented;
                    if (!passed && !flagged) ++unexpected;
                    if (passed && flagged) ++stale;
                    if (passed == flagged) {
                        std::cout << (passed ? "STALE FLAG " : "FAIL ") << check.at("state")
                                  << " " << check.at("check").get<std::string>()
                                  << ": expected " << check.at("expected")
                                  << ", recomputed " << check.at("actual") << "\n";
                    }
                }
                std::cout << "checks: " << body.at("checks").size()
                          << ", documented discrepancies: " << documented
                          << ", unexpected failures: " << unexpected
                          << ", stale flags: " << stale << "\n"
                          << "max |recorded - recomputed| theory gap: "
                          << body.at("max_theory_delta").get<double>() << "\n"
                          << (all_passed ? "verification PASSED" : "verification FAILED")
                          << "\n";
            }
            return all_passed ? kExitOk : kExitCheckFailed;
        }

        if (figure->parsed()) {
            DatasetHandle dataset;
            open_dataset(dataset, figure_path);
            char* paths_text = nullptr;
            check_status(bk_dataset_emit_figures(dataset.handle, theta_u, theta_v,
                                                 curve_steps, output_dir.c_str(),
                                                 &paths_text));
            const OwnedString paths = own(paths_text);
            for (const auto& path : nlohmann::json::parse(paths.get())) {
                std::cout << path.get<std::string>() << "\n";
            }
            return kExitOk;
        }
    } catch (const UsageFailure& failure) {
        std::cerr << "error: " << failure.message << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::cerr << "error: no subcommand handled\n";
    return kExitUsage;
}
