#include <doctest.h>

#include <bellkcbs.h>

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string take(char* text) {
    REQUIRE(text != nullptr);
    std::string out(text);
    bk_string_free(text);
    return out;
}

}  // namespace

TEST_CASE("capi: library identity and status names") {
    CHECK(std::strcmp(bk_version(), "1.0.0") == 0);
    CHECK(std::strcmp(bk_status_name(BK_OK), "ok") == 0);
    CHECK(std::strcmp(bk_status_name(BK_ERR_PARSE), "parse") == 0);
    CHECK(std::strcmp(bk_status_name(9999), "unknown") == 0);
    bk_string_free(nullptr);  // must be a safe no-op
}

TEST_CASE("capi: model lifecycle, witnesses and region") {
    bk_model_t model = nullptr;
    REQUIRE(bk_model_create(&model, 0.351, 2.868, 1.449) == BK_OK);

    double phi = 0.0, tu = 0.0, tv = 0.0;
    CHECK(bk_model_params(model, &phi, &tu, &tv) == BK_OK);
    CHECK(phi == doctest::Approx(0.351));
    CHECK(tu == doctest::Approx(2.868));
    CHECK(tv == doctest::Approx(1.449));

    double alpha = 0.0, beta = 0.0;
    CHECK(bk_model_alpha_beta(model, &alpha, &beta) == BK_OK);
    CHECK(std::abs(alpha - 2.1622) < 1e-3);
    CHECK(std::abs(beta - 3.5405) < 1e-3);

    const char* region = nullptr;
    CHECK(bk_model_region(model, &region) == BK_OK);
    CHECK(std::string(region) == "both");

    char* json = nullptr;
    REQUIRE(bk_model_correlators_json(model, &json) == BK_OK);
    const auto body = nlohmann::json::parse(take(json));
    CHECK(body.at("region") == "both");
    CHECK(body.at("correlators").size() == 9);
    CHECK(body.at("alpha").get<double>() == doctest::Approx(alpha));

    CHECK(bk_model_free(model) == BK_OK);
    CHECK(bk_model_free(nullptr) == BK_OK);
}

TEST_CASE("capi: argument validation populates bk_last_error") {
    CHECK(bk_model_create(nullptr, 0.3, 2.868, 1.449) == BK_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(bk_last_error()) > 0);

    bk_model_t model = nullptr;
    CHECK(bk_model_create(&model, std::nan(""), 2.868, 1.449) == BK_ERR_INVALID_ARGUMENT);
    CHECK(model == nullptr);

    CHECK(bk_model_alpha_beta(nullptr, nullptr, nullptr) == BK_ERR_INVALID_ARGUMENT);

    char* csv = nullptr;
    CHECK(bk_scan_csv(1.0, 0.0, 10, 2.868, 1.449, &csv) == BK_ERR_INVALID_ARGUMENT);
    CHECK(csv == nullptr);
}

TEST_CASE("capi: behavior round trip, checks and distance") {
    bk_model_t model = nullptr;
    REQUIRE(bk_model_create(&model, 0.421, 2.868, 1.449) == BK_OK);
    bk_behavior_t behavior = nullptr;
    REQUIRE(bk_model_behavior(model, &behavior) == BK_OK);
    CHECK(bk_model_free(model) == BK_OK);

    char* json = nullptr;
    REQUIRE(bk_behavior_to_json(behavior, &json) == BK_OK);
    const std::string text = take(json);
    CHECK(text.find("\"x0_ctx2_3\"") != std::string::npos);

    bk_behavior_t reparsed = nullptr;
    REQUIRE(bk_behavior_from_json(&reparsed, text.c_str()) == BK_OK);

    double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;
    CHECK(bk_behavior_alpha_beta(behavior, &a1, &b1) == BK_OK);
    CHECK(bk_behavior_alpha_beta(reparsed, &a2, &b2) == BK_OK);
    CHECK(a1 == doctest::Approx(a2).epsilon(1e-12));
    CHECK(b1 == doctest::Approx(b2).epsilon(1e-12));

    int passed = 0;
    char* report = nullptr;
    REQUIRE(bk_behavior_check(behavior, 1e-10, &passed, &report) == BK_OK);
    CHECK(passed == 1);
    const auto report_body = nlohmann::json::parse(take(report));
    CHECK(report_body.at("passed").get<bool>());
    CHECK(report_body.at("no_signalling").at("violations").empty());

    double distance = -1.0;
    CHECK(bk_behavior_disturbance_distance(behavior, &distance) == BK_OK);
    CHECK(distance >= 0.0);
    CHECK(distance < 1e-20);

    CHECK(bk_behavior_free(behavior) == BK_OK);
    CHECK(bk_behavior_free(reparsed) == BK_OK);

    bk_behavior_t bad = nullptr;
    CHECK(bk_behavior_from_json(&bad, "{ not json") == BK_ERR_PARSE);
    CHECK(bad == nullptr);
    CHECK(bk_behavior_from_json(&bad, "{\"x0_ctx0\": [0.7, 0.1, 0.1, 0.2]}") ==
          BK_ERR_STRUCTURE);
}

TEST_CASE("capi: scan, window, bounds and optimizer surface") {
    char* csv = nullptr;
    REQUIRE(bk_scan_csv(0.0, 1.0, 11, 2.868, 1.449, &csv) == BK_OK);
    const std::string text = take(csv);
    CHECK(text.rfind("phi,alpha,beta,region", 0) == 0);

    int empty = -1;
    double lo = 0.0, hi = 0.0;
    REQUIRE(bk_violation_window(2.868, 1.449, 1e-4, &empty, &lo, &hi) == BK_OK);
    CHECK(empty == 0);
    CHECK(lo > 0.27);
    CHECK(hi < 0.57);
    CHECK(lo < hi);

    char* bounds = nullptr;
    REQUIRE(bk_classical_bounds_json(&bounds) == BK_OK);
    const auto bounds_body = nlohmann::json::parse(take(bounds));
    CHECK(bounds_body.at("alpha_local_max").get<double>() == 2.0);
    CHECK(bounds_body.at("beta_noncontextual_max").get<double>() == 3.0);
    CHECK(bounds_body.at("beta_local_max").get<double>() == 5.0);
    CHECK(bounds_body.at("local_vertices").get<int>() == 8192);

    char* opt = nullptr;
    REQUIRE(bk_optimize_json(0.421, "max_min_margin", &opt) == BK_OK);
    const auto opt_body = nlohmann::json::parse(take(opt));
    CHECK(opt_body.at("feasible").get<bool>());
    CHECK(opt_body.at("objective_value").get<double>() >= 0.32);

    CHECK(bk_optimize_json(0.421, "bogus", &opt) == BK_ERR_INVALID_ARGUMENT);
}

TEST_CASE("capi: simulation JSON carries the full uncertainty bookkeeping") {
    bk_model_t model = nullptr;
    REQUIRE(bk_model_create(&model, 0.351, 2.868, 1.449) == BK_OK);
    char* json = nullptr;
    REQUIRE(bk_model_simulate_json(model, 5500, 7, 500, &json) == BK_OK);
    const auto body = nlohmann::json::parse(take(json));
    CHECK(body.at("counts_per_context").get<std::uint64_t>() == 5500);
    CHECK(body.at("seed").get<std::uint64_t>() == 7);
    CHECK(body.at("correlators").size() == 9);
    CHECK(body.at("alpha").at("sigma").get<double>() > 0.02);
    CHECK(body.at("distance").at("value").get<double>() >= 0.0);
    CHECK(bk_model_simulate_json(model, 5500, 7, 1, &json) == BK_ERR_INVALID_ARGUMENT);
    CHECK(bk_model_free(model) == BK_OK);
}

TEST_CASE("capi: dataset handles, verification and figure emission") {
    bk_dataset_t dataset = nullptr;
    REQUIRE(bk_dataset_bundled(&dataset) == BK_OK);
    size_t count = 0;
    CHECK(bk_dataset_size(dataset, &count) == BK_OK);
    CHECK(count == 11);

    int all_passed = 0;
    char* report = nullptr;
    REQUIRE(bk_dataset_verify_json(dataset, 2.868, 1.449, &all_passed, &report) == BK_OK);
    CHECK(all_passed == 1);
    const auto report_body = nlohmann::json::parse(take(report));
    CHECK(report_body.at("all_passed").get<bool>());

    char* json = nullptr;
    REQUIRE(bk_dataset_to_json(dataset, &json) == BK_OK);
    const std::string text = take(json);
    bk_dataset_t reparsed = nullptr;
    REQUIRE(bk_dataset_parse(&reparsed, text.c_str()) == BK_OK);

    const fs::path dir = fs::temp_directory_path() / "bellkcbs_capi_figures";
    fs::remove_all(dir);
    char* paths = nullptr;
    REQUIRE(bk_dataset_emit_figures(reparsed, 2.868, 1.449, 33, dir.string().c_str(),
                                    &paths) == BK_OK);
    const auto path_list = nlohmann::json::parse(take(paths));
    REQUIRE(path_list.size() == 3);
    for (const auto& p : path_list) CHECK(fs::exists(p.get<std::string>()));

    CHECK(bk_dataset_free(dataset) == BK_OK);
    CHECK(bk_dataset_free(reparsed) == BK_OK);

    bk_dataset_t missing = nullptr;
    CHECK(bk_dataset_load(&missing, (dir / "absent.json").string().c_str()) == BK_ERR_IO);
    CHECK(missing == nullptr);
    CHECK(bk_dataset_parse(&missing, "{\"states\": []}") == BK_ERR_STRUCTURE);
}

TEST_CASE("capi: tampered dataset fails verification through the C surface") {
    bk_dataset_t dataset = nullptr;
    REQUIRE(bk_dataset_bundled(&dataset) == BK_OK);
    char* json = nullptr;
    REQUIRE(bk_dataset_to_json(dataset, &json) == BK_OK);
    std::string text = take(json);
    CHECK(bk_dataset_free(dataset) == BK_OK);

    const std::string needle = "2.1382";  // recorded alpha total of the center state
    const auto pos = text.find(needle);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, needle.size(), "2.2382");

    bk_dataset_t tampered = nullptr;
    REQUIRE(bk_dataset_parse(&tampered, text.c_str()) == BK_OK);
    int all_passed = 1;
    REQUIRE(bk_dataset_verify_json(tampered, 2.868, 1.449, &all_passed, nullptr) == BK_OK);
    CHECK(all_passed == 0);
    CHECK(bk_dataset_free(tampered) == BK_OK);
}
