#include <doctest.h>

#include "error.hpp"
#include "search.hpp"

#include <cmath>
#include <sstream>

using namespace bellkcbs;

TEST_CASE("search: single-point pipeline matches the recorded predictions") {
    const InequalityResult r = evaluate_point(0.351, 2.868, 1.449);
    CHECK(std::abs(r.alpha - 2.1622) < 1e-3);
    CHECK(std::abs(r.beta - 3.5405) < 1e-3);
    CHECK(r.region == Region::both);
}

TEST_CASE("search: scan grid placement and argument validation") {
    const auto scan = phi_scan(0.0, M_PI / 2.0, 5, 2.868, 1.449);
    REQUIRE(scan.size() == 5);
    CHECK(scan.front().phi == doctest::Approx(0.0));
    CHECK(scan.back().phi == doctest::Approx(M_PI / 2.0));
    CHECK(scan[2].phi == doctest::Approx(M_PI / 4.0));

    const auto single = phi_scan(0.3, 0.3, 1, 2.868, 1.449);
    REQUIRE(single.size() == 1);
    CHECK(single[0].phi == doctest::Approx(0.3));

    CHECK_THROWS_AS(phi_scan(0.0, 1.0, 1, 2.868, 1.449), Error);
    CHECK_THROWS_AS(phi_scan(0.0, 1.0, 0, 2.868, 1.449), Error);
    CHECK_THROWS_AS(phi_scan(1.0, 0.0, 10, 2.868, 1.449), Error);
}

TEST_CASE("search: witnesses are monotone while trading beta for alpha") {
    // Mixing trades contextuality for nonlocality: beta falls strictly across
    // the whole first quarter turn, and alpha rises strictly until its peak
    // near phi = 0.772 (so the check stops at 0.75).  Report the first grid
    // point that breaks either.
    const auto scan = phi_scan(0.0, M_PI / 4.0, 1000, 2.868, 1.449);
    for (std::size_t i = 1; i < scan.size(); ++i) {
        INFO("first counterexample at phi = ", scan[i].phi);
        if (scan[i].phi <= 0.75) REQUIRE(scan[i].alpha > scan[i - 1].alpha);
        REQUIRE(scan[i].beta < scan[i - 1].beta);
    }
}

TEST_CASE("search: scan serializes to parseable CSV") {
    const auto scan = phi_scan(0.2, 0.4, 3, 2.868, 1.449);
    const std::string csv = scan_to_csv(scan);
    std::istringstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "phi,alpha,beta,region");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        std::istringstream cells(line);
        std::string phi_s, alpha_s, beta_s, region_s;
        REQUIRE(std::getline(cells, phi_s, ','));
        REQUIRE(std::getline(cells, alpha_s, ','));
        REQUIRE(std::getline(cells, beta_s, ','));
        REQUIRE(std::getline(cells, region_s, ','));
        CHECK(std::stod(alpha_s) > 0.0);
    }
    CHECK(rows == 3);
}

TEST_CASE("search: joint violation window brackets the simultaneous region") {
    const double res = 1e-4;
    const ViolationWindow w = joint_violation_window(2.868, 1.449, res);
    REQUIRE(!w.empty);
    CHECK(w.lo > 0.27);
    CHECK(w.lo < 0.30);
    CHECK(w.hi > 0.54);
    CHECK(w.hi < 0.57);

    const auto violates = [](double phi) {
        const InequalityResult r = evaluate_point(phi, 2.868, 1.449);
        return r.region == Region::both;
    };
    CHECK(violates(w.lo));
    CHECK(violates(w.hi));
    CHECK(!violates(w.lo - 2 * res));
    CHECK(!violates(w.hi + 2 * res));
}

TEST_CASE("search: degenerate angles yield an empty window") {
    const ViolationWindow w = joint_violation_window(0.0, 0.0, 1e-3);
    CHECK(w.empty);
}

TEST_CASE("search: optimizer honors the witness floor and is deterministic") {
    for (const char* objective : {"max_min_margin", "weighted_sum(0.5)",
                                  "max_beta_given_alpha_above(0.05)"}) {
        const OptimizationResult r1 = optimize_state_params(0.421, objective);
        const OptimizationResult r2 = optimize_state_params(0.421, objective);
        CHECK(r1.theta_u == r2.theta_u);
        CHECK(r1.theta_v == r2.theta_v);
        CHECK(r1.objective_value == r2.objective_value);
        CHECK(r1.feasible);
        CHECK(r1.theta_u >= 0.0);
        CHECK(r1.theta_u <= M_PI);
        CHECK(r1.theta_v >= 0.0);
        CHECK(r1.theta_v <= M_PI);
        // The reported witness pair must replay at the reported angles.
        const InequalityResult replay = evaluate_point(0.421, r1.theta_u, r1.theta_v);
        CHECK(replay.alpha == doctest::Approx(r1.alpha).epsilon(1e-9));
        CHECK(replay.beta == doctest::Approx(r1.beta).epsilon(1e-9));
    }
}

TEST_CASE("search: optimized margins beat fixed angles where both violations hold") {
    const OptimizationResult r = optimize_state_params(0.421, "max_min_margin");
    const InequalityResult fixed = evaluate_point(0.421, 2.868, 1.449);
    const double fixed_margin = std::min(fixed.alpha - 2.0, fixed.beta - 3.0);
    CHECK(r.objective_value >= fixed_margin - 1e-12);
    CHECK(r.objective_value >= 0.32);
    CHECK(r.alpha > 2.0);
    CHECK(r.beta > 3.0);
}

TEST_CASE("search: pure contextuality objective reaches the pentagon maximum") {
    const OptimizationResult r = optimize_state_params(0.0, "weighted_sum(0)");
    const double exact_max = 4.0 * std::sqrt(5.0) - 5.0;
    CHECK(r.objective_value <= exact_max + 1e-9);
    CHECK(r.objective_value >= exact_max - 1e-4);
    CHECK(r.objective == "weighted_sum(0)");
}

TEST_CASE("search: infeasible constraint is reported, not thrown") {
    const OptimizationResult r = optimize_state_params(0.351, "max_beta_given_alpha_above(10)");
    CHECK(!r.feasible);
    CHECK(r.objective_value < -1e5);
}

TEST_CASE("search: malformed objectives are rejected") {
    CHECK_THROWS_AS(optimize_state_params(0.3, "maximize_everything"), Error);
    CHECK_THROWS_AS(optimize_state_params(0.3, "weighted_sum(1.5)"), Error);
    CHECK_THROWS_AS(optimize_state_params(0.3, "weighted_sum(-0.1)"), Error);
    CHECK_THROWS_AS(optimize_state_params(0.3, "weighted_sum(oops)"), Error);
    CHECK_THROWS_AS(optimize_state_params(0.3, "max_beta_given_alpha_above()"), Error);
    CHECK_THROWS_AS(optimize_state_params(-0.1, "max_min_margin"), Error);
}
