#include <doctest.h>

#include "error.hpp"
#include "scenario.hpp"

#include <cmath>

using namespace bellkcbs;

namespace {

Behavior uniform_behavior(const Scenario& s) {
    Behavior b;
    for (const auto& jc : s.joint_contexts) {
        b.tables[jc] =
            std::vector<double>(table_size(jc.second), 1.0 / static_cast<double>(table_size(jc.second)));
    }
    return b;
}

}  // namespace

TEST_CASE("scenario: pentagon layout and validation") {
    const Scenario s = Scenario::pentagon();
    CHECK(s.alice_settings.size() == 2);
    CHECK(s.bob_settings.size() == 5);
    REQUIRE(s.bob_contexts.size() == 6);
    CHECK(s.bob_contexts[0] == Context{0, 1});
    CHECK(s.bob_contexts[1] == Context{1, 2});
    CHECK(s.bob_contexts[2] == Context{2, 3});
    CHECK(s.bob_contexts[3] == Context{3, 4});
    CHECK(s.bob_contexts[4] == Context{4, 0});
    CHECK(s.bob_contexts[5] == Context{0});
    REQUIRE(s.joint_contexts.size() == 12);
    // Alice-major ordering: all x=0 joint contexts precede all x=1 ones.
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(s.joint_contexts[i].first == 0);
        CHECK(s.joint_contexts[i + 6].first == 1);
        CHECK(s.joint_contexts[i].second == s.bob_contexts[i]);
    }
    CHECK(s.edge_contexts().size() == 5);
    CHECK_NOTHROW(s.validate());

    Scenario bad = Scenario::pentagon();
    bad.bob_contexts.push_back(Context{0, 9});
    CHECK_THROWS_AS(bad.validate(), Error);

    Scenario repeated = Scenario::pentagon();
    repeated.bob_contexts.push_back(Context{2, 2});
    CHECK_THROWS_AS(repeated.validate(), Error);
}

TEST_CASE("scenario: outcome indexing is lexicographic with Alice most significant") {
    CHECK(table_size(Context{2, 3}) == 8);
    CHECK(table_size(Context{0}) == 4);

    CHECK(outcome_index(-1, {-1, -1}) == 0);
    CHECK(outcome_index(-1, {-1, +1}) == 1);
    CHECK(outcome_index(-1, {+1, -1}) == 2);
    CHECK(outcome_index(-1, {+1, +1}) == 3);
    CHECK(outcome_index(+1, {-1, -1}) == 4);
    CHECK(outcome_index(+1, {+1, +1}) == 7);

    CHECK(outcome_index(-1, {-1}) == 0);
    CHECK(outcome_index(+1, {-1}) == 2);
}

TEST_CASE("scenario: joint context keys format and parse") {
    const Scenario s = Scenario::pentagon();
    CHECK(joint_context_key({0, Context{0, 1}}) == "x0_ctx0_1");
    CHECK(joint_context_key({1, Context{0}}) == "x1_ctx0");
    CHECK(joint_context_key({1, Context{4, 0}}) == "x1_ctx4_0");
    for (const auto& jc : s.joint_contexts) {
        const JointContext parsed = parse_joint_context_key(joint_context_key(jc));
        CHECK(parsed.first == jc.first);
        CHECK(parsed.second == jc.second);
    }
    CHECK_THROWS_AS(parse_joint_context_key("y0_ctx1"), Error);
    CHECK_THROWS_AS(parse_joint_context_key("x0_ctx"), Error);
    CHECK_THROWS_AS(parse_joint_context_key("x0_ctx1_"), Error);
    CHECK_THROWS_AS(parse_joint_context_key("x0ctx1"), Error);
    CHECK_THROWS_AS(parse_joint_context_key(""), Error);
}

TEST_CASE("scenario: behavior validation catches malformed tables") {
    const Scenario s = Scenario::pentagon();
    Behavior b = uniform_behavior(s);
    CHECK_NOTHROW(validate_behavior(b));

    SUBCASE("wrong table length") {
        b.tables[{0, Context{0}}] = {0.5, 0.5};
        CHECK_THROWS_AS(validate_behavior(b), Error);
    }
    SUBCASE("negative entry") {
        b.tables[{0, Context{0}}] = {-0.001, 0.501, 0.25, 0.25};
        CHECK_THROWS_AS(validate_behavior(b), Error);
    }
    SUBCASE("not normalized") {
        b.tables[{0, Context{0}}] = {0.3, 0.3, 0.3, 0.3};
        CHECK_THROWS_AS(validate_behavior(b), Error);
    }
    SUBCASE("no tables at all") {
        CHECK_THROWS_AS(validate_behavior(Behavior{}), Error);
    }
}

TEST_CASE("scenario: uniform behavior is signalling-free and undisturbed") {
    const Scenario s = Scenario::pentagon();
    const Behavior b = uniform_behavior(s);

    const ConsistencyReport ns = check_no_signalling(b, 1e-15);
    CHECK(ns.passed());
    CHECK(ns.max_violation <= 1e-15);

    const MarginalBehavior m = marginalize_bob(b);
    for (const auto& [ctx, spread] : m.cross_setting_spread) CHECK(spread <= 1e-15);
    for (const auto& ctx : s.bob_contexts) {
        const auto& table = m.tables.at(ctx);
        for (double p : table) CHECK(p == doctest::Approx(1.0 / table.size()).epsilon(1e-12));
    }

    const ConsistencyReport nd = check_no_disturbance(m, 1e-15);
    CHECK(nd.passed());
    CHECK(disturbance_distance(m) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("scenario: setting-dependent marginals are detected on both sides") {
    const Scenario s = Scenario::pentagon();
    Behavior b = uniform_behavior(s);

    SUBCASE("Bob marginal depends on Alice setting") {
        // In context {0}, Bob's -1 outcome is more likely when x=0 than when x=1.
        b.tables[{0, Context{0}}] = {0.35, 0.15, 0.35, 0.15};
        const ConsistencyReport r = check_no_signalling(b, 1e-9);
        REQUIRE(!r.violations.empty());
        CHECK(r.max_violation == doctest::Approx(0.2).epsilon(1e-9));
        bool mentions_bob = false;
        for (const auto& v : r.violations) {
            if (v.condition.find("independent of x") != std::string::npos) mentions_bob = true;
        }
        CHECK(mentions_bob);
    }
    SUBCASE("Alice marginal depends on Bob context") {
        // For x=0, Alice's +1 outcome probability differs between contexts.
        b.tables[{0, Context{0}}] = {0.2, 0.2, 0.3, 0.3};
        const ConsistencyReport r = check_no_signalling(b, 1e-9);
        REQUIRE(!r.violations.empty());
        CHECK(r.max_violation == doctest::Approx(0.1).epsilon(1e-9));
        bool mentions_alice = false;
        for (const auto& v : r.violations) {
            if (v.condition.find("independent of Bob context") != std::string::npos) {
                mentions_alice = true;
            }
        }
        CHECK(mentions_alice);
    }
}

TEST_CASE("scenario: context-dependent marginal is flagged as disturbance") {
    const Scenario s = Scenario::pentagon();
    Behavior b = uniform_behavior(s);
    // Shift measurement 1 inside context {1,2} so p(b1=+1) is 0.6 there but 0.5 in {0,1}.
    b.tables[{0, Context{1, 2}}] = {0.1, 0.1, 0.15, 0.15, 0.1, 0.1, 0.15, 0.15};
    b.tables[{1, Context{1, 2}}] = b.tables[{0, Context{1, 2}}];

    const MarginalBehavior m = marginalize_bob(b);
    const ConsistencyReport nd = check_no_disturbance(m, 1e-9);
    REQUIRE(!nd.violations.empty());
    CHECK(nd.max_violation == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(disturbance_distance(m) == doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("scenario: behavior JSON serialization round trips") {
    const Scenario s = Scenario::pentagon();
    Behavior b = uniform_behavior(s);
    b.tables[{0, Context{0}}] = {0.125, 0.375, 0.4375, 0.0625};

    const std::string text = behavior_to_json(b);
    CHECK(text.find("\"x0_ctx0\"") != std::string::npos);
    CHECK(text.find("\"x1_ctx4_0\"") != std::string::npos);

    const Behavior parsed = behavior_from_json(text);
    REQUIRE(parsed.tables.size() == b.tables.size());
    for (const auto& [jc, table] : b.tables) {
        const auto& other = parsed.tables.at(jc);
        REQUIRE(other.size() == table.size());
        for (std::size_t i = 0; i < table.size(); ++i) CHECK(other[i] == table[i]);
    }

    CHECK_THROWS_AS(behavior_from_json("not json"), Error);
    CHECK_THROWS_AS(behavior_from_json("[1,2,3]"), Error);
    CHECK_THROWS_AS(behavior_from_json("{\"x0_ctx0\": [0.5, 0.5]}"), Error);
    CHECK_THROWS_AS(behavior_from_json("{\"x0_ctx0\": [0.25, 0.25, 0.25, \"x\"]}"), Error);
}

TEST_CASE("scenario: disturbance distance requires the full two-measurement cycle") {
    const Scenario s = Scenario::pentagon();
    MarginalBehavior m = marginalize_bob(uniform_behavior(s));
    m.tables.erase(Context{2, 3});
    CHECK_THROWS_AS(disturbance_distance(m), Error);

    MarginalBehavior singletons_only;
    singletons_only.tables[Context{0}] = {0.5, 0.5};
    CHECK_THROWS_AS(disturbance_distance(singletons_only), Error);
}
