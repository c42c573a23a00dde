#include <doctest.h>

#include <fstream>
#include <sstream>

#include "test_helpers.hpp"
#include "xsurv/model.hpp"
#include "xsurv/paths.hpp"

using namespace xsurv;

TEST_SUITE_BEGIN("model");

TEST_CASE("parse fig1 bundled file") {
    auto parsed = load_instance(std::string(XSURV_DATA_DIR) + "/fig1.xln");
    const auto& inst = parsed.instance;
    CHECK(inst.name == "fig1");
    CHECK(inst.physical.failure_prob.size() == 6);
    CHECK(inst.logical.links.size() == 4);
    CHECK(inst.physical.rho({1, 4}) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(inst.physical.rho({2, 5}) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(inst.physical.rho({1, 5}) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(inst.physical.rho({2, 3}) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(inst.physical.rho({3, 6}) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(inst.physical.rho({4, 6}) == doctest::Approx(0.1).epsilon(1e-12));
    REQUIRE(parsed.routes.has_value());
    CHECK(parsed.routes->routes.size() == 4);
    CHECK(inst == testutil::fig1_instance());
    CHECK(*parsed.routes == testutil::fig1_mapping());
}

TEST_CASE("parse rejects bad input with line numbers") {
    auto expect_fail = [](const std::string& text, const std::string& fragment) {
        try {
            parse_instance(text);
            FAIL_CHECK("expected failure containing '", fragment, "'");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find(fragment) != std::string::npos);
            CHECK(e.line > 0);
        }
    };
    expect_fail("[physical]\nlink 1 1 0.1\n", "self-loop");
    expect_fail("[physical]\nlink 1 2 0.1\nlink 2 1 0.2\n", "duplicate");
    expect_fail("[physical]\nlink 1 2 1.0\n", "[0,1)");
    expect_fail("[physical]\nlink 1 2 0.1\nbogus 3\n", "unknown directive");
    expect_fail("link 1 2 0.1\n", "outside");
    std::string base = "[physical]\nlink 1 2 0.1\nlink 2 3 0.1\n"
                       "[logical]\nlink 1 2\n[node_map]\n";
    expect_fail(base + "1 1\n2 1\n", "injective");
    expect_fail(base + "1 9\n", "unknown physical node");
    expect_fail(base + "1 1\n", "missing logical node");
    expect_fail(base + "1 1\n2 2\n[routes]\n1 2 : 1 3 2\n", "missing physical link");
    expect_fail(base + "1 1\n2 2\n[routes]\n1 2 : 1 3\n", "does not join");
    // disconnected logical network
    expect_fail("[physical]\nlink 1 2 0.1\nlink 3 4 0.1\nlink 2 3 0.1\nnode 5\n"
                "[logical]\nlink 1 2\nlink 3 4\nnode 5\n[node_map]\n1 1\n2 2\n3 3\n4 4\n5 5\n",
                "not connected");
}

TEST_CASE("parse accepts route given in reverse orientation") {
    std::string text = "[physical]\nlink 1 2 0.1\nlink 2 3 0.1\n[logical]\nlink 1 2\n"
                       "[node_map]\n1 1\n2 3\n[routes]\n1 2 : 3 2 1\n";
    auto parsed = parse_instance(text);
    REQUIRE(parsed.routes.has_value());
    CHECK(parsed.routes->routes.at({1, 2}) == std::vector<NodeId>{1, 2, 3});
}

TEST_CASE("serialize/parse round-trip is stable") {
    auto inst = testutil::fig1_instance();
    auto m = testutil::fig1_mapping();
    std::string once = serialize_instance(inst, &m);
    auto parsed = parse_instance(once);
    CHECK(parsed.instance == inst);
    REQUIRE(parsed.routes.has_value());
    CHECK(*parsed.routes == m);
    CHECK(serialize_instance(parsed.instance, &*parsed.routes) == once);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 25; ++i) {
        auto rnd = testutil::random_instance(rng);
        std::string s1 = serialize_instance(rnd);
        auto back = parse_instance(s1);
        CHECK(back.instance == rnd);
        CHECK(serialize_instance(back.instance) == s1);
    }
}

TEST_CASE("surviving subgraph under failures") {
    auto inst = testutil::fig1_instance();
    auto m = testutil::fig1_mapping();

    auto none = surviving_logical_subgraph(inst, m, {});
    CHECK(none.surviving.size() == 4);
    CHECK(none.connected);

    auto cut36 = surviving_logical_subgraph(inst, m, {{3, 6}});
    CHECK(cut36.surviving == std::set<Link>{{1, 2}});
    CHECK_FALSE(cut36.connected);

    auto cut15 = surviving_logical_subgraph(inst, m, {{1, 5}});
    CHECK(cut15.surviving == std::set<Link>{{1, 3}, {2, 4}, {3, 4}});
    CHECK(cut15.connected);
}

TEST_CASE("cascade is monotone in the failed set") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 30; ++i) {
        auto inst = testutil::random_instance(rng);
        auto m = testutil::random_mapping(inst, rng);
        CHECK(surviving_logical_subgraph(inst, m, {}).connected);

        std::vector<Link> phys;
        for (const auto& [e, _] : inst.physical.failure_prob) phys.push_back(e);
        std::set<Link> small, big;
        for (const auto& e : phys) {
            if (rng() % 3 == 0) small.insert(e);
            if (small.count(e) || rng() % 3 == 0) big.insert(e);
        }
        auto sub_small = surviving_logical_subgraph(inst, m, small);
        auto sub_big = surviving_logical_subgraph(inst, m, big);
        for (const auto& u : sub_big.surviving) CHECK(sub_small.surviving.count(u) == 1);
    }
}

TEST_CASE("all-paths enumeration matches the recursive oracle") {
    auto inst = testutil::fig1_instance();
    auto ps = enumerate_paths(inst, {3, 4}, PathPolicy::all_paths(5));
    REQUIRE(ps.paths.size() == 2);
    CHECK(ps.paths[0] == std::vector<NodeId>{3, 6, 4});
    CHECK(ps.paths[1] == std::vector<NodeId>{3, 2, 5, 1, 4});

    std::mt19937_64 rng(23);
    for (int i = 0; i < 20; ++i) {
        auto rnd = testutil::random_instance(rng);
        auto policy = PathPolicy::all_paths(static_cast<int>(rnd.physical.nodes.size()) - 1);
        for (const auto& u : rnd.logical.links) {
            auto got = enumerate_paths(rnd, u, policy);
            auto want = testutil::oracle_all_simple_paths(rnd, u);
            CHECK(got.paths.size() == want.size());
            for (const auto& p : got.paths) CHECK(want.count(p) == 1);
            for (std::size_t j = 1; j < got.paths.size(); ++j) {
                bool ordered = got.paths[j - 1].size() < got.paths[j].size() ||
                               (got.paths[j - 1].size() == got.paths[j].size() &&
                                got.paths[j - 1] < got.paths[j]);
                CHECK(ordered);
            }
        }
    }
}

TEST_CASE("hop cap restricts enumeration") {
    auto inst = testutil::fig1_instance();
    auto ps = enumerate_paths(inst, {3, 4}, PathPolicy::all_paths(2));
    REQUIRE(ps.paths.size() == 1);
    CHECK(ps.paths[0] == std::vector<NodeId>{3, 6, 4});
}

TEST_CASE("k-shortest agrees with sorted exhaustive enumeration") {
    auto inst = testutil::fig1_instance();
    auto one = enumerate_paths(inst, {1, 2}, PathPolicy::k_shortest(1));
    REQUIRE(one.paths.size() == 1);
    CHECK(one.paths[0] == std::vector<NodeId>{1, 5, 2});

    std::mt19937_64 rng(31);
    for (int i = 0; i < 20; ++i) {
        auto rnd = testutil::random_instance(rng);
        auto all_policy = PathPolicy::all_paths(static_cast<int>(rnd.physical.nodes.size()) - 1);
        for (const auto& u : rnd.logical.links) {
            auto all = enumerate_paths(rnd, u, all_policy);
            auto huge = enumerate_paths(rnd, u, PathPolicy::k_shortest(10000));
            CHECK(huge.paths == all.paths); // Yen exhausts every simple path
            auto three = enumerate_paths(rnd, u, PathPolicy::k_shortest(3));
            CHECK(three.paths.size() == std::min<std::size_t>(3, all.paths.size()));
            for (const auto& p : three.paths)
                CHECK(std::find(all.paths.begin(), all.paths.end(), p) != all.paths.end());
        }
    }
}

TEST_CASE("single-link physical network has exactly one path") {
    CrossLayerInstance inst;
    inst.name = "tiny";
    inst.physical.nodes = {1, 2};
    inst.physical.failure_prob[{1, 2}] = 0.2;
    inst.logical.nodes = {1, 2};
    inst.logical.links = {{1, 2}};
    inst.node_map.assign = {{1, 1}, {2, 2}};
    inst.validate();
    auto ps = enumerate_paths(inst, {1, 2}, PathPolicy::all_paths(1));
    REQUIRE(ps.paths.size() == 1);
    CHECK(ps.paths[0] == std::vector<NodeId>{1, 2});
}

TEST_CASE("no physical path raises infeasible") {
    CrossLayerInstance inst;
    inst.physical.nodes = {1, 2, 3};
    inst.physical.failure_prob[{1, 2}] = 0.1; // node 3 isolated
    inst.logical.nodes = {1, 2};
    inst.logical.links = {{1, 2}};
    inst.node_map.assign = {{1, 1}, {2, 3}};
    inst.validate();
    CHECK_THROWS_AS(enumerate_paths(inst, {1, 2}, PathPolicy::all_paths(2)), InfeasibleError);
}

TEST_SUITE_END();
