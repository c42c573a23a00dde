#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "xsurv/failure_sim.hpp"
#include "xsurv/survivability.hpp"

using namespace xsurv;

TEST_SUITE_BEGIN("failure_sim");

TEST_CASE("single failure scan matches the worked mapping") {
    auto inst = testutil::fig1_instance();
    auto m = testutil::fig1_mapping();
    auto scan = single_failure_scan(inst, m);
    REQUIRE(scan.size() == 6);
    for (const auto& [e, survives] : scan) {
        bool should_die = e == Link{3, 6} || e == Link{4, 6};
        CHECK(survives == !should_die);
    }
}

TEST_CASE("scan false-set equals critical links on random instances") {
    std::mt19937_64 rng(404);
    for (int i = 0; i < 60; ++i) {
        auto inst = testutil::random_instance(rng);
        auto m = testutil::random_mapping(inst, rng);
        auto scan = single_failure_scan(inst, m);
        std::set<Link> dead;
        for (const auto& [e, survives] : scan)
            if (!survives) dead.insert(e);
        CHECK(dead == critical_links(inst, m));
    }
}

TEST_CASE("exact reliability of the worked example") {
    auto inst = testutil::fig1_instance();
    auto m = testutil::fig1_mapping();
    auto rep = exact_reliability(inst, m);
    CHECK(rep.method == ReliabilityReport::Method::Exact);
    CHECK(rep.value == doctest::Approx(0.734832).epsilon(1e-9));
    CHECK(rep.std_error == 0.0);
    CHECK(rep.samples == 64);
}

TEST_CASE("exact reliability degenerate cases") {
    auto inst = testutil::fig1_instance();
    for (auto& [e, p] : inst.physical.failure_prob) p = 0.0;
    CHECK(exact_reliability(inst, testutil::fig1_mapping()).value == 1.0);

    CrossLayerInstance tiny;
    tiny.physical.nodes = {1, 2};
    tiny.physical.failure_prob[{1, 2}] = 0.2;
    tiny.logical.nodes = {1, 2};
    tiny.logical.links = {{1, 2}};
    tiny.node_map.assign = {{1, 1}, {2, 2}};
    tiny.validate();
    LinkMapping m;
    m.routes[{1, 2}] = {1, 2};
    CHECK(exact_reliability(tiny, m).value == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("enumeration cap is enforced before any work") {
    // path of 23 physical links
    CrossLayerInstance inst;
    for (NodeId n = 1; n <= 24; ++n) inst.physical.nodes.insert(n);
    for (NodeId n = 1; n <= 23; ++n) inst.physical.failure_prob[{n, n + 1}] = 0.01;
    inst.logical.nodes = {1, 2};
    inst.logical.links = {{1, 2}};
    inst.node_map.assign = {{1, 1}, {2, 24}};
    inst.validate();
    LinkMapping m;
    std::vector<NodeId> seq;
    for (NodeId n = 1; n <= 24; ++n) seq.push_back(n);
    m.routes[{1, 2}] = seq;
    CHECK_THROWS_WITH_AS(exact_reliability(inst, m),
                         doctest::Contains("mc_reliability"), EnumerationCapError);
}

TEST_CASE("monte carlo is reproducible and sane") {
    auto inst = testutil::fig1_instance();
    auto m = testutil::fig1_mapping();

    auto a = mc_reliability(inst, m, 20000, 42);
    auto b = mc_reliability(inst, m, 20000, 42);
    CHECK(a.value == b.value);
    CHECK(a.seed == 42);
    CHECK(a.samples == 20000);

    auto one = mc_reliability(inst, m, 1, 7);
    CHECK((one.value == 0.0 || one.value == 1.0));

    auto zero = inst;
    for (auto& [e, p] : zero.physical.failure_prob) p = 0.0;
    CHECK(mc_reliability(zero, m, 100, 9).value == 1.0);
}

TEST_CASE("monte carlo converges to the exact value") {
    auto inst = testutil::fig1_instance();
    auto m = testutil::fig1_mapping();
    double exact = exact_reliability(inst, m).value;
    auto big = mc_reliability(inst, m, 1000000, 123);
    CHECK(std::abs(big.value - exact) <= 4.0 * big.std_error + 1e-12);

    // |error| shrinks over growing sample counts for this fixed seed
    double e2 = std::abs(mc_reliability(inst, m, 100, 123).value - exact);
    double e4 = std::abs(mc_reliability(inst, m, 10000, 123).value - exact);
    double e6 = std::abs(big.value - exact);
    CHECK(e4 <= e2 + 0.02);
    CHECK(e6 <= e4 + 0.005);
}

TEST_CASE("exact reliability never exceeds the critical-link bound") {
    std::mt19937_64 rng(505);
    for (int i = 0; i < 40; ++i) {
        auto inst = testutil::random_instance(rng);
        auto m = testutil::random_mapping(inst, rng);
        auto rep = exact_reliability(inst, m);
        CHECK(rep.value <= mapping_probability(inst, m) + 1e-12);
    }
}

TEST_CASE("bound is tight when all links are critical") {
    // single logical link over a 2-hop path covering the whole substrate
    CrossLayerInstance inst;
    inst.physical.nodes = {1, 2, 3};
    inst.physical.failure_prob = {{{1, 2}, 0.15}, {{2, 3}, 0.25}};
    inst.logical.nodes = {1, 2};
    inst.logical.links = {{1, 2}};
    inst.node_map.assign = {{1, 1}, {2, 3}};
    inst.validate();
    LinkMapping m;
    m.routes[{1, 2}] = {1, 2, 3};
    CHECK(exact_reliability(inst, m).value ==
          doctest::Approx(mapping_probability(inst, m)).epsilon(1e-12));
}

TEST_CASE("bound is tight when non-critical failures never disconnect") {
    // one-hop route: the three unused links never matter, so survival is
    // exactly "the critical link stays up"
    CrossLayerInstance inst;
    inst.physical.nodes = {1, 2, 3, 4};
    inst.physical.failure_prob = {
        {{1, 2}, 0.1}, {{2, 3}, 0.2}, {{3, 4}, 0.618}, {{1, 4}, 0.0}};
    inst.logical.nodes = {1, 2};
    inst.logical.links = {{1, 2}};
    inst.node_map.assign = {{1, 1}, {2, 2}};
    inst.validate();
    LinkMapping m;
    m.routes[{1, 2}] = {1, 2};
    // critical = {(1,2)}; links (2,3),(3,4),(1,4) never matter
    CHECK(exact_reliability(inst, m).value ==
          doctest::Approx(mapping_probability(inst, m)).epsilon(1e-12));
    CHECK(mapping_probability(inst, m) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_SUITE_END();
