#pragma once

#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "xsurv/model.hpp"
#include "xsurv/paths.hpp"
#include "xsurv/survivability.hpp"

namespace testutil {

using namespace xsurv;

// The six-link physical ring worked example: physical cycle 1-5-2-3-6-4-1,
// logical ring 1-2-4-3-1, identity node map.
inline CrossLayerInstance fig1_instance() {
    CrossLayerInstance inst;
    inst.name = "fig1";
    for (NodeId n = 1; n <= 6; ++n) inst.physical.nodes.insert(n);
    inst.physical.failure_prob = {
        {{1, 4}, 0.2}, {{1, 5}, 0.1}, {{2, 3}, 0.1},
        {{2, 5}, 0.2}, {{3, 6}, 0.1}, {{4, 6}, 0.1},
    };
    for (NodeId n = 1; n <= 4; ++n) inst.logical.nodes.insert(n);
    inst.logical.links = {{1, 2}, {1, 3}, {2, 4}, {3, 4}};
    for (NodeId n = 1; n <= 4; ++n) inst.node_map.assign[n] = n;
    return inst;
}

inline LinkMapping fig1_mapping() {
    LinkMapping m;
    m.routes[{1, 2}] = {1, 5, 2};
    m.routes[{1, 3}] = {1, 4, 6, 3};
    m.routes[{2, 4}] = {2, 3, 6, 4};
    m.routes[{3, 4}] = {3, 6, 4};
    return m;
}

// red tree: branches {(1,2)->1-5-2, (1,3)->1-4-6-3, (3,4)->3-6-4}
inline ProtectingTree fig1_lambda1() {
    ProtectingTree t;
    t.branches = {{1, 2}, {1, 3}, {3, 4}};
    t.routes[{1, 2}] = {1, 5, 2};
    t.routes[{1, 3}] = {1, 4, 6, 3};
    t.routes[{3, 4}] = {3, 6, 4};
    return t;
}

// green tree: branches {(1,2)->1-5-2, (2,4)->2-3-6-4, (3,4)->4-6-3 reversed}
inline ProtectingTree fig1_lambda2() {
    ProtectingTree t;
    t.branches = {{1, 2}, {2, 4}, {3, 4}};
    t.routes[{1, 2}] = {1, 5, 2};
    t.routes[{2, 4}] = {2, 3, 6, 4};
    t.routes[{3, 4}] = {3, 6, 4};
    return t;
}

// Random connected physical network with bounded size, rho in [0.02, 0.35),
// plus a small connected logical overlay injectively mapped onto it.
inline CrossLayerInstance random_instance(std::mt19937_64& rng, int max_phys_nodes = 8,
                                          int max_logical_links = 4) {
    auto pick = [&](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    CrossLayerInstance inst;
    inst.name = "random";
    int np = pick(3, max_phys_nodes);
    for (NodeId n = 1; n <= np; ++n) inst.physical.nodes.insert(n);
    for (NodeId n = 2; n <= np; ++n) { // random spanning tree first
        NodeId parent = 1 + static_cast<NodeId>(rng() % static_cast<std::uint64_t>(n - 1));
        inst.physical.failure_prob[make_link(parent, n)] = 0.0;
    }
    for (NodeId a = 1; a <= np; ++a)
        for (NodeId b = a + 1; b <= np; ++b)
            if (rng() % 100 < 25) inst.physical.failure_prob[make_link(a, b)] = 0.0;
    for (auto& [e, p] : inst.physical.failure_prob)
        p = 0.02 + 0.33 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);

    int nl = pick(2, std::min(np, max_logical_links + 1));
    std::vector<NodeId> phys(inst.physical.nodes.begin(), inst.physical.nodes.end());
    for (int i = static_cast<int>(phys.size()) - 1; i > 0; --i)
        std::swap(phys[i], phys[rng() % static_cast<std::uint64_t>(i + 1)]);
    for (NodeId s = 1; s <= nl; ++s) {
        inst.logical.nodes.insert(s);
        inst.node_map.assign[s] = phys[s - 1];
    }
    for (NodeId s = 2; s <= nl; ++s) {
        NodeId parent = 1 + static_cast<NodeId>(rng() % static_cast<std::uint64_t>(s - 1));
        inst.logical.links.insert(make_link(parent, s));
    }
    std::vector<Link> extras;
    for (NodeId a = 1; a <= nl; ++a)
        for (NodeId b = a + 1; b <= nl; ++b)
            if (!inst.logical.links.count(make_link(a, b))) extras.push_back(make_link(a, b));
    for (const auto& e : extras)
        if (static_cast<int>(inst.logical.links.size()) < max_logical_links && rng() % 2 == 0)
            inst.logical.links.insert(e);
    inst.validate();
    return inst;
}

// A uniformly random full routing drawn from the exhaustive candidate sets.
inline LinkMapping random_mapping(const CrossLayerInstance& inst, std::mt19937_64& rng) {
    LinkMapping m;
    auto policy = PathPolicy::all_paths(static_cast<int>(inst.physical.nodes.size()) - 1);
    for (const auto& u : inst.logical.links) {
        auto ps = enumerate_paths(inst, u, policy);
        m.routes[u] = ps.paths[rng() % ps.paths.size()];
    }
    return m;
}

// ---------------------------------------------------------------------------
// Independent oracles (deliberately written against the raw definitions, not
// via the library's surviving_logical_subgraph / solver code paths)
// ---------------------------------------------------------------------------

// Recursive enumeration of all simple paths between two physical nodes.
inline void oracle_paths_rec(const std::map<NodeId, std::vector<NodeId>>& adj, NodeId u, NodeId t,
                             std::vector<NodeId>& cur, std::set<NodeId>& used,
                             std::set<std::vector<NodeId>>& out) {
    if (u == t) {
        out.insert(cur);
        return;
    }
    for (NodeId v : adj.at(u)) {
        if (used.count(v)) continue;
        used.insert(v);
        cur.push_back(v);
        oracle_paths_rec(adj, v, t, cur, used, out);
        cur.pop_back();
        used.erase(v);
    }
}

inline std::set<std::vector<NodeId>> oracle_all_simple_paths(const CrossLayerInstance& inst,
                                                             const Link& u) {
    auto adj = inst.physical.adjacency();
    NodeId s = inst.node_map.at(u.a), t = inst.node_map.at(u.b);
    std::vector<NodeId> cur{s};
    std::set<NodeId> used{s};
    std::set<std::vector<NodeId>> out;
    oracle_paths_rec(adj, s, t, cur, used, out);
    return out;
}

// Logical connectivity after deleting a set of logical links; plain BFS.
inline bool oracle_connected_without(const CrossLayerInstance& inst,
                                     const std::set<Link>& removed) {
    if (inst.logical.nodes.empty()) return true;
    std::map<NodeId, std::vector<NodeId>> adj;
    for (NodeId n : inst.logical.nodes) adj[n];
    for (const auto& e : inst.logical.links) {
        if (removed.count(e)) continue;
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    std::set<NodeId> seen{*inst.logical.nodes.begin()};
    std::queue<NodeId> q;
    q.push(*seen.begin());
    while (!q.empty()) {
        NodeId x = q.front();
        q.pop();
        for (NodeId y : adj[x])
            if (seen.insert(y).second) q.push(y);
    }
    return seen.size() == inst.logical.nodes.size();
}

// Critical physical links straight from the definition.
inline std::set<Link> oracle_critical(const CrossLayerInstance& inst, const LinkMapping& m) {
    std::set<Link> out;
    for (const auto& [e, p] : inst.physical.failure_prob) {
        (void)p;
        std::set<Link> dead;
        for (const auto& [u, seq] : m.routes)
            for (std::size_t i = 0; i + 1 < seq.size(); ++i)
                if (make_link(seq[i], seq[i + 1]) == e) dead.insert(u);
        if (!oracle_connected_without(inst, dead)) out.insert(e);
    }
    return out;
}

// Exhaustive enumeration over every candidate-path assignment; returns the
// minimal weighted critical-link cost (and the minimal critical count for
// uniform-failure checks).
struct ExhaustiveResult {
    double best_objective = 0.0;
    int best_critical_count = 0;
    std::uint64_t assignments = 0;
};

inline ExhaustiveResult oracle_exhaustive_base(const CrossLayerInstance& inst,
                                               const std::vector<PathSet>& paths,
                                               const std::map<Link, double>& cost) {
    std::vector<const PathSet*> sets;
    for (const auto& ps : paths) sets.push_back(&ps);
    ExhaustiveResult res;
    res.best_objective = std::numeric_limits<double>::infinity();
    res.best_critical_count = std::numeric_limits<int>::max();
    LinkMapping m;
    std::function<void(std::size_t)> rec = [&](std::size_t d) {
        if (d == sets.size()) {
            ++res.assignments;
            auto crit = oracle_critical(inst, m);
            double obj = 0.0;
            for (const auto& e : crit) obj += cost.at(e);
            res.best_objective = std::min(res.best_objective, obj);
            res.best_critical_count = std::min(res.best_critical_count,
                                               static_cast<int>(crit.size()));
            return;
        }
        for (const auto& seq : sets[d]->paths) {
            m.routes[sets[d]->logical_link] = seq;
            rec(d + 1);
        }
        m.routes.erase(sets[d]->logical_link);
    };
    rec(0);
    return res;
}

} // namespace testutil
