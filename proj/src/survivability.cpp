#include "xsurv/survivability.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace xsurv {

void validate_tree(const CrossLayerInstance& inst, const ProtectingTree& tree) {
    const size_t want = inst.logical.nodes.empty() ? 0 : inst.logical.nodes.size() - 1;
    if (tree.branches.size() != want)
        throw ValidationError("tree has " + std::to_string(tree.branches.size()) +
                              " branches, expected " + std::to_string(want));
    // acyclic + spanning via union-find
    std::map<NodeId, NodeId> parent;
    for (NodeId n : inst.logical.nodes) parent[n] = n;
    auto find = [&](NodeId x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : tree.branches) {
        if (!inst.logical.links.count(e))
            throw ValidationError("branch " + link_str(e) + " is not a logical link");
        NodeId ra = find(e.a), rb = find(e.b);
        if (ra == rb) throw ValidationError("branches contain a cycle at " + link_str(e));
        parent[ra] = rb;
    }
    for (const auto& e : tree.branches) {
        auto it = tree.routes.find(e);
        if (it == tree.routes.end())
            throw ValidationError("branch " + link_str(e) + " has no route");
        validate_route(inst, e, it->second);
    }
}

std::set<Link> tree_links(const ProtectingTree& tree) {
    std::set<Link> out;
    for (const auto& [u, seq] : tree.routes) {
        if (!tree.branches.count(u)) continue;
        auto links = route_links(seq);
        out.insert(links.begin(), links.end());
    }
    return out;
}

double survival_product(const CrossLayerInstance& inst, const std::set<Link>& links) {
    if (links.size() > 64) {
        double log_sum = 0.0;
        for (const auto& e : links) log_sum += std::log(1.0 - inst.physical.rho(e));
        return std::exp(log_sum);
    }
    double p = 1.0;
    for (const auto& e : links) p *= 1.0 - inst.physical.rho(e);
    return p;
}

double tree_probability(const CrossLayerInstance& inst, const ProtectingTree& tree) {
    return survival_product(inst, tree_links(tree));
}

std::set<Link> treeset_common_links(const TreeSet& trees) {
    if (trees.empty()) throw ValidationError("tree set is empty");
    std::set<Link> common = tree_links(trees.front());
    for (size_t i = 1; i < trees.size() && !common.empty(); ++i) {
        std::set<Link> next = tree_links(trees[i]);
        std::set<Link> inter;
        std::set_intersection(common.begin(), common.end(), next.begin(), next.end(),
                              std::inserter(inter, inter.begin()));
        common.swap(inter);
    }
    return common;
}

double treeset_probability(const CrossLayerInstance& inst, const TreeSet& trees) {
    return survival_product(inst, treeset_common_links(trees));
}

std::set<Link> critical_links(const CrossLayerInstance& inst, const LinkMapping& m) {
    std::set<Link> out;
    for (const auto& [e, _] : inst.physical.failure_prob)
        if (!surviving_logical_subgraph(inst, m, {e}).connected) out.insert(e);
    return out;
}

double mapping_probability(const CrossLayerInstance& inst, const LinkMapping& m) {
    return survival_product(inst, critical_links(inst, m));
}

namespace {

// Deterministic spanning tree of the surviving logical subgraph: BFS from the
// lowest-numbered logical node, neighbors in ascending order.
ProtectingTree witness_tree(const CrossLayerInstance& inst, const LinkMapping& m,
                            const std::set<Link>& surviving) {
    std::map<NodeId, std::vector<NodeId>> adj;
    for (NodeId n : inst.logical.nodes) adj[n];
    for (const auto& e : surviving) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    for (auto& [n, nbrs] : adj) std::sort(nbrs.begin(), nbrs.end());

    ProtectingTree tree;
    std::set<NodeId> seen;
    std::queue<NodeId> q;
    NodeId root = *inst.logical.nodes.begin();
    seen.insert(root);
    q.push(root);
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop();
        for (NodeId v : adj[u]) {
            if (seen.count(v)) continue;
            seen.insert(v);
            Link branch = make_link(u, v);
            tree.branches.insert(branch);
            tree.routes[branch] = m.routes.at(branch);
            q.push(v);
        }
    }
    return tree;
}

} // namespace

BaseTreeSet extract_base_tree_set(const CrossLayerInstance& inst, const LinkMapping& m) {
    BaseTreeSet out;
    for (const auto& [e, _] : inst.physical.failure_prob) {
        auto sub = surviving_logical_subgraph(inst, m, {e});
        if (!sub.connected) {
            out.unprotected.insert(e);
            continue;
        }
        ProtectingTree tree = witness_tree(inst, m, sub.surviving);
        int idx = -1;
        for (size_t i = 0; i < out.trees.size(); ++i)
            if (out.trees[i] == tree) {
                idx = static_cast<int>(i);
                break;
            }
        if (idx < 0) {
            idx = static_cast<int>(out.trees.size());
            out.trees.push_back(std::move(tree));
        }
        out.protected_by[e] = idx;
    }
    return out;
}

double base_set_probability(const CrossLayerInstance& inst, const BaseTreeSet& base) {
    if (base.trees.empty()) {
        std::set<Link> all;
        for (const auto& [e, _] : inst.physical.failure_prob) all.insert(e);
        return survival_product(inst, all);
    }
    return treeset_probability(inst, base.trees);
}

std::string serialize_base_tree_set(const CrossLayerInstance& inst, const BaseTreeSet& base) {
    std::ostringstream out;
    out << "unprotected:";
    for (const auto& e : base.unprotected) out << " " << link_str(e);
    out << "\n";
    for (size_t i = 0; i < base.trees.size(); ++i) {
        out << "tree " << i + 1 << "\n";
        for (const auto& [u, seq] : base.trees[i].routes) {
            out << "  " << u.a << " " << u.b << " :";
            for (NodeId n : seq) out << " " << n;
            out << "\n";
        }
        out << "  protects:";
        for (const auto& [e, idx] : base.protected_by)
            if (idx == static_cast<int>(i)) out << " " << link_str(e);
        out << "\n";
    }
    (void)inst;
    return out.str();
}

} // namespace xsurv
