#include "xsurv/paths.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

namespace xsurv {

PathPolicy PathPolicy::default_for(const CrossLayerInstance& inst) {
    if (inst.physical.failure_prob.size() <= 25)
        return all_paths(static_cast<int>(inst.physical.nodes.size()) - 1);
    return k_shortest(16);
}

std::string PathPolicy::describe() const {
    if (kind == Kind::AllPaths) return "all-paths(H=" + std::to_string(max_hops) + ")";
    return "k-shortest(k=" + std::to_string(k) + ")";
}

namespace {

using Adjacency = std::map<NodeId, std::vector<NodeId>>;

struct PathLess {
    bool operator()(const std::vector<NodeId>& x, const std::vector<NodeId>& y) const {
        if (x.size() != y.size()) return x.size() < y.size();
        return x < y;
    }
};

void dfs_all_paths(const Adjacency& adj, NodeId u, NodeId target, int hops_left,
                   std::vector<NodeId>& stack, std::set<NodeId>& seen,
                   std::vector<std::vector<NodeId>>& out) {
    if (u == target) {
        out.push_back(stack);
        return;
    }
    if (hops_left == 0) return;
    for (NodeId v : adj.at(u)) {
        if (seen.count(v)) continue;
        seen.insert(v);
        stack.push_back(v);
        dfs_all_paths(adj, v, target, hops_left - 1, stack, seen, out);
        stack.pop_back();
        seen.erase(v);
    }
}

// Lexicographically smallest shortest path under edge/node bans, or empty.
// BFS distances from the target let the walk greedily take the smallest
// next node that still lies on some shortest path.
std::vector<NodeId> lex_shortest_path(const Adjacency& adj, NodeId s, NodeId t,
                                      const std::set<Link>& banned_edges,
                                      const std::set<NodeId>& banned_nodes) {
    constexpr int kInf = std::numeric_limits<int>::max();
    std::map<NodeId, int> dist;
    std::vector<NodeId> queue{t};
    dist[t] = 0;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        NodeId u = queue[qi];
        for (NodeId v : adj.at(u)) {
            if (banned_nodes.count(v) || banned_edges.count(make_link(u, v))) continue;
            if (dist.count(v)) continue;
            dist[v] = dist[u] + 1;
            queue.push_back(v);
        }
    }
    auto d = [&](NodeId n) { return dist.count(n) ? dist.at(n) : kInf; };
    if (banned_nodes.count(s) || d(s) == kInf) return {};
    std::vector<NodeId> path{s};
    NodeId u = s;
    while (u != t) {
        for (NodeId v : adj.at(u)) {
            if (banned_nodes.count(v) || banned_edges.count(make_link(u, v))) continue;
            if (d(v) == d(u) - 1) {
                path.push_back(v);
                u = v;
                break;
            }
        }
    }
    return path;
}

std::vector<std::vector<NodeId>> yen_ksp(const Adjacency& adj, NodeId s, NodeId t, int k) {
    std::vector<std::vector<NodeId>> accepted;
    std::set<std::vector<NodeId>, PathLess> candidates;
    std::set<std::vector<NodeId>> known;

    auto first = lex_shortest_path(adj, s, t, {}, {});
    if (first.empty()) return accepted;
    accepted.push_back(first);
    known.insert(first);

    while (static_cast<int>(accepted.size()) < k) {
        const auto& prev = accepted.back();
        for (size_t i = 0; i + 1 < prev.size(); ++i) {
            NodeId spur = prev[i];
            std::vector<NodeId> root(prev.begin(), prev.begin() + i + 1);
            std::set<Link> banned_edges;
            for (const auto& p : accepted)
                if (p.size() > i + 1 && std::equal(root.begin(), root.end(), p.begin()))
                    banned_edges.insert(make_link(p[i], p[i + 1]));
            std::set<NodeId> banned_nodes(root.begin(), root.end() - 1);
            auto spur_path = lex_shortest_path(adj, spur, t, banned_edges, banned_nodes);
            if (spur_path.empty()) continue;
            std::vector<NodeId> cand(root.begin(), root.end() - 1);
            cand.insert(cand.end(), spur_path.begin(), spur_path.end());
            if (!known.count(cand)) candidates.insert(std::move(cand));
        }
        if (candidates.empty()) break;
        auto best = *candidates.begin();
        candidates.erase(candidates.begin());
        known.insert(best);
        accepted.push_back(std::move(best));
    }
    return accepted;
}

} // namespace

PathSet enumerate_paths(const CrossLayerInstance& inst, const Link& u, const PathPolicy& policy) {
    if (!inst.logical.links.count(u))
        throw ValidationError("not a logical link: " + link_str(u));
    NodeId s = inst.node_map.at(u.a);
    NodeId t = inst.node_map.at(u.b);
    Adjacency adj = inst.physical.adjacency();

    PathSet out{u, policy, {}};
    if (policy.kind == PathPolicy::Kind::AllPaths) {
        std::vector<NodeId> stack{s};
        std::set<NodeId> seen{s};
        dfs_all_paths(adj, s, t, policy.max_hops, stack, seen, out.paths);
    } else {
        out.paths = yen_ksp(adj, s, t, policy.k);
    }
    std::sort(out.paths.begin(), out.paths.end(), PathLess{});
    if (out.paths.empty())
        throw InfeasibleError("no physical path for logical link " + link_str(u) +
                              " under policy " + policy.describe());
    return out;
}

std::vector<PathSet> enumerate_all_path_sets(const CrossLayerInstance& inst,
                                             const PathPolicy& policy, bool allow_empty) {
    std::vector<PathSet> out;
    for (const auto& u : inst.logical.links) {
        try {
            out.push_back(enumerate_paths(inst, u, policy));
        } catch (const InfeasibleError&) {
            if (!allow_empty) throw;
            out.push_back(PathSet{u, policy, {}});
        }
    }
    return out;
}

} // namespace xsurv
