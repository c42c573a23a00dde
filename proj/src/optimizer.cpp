#include "xsurv/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace xsurv {

WeightModel build_weights(const CrossLayerInstance& inst, WeightKind kind) {
    WeightModel w{kind, {}};
    for (const auto& [e, p] : inst.physical.failure_prob) {
        if (p >= 1.0)
            throw ValidationError("failure probability 1 on " + link_str(e) +
                                  " gives an infinite weight");
        w.cost[e] = kind == WeightKind::Uniform ? 1.0 : -std::log(1.0 - p);
    }
    return w;
}

namespace {

using Clock = std::chrono::steady_clock;

// Answers "is the logical network disconnected once this set of logical links
// is removed?" for link sets given as bitmasks. Dense table up to 20 links,
// memoized on demand beyond. Monotone: adding links to the mask can only keep
// it disconnected.
class DisconnectOracle {
public:
    DisconnectOracle(const LogicalNetwork& logical, const std::vector<Link>& links)
        : links_(links) {
        for (NodeId n : logical.nodes) node_index_[n] = num_nodes_++;
        if (links_.size() <= 20) {
            dense_.resize(std::size_t{1} << links_.size());
            for (std::size_t mask = 0; mask < dense_.size(); ++mask)
                dense_[mask] = compute(mask);
        }
    }

    bool operator()(std::uint64_t removed_mask) const {
        if (!dense_.empty()) return dense_[removed_mask];
        auto it = memo_.find(removed_mask);
        if (it != memo_.end()) return it->second;
        bool v = compute(removed_mask);
        memo_.emplace(removed_mask, v);
        return v;
    }

private:
    bool compute(std::uint64_t removed_mask) const {
        std::vector<int> parent(num_nodes_);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        int components = num_nodes_;
        for (std::size_t i = 0; i < links_.size(); ++i) {
            if ((removed_mask >> i) & 1) continue;
            int ra = find(node_index_.at(links_[i].a));
            int rb = find(node_index_.at(links_[i].b));
            if (ra != rb) {
                parent[ra] = rb;
                --components;
            }
        }
        return components > 1;
    }

    std::vector<Link> links_;
    std::map<NodeId, int> node_index_;
    int num_nodes_ = 0;
    std::vector<char> dense_;
    mutable std::unordered_map<std::uint64_t, bool> memo_;
};

struct Workspace {
    std::vector<Link> phys;               // canonical order
    std::map<Link, int> phys_index;
    std::vector<double> cost;             // per physical index
    std::vector<Link> logical;            // canonical order
    std::vector<std::vector<std::vector<int>>> path_links; // [logical][path] -> physical indices

    Workspace(const CrossLayerInstance& inst, const std::vector<PathSet>& paths,
              const WeightModel& weights) {
        for (const auto& [e, _] : inst.physical.failure_prob) {
            phys_index[e] = static_cast<int>(phys.size());
            phys.push_back(e);
            cost.push_back(weights.cost.at(e));
        }
        if (paths.size() != inst.logical.links.size())
            throw ValidationError("path sets do not cover the logical links");
        std::map<Link, const PathSet*> by_link;
        for (const auto& ps : paths) by_link[ps.logical_link] = &ps;
        for (const auto& u : inst.logical.links) {
            auto it = by_link.find(u);
            if (it == by_link.end())
                throw ValidationError("no path set for logical link " + link_str(u));
            logical.push_back(u);
            std::vector<std::vector<int>> cand;
            for (const auto& seq : it->second->paths) {
                std::vector<int> idxs;
                for (std::size_t i = 0; i + 1 < seq.size(); ++i)
                    idxs.push_back(phys_index.at(make_link(seq[i], seq[i + 1])));
                cand.push_back(std::move(idxs));
            }
            path_links.push_back(std::move(cand));
        }
        if (logical.size() > 64)
            throw ValidationError("solver supports at most 64 logical links");
    }
};

struct BudgetGuard {
    Clock::time_point start = Clock::now();
    const SolveLimits& limits;
    std::uint64_t nodes = 0;

    explicit BudgetGuard(const SolveLimits& l) : limits(l) { check(); }

    void tick() {
        ++nodes;
        if ((nodes & 63) == 0) check();
        if (limits.max_nodes && nodes > limits.max_nodes)
            throw BudgetExceededError("node cap of " + std::to_string(limits.max_nodes) +
                                      " exceeded");
    }

    void check() const {
        if (limits.budget_s < 0) return;
        double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
        if (elapsed > limits.budget_s || limits.budget_s == 0.0)
            throw BudgetExceededError("time budget of " + std::to_string(limits.budget_s) +
                                      " s exceeded");
    }

    double wall_ms() const {
        return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    }
};

// DFS over per-logical-link path choices. users_[e] tracks which committed
// logical links route over physical link e; a link becomes forced-critical as
// soon as removing its users disconnects the overlay, which is irreversible
// down the subtree because user sets only grow.
class BaseMappingSearch {
public:
    BaseMappingSearch(const Workspace& ws, const DisconnectOracle& disc, BudgetGuard& guard)
        : ws_(ws), disc_(disc), guard_(guard), users_(ws.phys.size(), 0),
          forced_(ws.phys.size(), 0), assignment_(ws.logical.size(), -1) {}

    std::vector<int> run() {
        dfs(0);
        return best_assignment_;
    }

private:
    double forced_cost() const {
        double c = 0.0;
        for (std::size_t e = 0; e < forced_.size(); ++e)
            if (forced_[e]) c += ws_.cost[e];
        return c;
    }

    void dfs(std::size_t depth) {
        guard_.tick();
        if (depth == ws_.logical.size()) {
            double obj = forced_cost();
            if (obj < best_obj_) {
                best_obj_ = obj;
                best_assignment_ = assignment_;
            }
            return;
        }
        const auto& candidates = ws_.path_links[depth];
        for (std::size_t pi = 0; pi < candidates.size(); ++pi) {
            const std::size_t mark = forced_stack_.size();
            for (int e : candidates[pi]) {
                users_[e] |= std::uint64_t{1} << depth;
                if (!forced_[e] && disc_(users_[e])) {
                    forced_[e] = 1;
                    forced_stack_.push_back(e);
                }
            }
            assignment_[depth] = static_cast<int>(pi);
            if (forced_cost() < best_obj_) dfs(depth + 1);
            for (int e : candidates[pi]) users_[e] &= ~(std::uint64_t{1} << depth);
            while (forced_stack_.size() > mark) {
                forced_[forced_stack_.back()] = 0;
                forced_stack_.pop_back();
            }
            assignment_[depth] = -1;
        }
    }

    const Workspace& ws_;
    const DisconnectOracle& disc_;
    BudgetGuard& guard_;
    std::vector<std::uint64_t> users_;
    std::vector<char> forced_;
    std::vector<int> forced_stack_;
    std::vector<int> assignment_;
    std::vector<int> best_assignment_;
    double best_obj_ = std::numeric_limits<double>::infinity();
};

} // namespace

SolveResult solve_base_mapping(const CrossLayerInstance& inst, const PathPolicy& policy,
                               const WeightModel& weights, const SolveLimits& limits) {
    return solve_base_mapping(inst, enumerate_all_path_sets(inst, policy), weights, limits);
}

SolveResult solve_base_mapping(const CrossLayerInstance& inst, const std::vector<PathSet>& paths,
                               const WeightModel& weights, const SolveLimits& limits) {
    for (const auto& ps : paths)
        if (ps.paths.empty())
            throw InfeasibleError("no physical path for logical link " +
                                  link_str(ps.logical_link));
    Workspace ws(inst, paths, weights);
    DisconnectOracle disc(inst.logical, ws.logical);
    BudgetGuard guard(limits);

    BaseMappingSearch search(ws, disc, guard);
    std::vector<int> assignment = search.run();
    if (assignment.empty() && !ws.logical.empty())
        throw InfeasibleError("no feasible routing found");

    SolveResult result;
    std::map<Link, const PathSet*> by_link;
    for (const auto& ps : paths) by_link[ps.logical_link] = &ps;
    for (std::size_t i = 0; i < ws.logical.size(); ++i)
        result.mapping.routes[ws.logical[i]] = by_link.at(ws.logical[i])->paths[assignment[i]];

    result.unprotected = critical_links(inst, result.mapping);
    result.objective = 0.0;
    for (const auto& e : result.unprotected) result.objective += weights.cost.at(e);
    result.phi = survival_product(inst, result.unprotected);
    result.base_set = extract_base_tree_set(inst, result.mapping);
    result.stats.nodes_explored = guard.nodes;
    result.stats.wall_ms = guard.wall_ms();
    return result;
}

namespace {

// Lexicographic enumeration of |V_L|-1 sized acyclic logical link subsets.
void enumerate_spanning_trees(const std::vector<Link>& logical, std::size_t num_nodes,
                              const std::function<void(const std::vector<int>&)>& visit) {
    if (num_nodes == 0) return;
    const std::size_t want = num_nodes - 1;
    std::vector<int> combo;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (combo.size() == want) {
            // acyclicity check; |V_L|-1 acyclic links over V_L span it
            std::map<NodeId, NodeId> parent;
            auto find = [&](NodeId x) {
                while (parent[x] != x) x = parent[x] = parent[parent[x]];
                return x;
            };
            for (int i : combo) {
                const Link& e = logical[i];
                parent.try_emplace(e.a, e.a);
                parent.try_emplace(e.b, e.b);
                NodeId ra = find(e.a), rb = find(e.b);
                if (ra == rb) return;
                parent[ra] = rb;
            }
            if (parent.size() != num_nodes) return;
            visit(combo);
            return;
        }
        for (std::size_t i = start; i < logical.size(); ++i) {
            combo.push_back(static_cast<int>(i));
            rec(i + 1);
            combo.pop_back();
        }
    };
    rec(0);
}

} // namespace

TreeResult solve_max_prct_tree(const CrossLayerInstance& inst, const PathPolicy& policy,
                               const WeightModel& weights, const SolveLimits& limits) {
    return solve_max_prct_tree(inst, enumerate_all_path_sets(inst, policy, /*allow_empty=*/true),
                               weights, limits);
}

TreeResult solve_max_prct_tree(const CrossLayerInstance& inst, const std::vector<PathSet>& paths,
                               const WeightModel& weights, const SolveLimits& limits) {
    Workspace ws(inst, paths, weights);
    BudgetGuard guard(limits);

    double best_obj = std::numeric_limits<double>::infinity();
    std::vector<int> best_combo;
    std::vector<int> best_assignment;

    std::vector<int> used(ws.phys.size(), 0);
    auto union_cost = [&] {
        double c = 0.0;
        for (std::size_t e = 0; e < used.size(); ++e)
            if (used[e]) c += ws.cost[e];
        return c;
    };

    enumerate_spanning_trees(ws.logical, inst.logical.nodes.size(), [&](const std::vector<int>& combo) {
        for (int i : combo)
            if (ws.path_links[i].empty()) return; // this tree needs an unroutable link
        std::vector<int> assignment(combo.size(), -1);
        std::function<void(std::size_t)> dfs = [&](std::size_t depth) {
            guard.tick();
            if (depth == combo.size()) {
                double obj = union_cost();
                if (obj < best_obj) {
                    best_obj = obj;
                    best_combo = combo;
                    best_assignment = assignment;
                }
                return;
            }
            const auto& candidates = ws.path_links[combo[depth]];
            for (std::size_t pi = 0; pi < candidates.size(); ++pi) {
                for (int e : candidates[pi]) ++used[e];
                assignment[depth] = static_cast<int>(pi);
                if (union_cost() < best_obj) dfs(depth + 1);
                for (int e : candidates[pi]) --used[e];
                assignment[depth] = -1;
            }
        };
        dfs(0);
    });

    if (best_combo.empty() && inst.logical.nodes.size() > 1)
        throw InfeasibleError("no routable spanning tree: some logical link has no path");

    TreeResult result;
    std::map<Link, const PathSet*> by_link;
    for (const auto& ps : paths) by_link[ps.logical_link] = &ps;
    for (std::size_t d = 0; d < best_combo.size(); ++d) {
        const Link& u = ws.logical[best_combo[d]];
        result.tree.branches.insert(u);
        result.tree.routes[u] = by_link.at(u)->paths[best_assignment[d]];
    }
    result.objective = 0.0;
    for (const auto& e : tree_links(result.tree)) result.objective += weights.cost.at(e);
    result.phi = tree_probability(inst, result.tree);
    result.stats.nodes_explored = guard.nodes;
    result.stats.wall_ms = guard.wall_ms();
    return result;
}

} // namespace xsurv
