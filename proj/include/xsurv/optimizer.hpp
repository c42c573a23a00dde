#pragma once

#include <cstdint>
#include <map>

#include "xsurv/model.hpp"
#include "xsurv/paths.hpp"
#include "xsurv/survivability.hpp"

namespace xsurv {

enum class WeightKind { Uniform, Random };

// Per-link objective coefficients. Uniform: c_e = 1 (minimize counts).
// Random: c_e = -ln(1 - rho_e) >= 0, so that exp(-sum) recovers the
// survivable probability.
struct WeightModel {
    WeightKind kind = WeightKind::Uniform;
    std::map<Link, double> cost;
};

WeightModel build_weights(const CrossLayerInstance& inst, WeightKind kind);

struct SolveLimits {
    // Wall-clock cap per solve. Negative disables; zero trips immediately.
    double budget_s = 450.0;
    std::uint64_t max_nodes = 0; // 0 = unlimited
};

struct SolveStats {
    std::uint64_t nodes_explored = 0;
    double wall_ms = 0.0;
};

struct TreeResult {
    ProtectingTree tree;
    double objective = 0.0; // sum of weights over tree_links(tree)
    double phi = 0.0;       // tree_probability under the instance's rho
    SolveStats stats;
};

struct SolveResult {
    LinkMapping mapping;         // optimal full routing m*
    std::set<Link> unprotected;  // critical links of m*
    double objective = 0.0;      // sum of weights over unprotected
    double phi = 0.0;            // product of (1 - rho_e) over unprotected
    BaseTreeSet base_set;
    SolveStats stats;
};

// Spanning tree of the logical network with routes from the candidate sets
// minimizing the weighted size of the route union. Exact with respect to the
// candidate sets; globally exact under an exhaustive all-paths policy.
// Deterministic: first optimum in (branch-set, path-index) lexicographic order.
TreeResult solve_max_prct_tree(const CrossLayerInstance& inst, const PathPolicy& policy,
                               const WeightModel& weights, const SolveLimits& limits = {});
TreeResult solve_max_prct_tree(const CrossLayerInstance& inst, const std::vector<PathSet>& paths,
                               const WeightModel& weights, const SolveLimits& limits = {});

// Full logical-link routing minimizing the weighted cost of its critical-link
// set, by depth-first branch and bound over per-link candidate paths. The
// lower bound at a partial assignment is the weight of links already critical
// no matter how the remaining links are routed. Among optima, returns the
// lexicographically smallest path-index assignment (logical links in
// canonical order).
SolveResult solve_base_mapping(const CrossLayerInstance& inst, const PathPolicy& policy,
                               const WeightModel& weights, const SolveLimits& limits = {});
SolveResult solve_base_mapping(const CrossLayerInstance& inst, const std::vector<PathSet>& paths,
                               const WeightModel& weights, const SolveLimits& limits = {});

} // namespace xsurv
