#pragma once

#include <string>
#include <vector>

#include "xsurv/model.hpp"

namespace xsurv {

// Candidate-path policy for routing a logical link.
//   AllPaths(H): every simple path with at most H hops; exhaustive for
//                H >= |V_P| - 1.
//   KShortest(k): Yen's algorithm, hop-count metric, deterministic
//                 lexicographic tie-breaking.
struct PathPolicy {
    enum class Kind { AllPaths, KShortest };
    Kind kind = Kind::AllPaths;
    int max_hops = 0;
    int k = 0;

    static PathPolicy all_paths(int max_hops) { return {Kind::AllPaths, max_hops, 0}; }
    static PathPolicy k_shortest(int k) { return {Kind::KShortest, 0, k}; }
    // all-paths at desk scale (|E_P| <= 25), k-shortest(16) beyond
    static PathPolicy default_for(const CrossLayerInstance& inst);
    std::string describe() const;
};

// Candidate routings for one logical link, sorted by (length, node sequence).
struct PathSet {
    Link logical_link;
    PathPolicy policy;
    std::vector<std::vector<NodeId>> paths;
};

// Throws InfeasibleError when no physical path joins the mapped endpoints.
PathSet enumerate_paths(const CrossLayerInstance& inst, const Link& u, const PathPolicy& policy);

// One PathSet per logical link in canonical order. With `allow_empty`,
// unroutable links yield an empty PathSet instead of throwing.
std::vector<PathSet> enumerate_all_path_sets(const CrossLayerInstance& inst,
                                             const PathPolicy& policy, bool allow_empty = false);

} // namespace xsurv
