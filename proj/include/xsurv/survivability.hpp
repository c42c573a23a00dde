#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "xsurv/model.hpp"

namespace xsurv {

// A logical spanning tree together with a physical route per branch. The tree
// protects every physical link outside the union of its branch routes: as long
// as only such links fail, every branch survives and the overlay stays
// connected.
struct ProtectingTree {
    std::set<Link> branches;
    std::map<Link, std::vector<NodeId>> routes;
    bool operator==(const ProtectingTree&) const = default;
};

using TreeSet = std::vector<ProtectingTree>;

// Throws ValidationError unless branches form a spanning tree of the logical
// network and every route is a valid physical path for its branch.
void validate_tree(const CrossLayerInstance& inst, const ProtectingTree& tree);

// Union of physical links used by all branch routes.
std::set<Link> tree_links(const ProtectingTree& tree);

// Product of (1 - rho_e) over the distinct links of tree_links(tree); a link
// shared by several branches is counted once.
double tree_probability(const CrossLayerInstance& inst, const ProtectingTree& tree);

// Physical links used by every tree of the set. Throws on an empty set.
std::set<Link> treeset_common_links(const TreeSet& trees);

// Product of (1 - rho_e) over the common links; 1.0 when the trees have
// disjoint physical support. Throws on an empty set.
double treeset_probability(const CrossLayerInstance& inst, const TreeSet& trees);

// Physical links whose single failure disconnects the logical network under
// mapping m. Exactly the links no protecting spanning tree can avoid.
std::set<Link> critical_links(const CrossLayerInstance& inst, const LinkMapping& m);

// Survivable probability of the mapping: product of (1 - rho_e) over its
// critical links (1.0 when none).
double mapping_probability(const CrossLayerInstance& inst, const LinkMapping& m);

// Witness trees extracted per protected physical link, deduplicated.
// `unprotected` holds the critical links; `protected_by` maps every other
// physical link to the index of a tree avoiding it.
struct BaseTreeSet {
    TreeSet trees;
    std::map<Link, int> protected_by;
    std::set<Link> unprotected;
};

BaseTreeSet extract_base_tree_set(const CrossLayerInstance& inst, const LinkMapping& m);

// treeset_probability of the witness trees. When no physical link is
// protected the set of trees is empty and the common-link intersection
// degenerates to all of E_P, so the product runs over every physical link.
double base_set_probability(const CrossLayerInstance& inst, const BaseTreeSet& base);

// Text form: one `tree <i>` block per tree with its branch routes and a
// `protects:` line, preceded by the unprotected link list.
std::string serialize_base_tree_set(const CrossLayerInstance& inst, const BaseTreeSet& base);

// Product of (1 - rho_e) over an arbitrary physical link set; switches to
// log-domain accumulation past 64 factors.
double survival_product(const CrossLayerInstance& inst, const std::set<Link>& links);

} // namespace xsurv
