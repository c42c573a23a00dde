#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xsurv/errors.hpp"

namespace xsurv {

using NodeId = int;

// Undirected link stored with canonical endpoint ordering (a < b).
struct Link {
    NodeId a = 0;
    NodeId b = 0;
    auto operator<=>(const Link&) const = default;
};

inline Link make_link(NodeId x, NodeId y) { return x < y ? Link{x, y} : Link{y, x}; }

std::string link_str(const Link& e);

// Substrate graph. Links fail independently with probability rho in [0, 1).
struct PhysicalNetwork {
    std::set<NodeId> nodes;
    std::map<Link, double> failure_prob;

    bool has_link(const Link& e) const { return failure_prob.count(e) != 0; }
    double rho(const Link& e) const;
    // Sorted neighbor lists keyed by node; deterministic iteration order.
    std::map<NodeId, std::vector<NodeId>> adjacency() const;
    bool operator==(const PhysicalNetwork&) const = default;
};

// Overlay/demand graph. Must be connected (otherwise no spanning tree exists).
struct LogicalNetwork {
    std::set<NodeId> nodes;
    std::set<Link> links;

    std::map<NodeId, std::vector<NodeId>> adjacency() const;
    bool operator==(const LogicalNetwork&) const = default;
};

// One-to-one assignment of logical nodes onto physical nodes.
struct NodeMapping {
    std::map<NodeId, NodeId> assign;

    NodeId at(NodeId logical) const;
    bool operator==(const NodeMapping&) const = default;
};

struct CrossLayerInstance {
    std::string name;
    PhysicalNetwork physical;
    LogicalNetwork logical;
    NodeMapping node_map;

    // Throws ValidationError on any structural invariant violation.
    void validate() const;
    bool operator==(const CrossLayerInstance&) const = default;
};

// Routing of logical links over physical simple paths. Keys are canonical
// logical links; each route is stored oriented from m(a) to m(b).
struct LinkMapping {
    std::map<Link, std::vector<NodeId>> routes;

    bool total_over(const LogicalNetwork& logical) const;
    bool operator==(const LinkMapping&) const = default;
};

// Physical links traversed by a node sequence.
std::set<Link> route_links(const std::vector<NodeId>& route);

// Checks that `route` is a simple path in `phys` joining the mapped endpoints
// of logical link `u`; throws ValidationError otherwise.
void validate_route(const CrossLayerInstance& inst, const Link& u, const std::vector<NodeId>& route);

struct ParsedInstance {
    CrossLayerInstance instance;
    std::optional<LinkMapping> routes;
};

// Parses the .xln instance format (sections [physical], [logical], [node_map],
// optional [routes]); validates everything. Throws ParseError/ValidationError.
ParsedInstance parse_instance(const std::string& text);

ParsedInstance load_instance(const std::string& path);

// Canonical serialization; parse(serialize(x)) == x.
std::string serialize_instance(const CrossLayerInstance& inst, const LinkMapping* routes = nullptr);

struct SurvivingSubgraph {
    std::set<Link> surviving; // logical links whose routes avoid every failed physical link
    bool connected = false;   // V_L connected using only surviving links
};

SurvivingSubgraph surviving_logical_subgraph(const CrossLayerInstance& inst, const LinkMapping& m,
                                             const std::set<Link>& failed);

} // namespace xsurv
